"""The braid arrangement: one hyperplane x_i = x_j per coordinate pair.

Its complement is the set of points with pairwise distinct coordinates, so
everything here has a combinatorial shadow: affine complements count
falling factorials q(q-1)...(q-m+1), the contained lines all run in the
all-ones direction and partition the complement into (q-1)(q-2)...(q-m+1)
parallel classes, and picking one point per class gives a minimal blocking
set for the line family without any search.

escape_parameter is the constructive heart: for two complement points
whose joining line leaves the complement, it produces the parameter and
the point where the line lands on a hyperplane, pinned to the least
coordinate pair that can serve.
"""

from dataclasses import dataclass
from itertools import permutations

from .arrangement import Arrangement, arrangement_make, complement
from .blocking import (CONTAINED, MINIMAL, PLAIN, build_instance,
                       is_blocking, is_minimal, solve_instance)
from .errors import BadChooser, DimensionMismatch, IdenticalPoints
from .geometry import AFFINE, PROJECTIVE, Space, span, space
from .solver import SearchResult


@dataclass(frozen=True)
class BraidSpec:
    """Coordinate count and field size for a braid arrangement.

    m counts coordinates, so the ambient space is AG(m,q) for the affine
    kind and PG(m-1,q) for the projective one.  index_base only relabels
    the coordinate pair reported by escape_parameter (0 keeps internal
    positions, 1 numbers coordinates from one).
    """
    m: int
    q: int
    kind: str = AFFINE
    index_base: int = 0

    def ambient(self):
        n = self.m if self.kind == AFFINE else self.m - 1
        return space(self.kind, n, self.q)


def _resolve(src):
    """Accept a Space, a BraidSpec, or a bare field size q (meaning the
    affine braid in q coordinates over GF(q)).  Returns (space, base)."""
    if isinstance(src, Space):
        return src, 0
    if isinstance(src, BraidSpec):
        return src.ambient(), src.index_base
    if isinstance(src, int):
        return space(AFFINE, src, src), 0
    raise TypeError("expected a space, a braid spec, or a field size, got %r"
                    % (src,))


def braid_arrangement(src):
    """x_i - x_j = 0 for every pair of coordinate positions i < j."""
    sp, _ = _resolve(src)
    fq = sp.field
    neg1 = fq.neg(1)
    m = sp.ncoords
    rows = []
    for i in range(m):
        for j in range(i + 1, m):
            row = [0] * (sp.n + 1)
            row[i] = 1
            row[j] = neg1
            if sp.kind == AFFINE:
                row[-1] = 0  # constant slot stays empty
            rows.append(tuple(row))
    return arrangement_make(sp, rows)


def _injective_ranks(m, q):
    # affine points enumerate in coordinate-lex order, so a tuple's index
    # is its base-q value; injective tuples come straight from permutations
    out = []
    for tup in permutations(range(q), m):
        r = 0
        for c in tup:
            r = r * q + c
        out.append(r)
    out.sort()
    return tuple(out)


def braid_complement_points(src):
    """Complement members by the distinct-coordinates test alone, no form
    evaluation.  Affine members are generated directly as injective
    coordinate tuples and ranked, never by filtering the full point list,
    so the empty regime m > q costs nothing at any size.  Projective
    representatives are filtered: scaling preserves coordinate collisions,
    so the test is well defined on normalized representatives."""
    if isinstance(src, int):
        return _injective_ranks(src, src)
    if isinstance(src, BraidSpec) and src.kind == AFFINE:
        return _injective_ranks(src.m, src.q)
    sp, _ = _resolve(src)
    if sp.kind == AFFINE:
        return _injective_ranks(sp.ncoords, sp.q)
    out = []
    for i, pt in enumerate(sp.points):
        if len(set(pt)) == len(pt):
            out.append(i)
    return tuple(out)


def line_in_complement(src, x, y):
    """A line through two complement points stays inside the complement
    exactly when their difference is a multiple of the all-ones vector."""
    sp, _ = _resolve(src)
    fq = sp.field
    xc = sp.points[x] if isinstance(x, int) else tuple(x)
    yc = sp.points[y] if isinstance(y, int) else tuple(y)
    if sp.kind != AFFINE:
        raise DimensionMismatch("the contained-line test is affine")
    if xc == yc:
        raise IdenticalPoints("need two distinct points")
    d = [fq.sub(a, b) for a, b in zip(xc, yc)]
    return all(v == d[0] for v in d)


def escape_parameter(src, x, y):
    """Where the line through x and y leaves the complement.

    Returns ((i, j), t0, P): the least coordinate pair that separates the
    direction, the parameter with P = y + t0 (x - y), and the landing
    point, which satisfies P_i = P_j.  t0 is never 0 or 1 (the endpoints
    are complement points); both facts are checked on the constructed P
    rather than assumed.  Returns None when the line never leaves.
    """
    sp, base = _resolve(src)
    if sp.kind != AFFINE:
        raise DimensionMismatch("escape parameters are defined in affine space")
    fq = sp.field
    xc = sp.points[x] if isinstance(x, int) else tuple(x)
    yc = sp.points[y] if isinstance(y, int) else tuple(y)
    if xc == yc:
        raise IdenticalPoints("need two distinct points")
    d = [fq.sub(a, b) for a, b in zip(xc, yc)]
    pair = None
    for i in range(len(d)):
        for j in range(i + 1, len(d)):
            if d[i] != d[j]:
                pair = (i, j)
                break
        if pair:
            break
    if pair is None:
        return None  # direction is a multiple of all-ones, line contained
    i, j = pair
    t0 = fq.div(fq.sub(yc[j], yc[i]), fq.sub(d[i], d[j]))
    P = tuple(fq.add(yc[k], fq.mul(t0, d[k])) for k in range(len(d)))
    assert P[i] == P[j] and t0 not in (0, 1)
    return (i + base, j + base), t0, P


def braid_lines(src):
    """The lines contained in the affine braid complement: one per
    representative with first coordinate 0, all running in the all-ones
    direction.  Empty when m > q (no injective tuples at all)."""
    sp, _ = _resolve(src)
    if sp.kind != AFFINE:
        raise DimensionMismatch("contained braid lines are affine")
    members = set(braid_complement_points(sp))
    ones = (1,) * sp.ncoords
    fq = sp.field
    out = []
    for idx in sorted(members):
        pt = sp.points[idx]
        if pt[0] != 0:
            continue
        other = tuple(fq.add(a, b) for a, b in zip(pt, ones))
        fl = span(sp, [pt, other])
        assert all(p in members for p in fl.points)
        out.append(fl)
    out.sort(key=lambda fl: fl.sort_key())
    return out


def braid_transversal(src, chooser=None):
    """One point per contained line.  The lines are parallel, hence
    pairwise disjoint, so the result blocks the line family minimally:
    every chosen point keeps its own line as a private trace.

    chooser may be None (lex-least point of each line), a callable taking
    the line, or a sequence giving one pick per line in braid_lines order;
    picks may be indices or coordinate tuples and must lie on their line.
    """
    sp, _ = _resolve(src)
    lines = braid_lines(sp)
    picks = None
    if chooser is not None and not callable(chooser):
        picks = list(chooser)
        if len(picks) != len(lines):
            raise BadChooser("need one pick per line: %d picks for %d lines"
                             % (len(picks), len(lines)))
    picked = []
    for k, fl in enumerate(lines):
        if chooser is None:
            p = fl.points[0]
        elif picks is not None:
            p = picks[k]
        else:
            p = chooser(fl)
        if not isinstance(p, int):
            p = sp.index_of(p)
        if p not in fl.points:
            raise BadChooser("pick %r is not on its line %r" % (p, fl.points))
        picked.append(p)
    return tuple(sorted(set(picked)))


@dataclass
class BraidOutcome:
    space: object
    arrangement: Arrangement
    t: int
    scope: str
    convention: str
    verdict: str            # exists | not-exists | vacuous | empty
    vacuous_family: bool
    universe_size: int
    result: SearchResult = None
    instance: object = None


def _transversal_result(sp, inst, convention, size_cap):
    """Constructive answer for the parallel line family: the lines are
    pairwise disjoint, so any blocking set needs one point per line and
    the transversal meets that bound exactly.  Returns None whenever the
    family is not precisely the full parallel class (then the counting
    argument does not apply and the search decides)."""
    lines = braid_lines(sp)
    traces = set(tuple(fl.points) for fl in lines)
    if traces != set(inst.family):
        return None
    sets = [set(tr) for tr in traces]
    for a in range(len(sets)):
        for b in range(a + 1, len(sets)):
            if sets[a] & sets[b]:
                return None
    witness = braid_transversal(sp)
    if size_cap is not None and len(witness) > size_cap:
        return SearchResult("not-exists", nodes=0)
    assert is_blocking(inst, witness)
    if convention == MINIMAL:
        assert is_minimal(inst, witness)
    return SearchResult("exists", len(witness), witness, 0, 0.0)


def braid_existence(kind, n, q, t=1, scope=CONTAINED, convention=PLAIN,
                    size_cap=None, time_budget=None, workers=1):
    """Decide blocking-set existence for the braid complement.

    The projective complement is empty as soon as n > q - 1 (n + 1 coords
    cannot stay distinct), which gets its own verdict.  When the family is
    the affine parallel line class the answer is constructive (transversal
    plus the disjointness bound, re-verified); every other shape goes to
    the exact search.  Under the contained scope the family can come out
    empty; that is existence with the empty witness, flagged so callers
    can tell it apart from a substantive one.
    """
    sp = space(kind, n, q)
    arr = braid_arrangement(sp)
    comp = complement(sp, arr)
    if not comp.members:
        return BraidOutcome(sp, arr, t, scope, convention, "empty",
                            False, 0)
    inst = build_instance(sp, arr, t, scope)
    if (sp.kind == AFFINE and scope == CONTAINED and t == sp.n - 1
            and convention in (PLAIN, MINIMAL) and inst.family):
        res = _transversal_result(sp, inst, convention, size_cap)
        if res is not None:
            return BraidOutcome(sp, arr, t, scope, convention, res.verdict,
                                False, len(inst.universe), res, inst)
    res = solve_instance(inst, convention, size_cap=size_cap,
                         time_budget=time_budget, workers=workers)
    return BraidOutcome(sp, arr, t, scope, convention, res.verdict,
                        res.verdict == "vacuous", len(inst.universe),
                        res, inst)
