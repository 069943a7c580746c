"""Blocking-set instances over arrangement complements, and everything
that decides them.

An instance fixes a universe (the complement points, in canonical space
order), a family of traces that must all be hit, and a forbidden list of
traces that must not be fully swallowed when the nontrivial convention is
in force.  Two scopes build the family geometrically: "contained" takes
the flats lying entirely inside the complement, "touching" takes the trace
of every flat that meets it.  The blocked dimension is n - t throughout;
forbidden traces come from dimension t.

Decision routes are deliberately redundant: the branch-and-bound engine in
solver.py gives the fast exact answer, exhaustive_oracle re-derives it by
plain subset enumeration on small universes, and every witness returned by
the fast route is re-checked here with direct set loops before it leaves.
"""

import time
from dataclasses import dataclass, field

from . import solver
from .arrangement import (Arrangement, HyperplaneForm, arrangement_make,
                          complement, evaluate_form, flats_in_complement,
                          touching_traces)
from .errors import (DimensionOutOfRange, DimensionTooSmall,
                     FlatDisjointFromUniverse, FlatNotContained,
                     NotBlocking, NotInUniverse, PreconditionFailed,
                     SearchTimeout, SpaceTooLarge, TooLarge)
from .geometry import Flat, Space, flats_within
from .solver import ORACLE_FULL_CAP, SearchResult

CONTAINED = "contained"
TOUCHING = "touching"
SCOPES = (CONTAINED, TOUCHING)

PLAIN = "plain"
MINIMAL = "minimal"
NONTRIVIAL = "nontrivial"
CONVENTIONS = (PLAIN, MINIMAL, NONTRIVIAL)

SEARCH_UNIVERSE_CAP = 1 << 20  # bitmask width guard for the exact search


@dataclass(eq=False)
class BlockingInstance:
    """A hitting problem over a complement.

    universe and every trace are sorted tuples of point indices into the
    space's canonical enumeration.  family_flats, when present, aligns
    with family and names the flat each trace came from; same for the
    forbidden side.  t is the level the instance was built at (restriction
    can push it to 0 or below; blocked_dim stays the ambient n - t and is
    what the traces actually mean).
    """
    space: Space
    t: int
    universe: tuple
    family: tuple
    forbidden: tuple = ()
    family_flats: tuple = None
    forbidden_flats: tuple = None
    arrangement: Arrangement = None
    scope: str = "custom"
    blocked_dim: int = None

    def __post_init__(self):
        npts = self.space.npoints
        for p in self.universe:
            if not isinstance(p, int) or not 0 <= p < npts:
                raise NotInUniverse("%r is not a point index of %r" % (p, self.space))
        self.universe = tuple(sorted(set(self.universe)))
        uset = frozenset(self.universe)
        self.universe_set = uset
        fam = []
        for tr in self.family:
            tr = tuple(sorted(set(tr)))
            if not tr:
                raise ValueError("empty trace in family")
            for p in tr:
                if p not in uset:
                    raise NotInUniverse("family trace point %r outside universe" % (p,))
            fam.append(tr)
        self.family = tuple(fam)
        forb = []
        for tr in self.forbidden:
            tr = tuple(sorted(set(tr)))
            for p in tr:
                if p not in uset:
                    raise NotInUniverse("forbidden trace point %r outside universe" % (p,))
            if tr:
                forb.append(tr)
        self.forbidden = tuple(forb)
        if self.blocked_dim is None:
            self.blocked_dim = self.space.n - self.t

    def __repr__(self):
        return ("BlockingInstance(%r, t=%d, scope=%s, |universe|=%d, "
                "|family|=%d, |forbidden|=%d)" % (
                    self.space, self.t, self.scope, len(self.universe),
                    len(self.family), len(self.forbidden)))


def make_instance(sp, t, universe, family, forbidden=(), family_flats=None,
                  forbidden_flats=None, arrangement=None, scope="custom",
                  blocked_dim=None):
    return BlockingInstance(sp, t, tuple(universe), tuple(family),
                            tuple(forbidden), family_flats, forbidden_flats,
                            arrangement, scope, blocked_dim)


def build_instance(sp, arr, t, scope=CONTAINED):
    """Geometric constructor: universe = complement of arr in sp, family =
    traces of (n-t)-flats under the given scope, forbidden = traces of
    t-flats under the same scope."""
    if scope not in SCOPES:
        raise ValueError("scope must be one of %s" % (SCOPES,))
    if not 1 <= t <= sp.n:
        raise DimensionOutOfRange("level t=%d outside 1..%d" % (t, sp.n))
    comp = complement(sp, arr)
    d = sp.n - t
    if scope == CONTAINED:
        fam_flats = tuple(flats_in_complement(comp, d))
        family = tuple(fl.points for fl in fam_flats)
        forb_flats = tuple(flats_in_complement(comp, t))
        forbidden = tuple(fl.points for fl in forb_flats)
    else:
        pairs = touching_traces(comp, d)
        fam_flats = tuple(fl for fl, _ in pairs)
        family = tuple(tr for _, tr in pairs)
        fpairs = touching_traces(comp, t)
        forb_flats = tuple(fl for fl, _ in fpairs)
        forbidden = tuple(tr for _, tr in fpairs)
    return make_instance(sp, t, comp.members, family, forbidden,
                         family_flats=fam_flats, forbidden_flats=forb_flats,
                         arrangement=arr, scope=scope, blocked_dim=d)


def _as_pointset(inst, candidate):
    """Candidate points as a set of indices; coordinate tuples are
    accepted and looked up."""
    pts = set()
    for p in candidate:
        if not isinstance(p, int):
            p = inst.space.index_of(p)
        if p not in inst.universe_set:
            raise NotInUniverse("point %r not in the instance universe" % (p,))
        pts.add(p)
    return pts


def is_blocking(inst, candidate):
    """Direct loop: every family trace meets the candidate set."""
    pts = _as_pointset(inst, candidate)
    for tr in inst.family:
        if not any(p in pts for p in tr):
            return False
    return True


def is_nontrivial(inst, candidate):
    """No forbidden trace is entirely inside the candidate set."""
    pts = _as_pointset(inst, candidate)
    for tr in inst.forbidden:
        if all(p in pts for p in tr):
            return False
    return True


def is_minimal(inst, candidate):
    """Every point owns a private trace (a trace it alone covers)."""
    pts = _as_pointset(inst, candidate)
    if not is_blocking(inst, pts):
        raise NotBlocking("candidate does not block, minimality undefined")
    for p in pts:
        private = False
        for tr in inst.family:
            hit = [x for x in tr if x in pts]
            if len(hit) == 1 and hit[0] == p:
                private = True
                break
        if not private:
            return False
    return True


def minimalize(inst, candidate):
    """Single descending pass; blocking is monotone, so the result is
    minimal and no revisit is needed."""
    pts = _as_pointset(inst, candidate)
    if not is_blocking(inst, pts):
        raise NotBlocking("cannot minimalize a non-blocking set")
    for p in sorted(pts, reverse=True):
        trimmed = pts - {p}
        if is_blocking(inst, trimmed):
            pts = trimmed
    return tuple(sorted(pts))


def min_blocking_set(inst, require_nontrivial=False, size_cap=None,
                     time_budget=None, workers=1):
    """Exact minimum blocking set.

    Verdicts: vacuous when the family is empty (the empty set blocks),
    exists with the lexicographically least minimum witness, not-exists
    when nothing within size_cap works (cap defaults to the whole
    universe).  Raises SearchTimeout past time_budget seconds.
    """
    start = time.monotonic()
    if len(inst.universe) > SEARCH_UNIVERSE_CAP:
        raise TooLarge("universe of %d points exceeds the search cap %d"
                       % (len(inst.universe), SEARCH_UNIVERSE_CAP))
    if not inst.family:
        return SearchResult("vacuous", 0, (), 0, time.monotonic() - start)
    tmasks = solver._build_masks(inst.universe, inst.family)
    fmasks = []
    if require_nontrivial and inst.forbidden:
        fmasks = solver._build_masks(inst.universe, inst.forbidden)
    size, wmask, nodes = solver.solve_masks(
        len(inst.universe), tmasks, fmasks,
        size_cap=size_cap, time_budget=time_budget, workers=workers)
    elapsed = time.monotonic() - start
    if size is None:
        return SearchResult("not-exists", None, None, nodes, elapsed)
    witness = tuple(inst.universe[b] for b in solver._mask_bits(wmask))
    assert is_blocking(inst, witness)
    if require_nontrivial:
        assert is_nontrivial(inst, witness)
    return SearchResult("exists", size, witness, nodes, elapsed)


def exhaustive_oracle(inst, require_nontrivial=False, size_cap=None):
    """Reference answer by subset enumeration, sizes ascending and subsets
    in index-lexicographic order.  Refuses universes above ORACLE_FULL_CAP
    points unless a size cap bounds the work."""
    start = time.monotonic()
    if not inst.family:
        return SearchResult("vacuous", 0, (), 0, time.monotonic() - start)
    tmasks = solver._build_masks(inst.universe, inst.family)
    fmasks = []
    if require_nontrivial and inst.forbidden:
        fmasks = solver._build_masks(inst.universe, inst.forbidden)
    size, wmask, checked = solver.oracle_masks(
        len(inst.universe), tmasks, fmasks, size_cap=size_cap)
    elapsed = time.monotonic() - start
    if size is None:
        return SearchResult("not-exists", None, None, checked, elapsed)
    witness = tuple(inst.universe[b] for b in solver._mask_bits(wmask))
    return SearchResult("exists", size, witness, checked, elapsed)


def solve_instance(inst, convention=PLAIN, size_cap=None, time_budget=None,
                   workers=1):
    """Convention front: plain and minimal run the same search (a minimum
    blocking set has a private trace for each point, so it is already
    minimal); nontrivial adds the forbidden constraints."""
    if convention not in CONVENTIONS:
        raise ValueError("convention must be one of %s" % (CONVENTIONS,))
    res = min_blocking_set(inst, require_nontrivial=(convention == NONTRIVIAL),
                           size_cap=size_cap, time_budget=time_budget,
                           workers=workers)
    if convention == MINIMAL and res.verdict == "exists":
        assert is_minimal(inst, res.witness)
    return res


def induced_subinstance(inst, flat):
    """Sub-instance inside a flat: keep the universe points lying in the
    flat and exactly those family/forbidden traces whose originating flat
    is contained in it.  Blocked dimension is unchanged (the kept traces
    still come from ambient (n-t)-flats); the level is re-expressed
    relative to the flat and may reach 0 or below, in which case the
    family side simply cannot be nonempty."""
    if inst.family_flats is None:
        raise ValueError("instance carries no flat provenance, cannot restrict")
    fset = set(flat.points)
    sub_universe = tuple(p for p in inst.universe if p in fset)
    fam_flats = []
    family = []
    for fl, tr in zip(inst.family_flats, inst.family):
        if set(fl.points) <= fset:
            fam_flats.append(fl)
            family.append(tr)
    forb_flats = []
    forbidden = []
    for fl, tr in zip(inst.forbidden_flats or (), inst.forbidden):
        if set(fl.points) <= fset:
            forb_flats.append(fl)
            forbidden.append(tr)
    t_sub = inst.t - (inst.space.n - flat.d)
    return make_instance(inst.space, t_sub, sub_universe, family, forbidden,
                         family_flats=tuple(fam_flats),
                         forbidden_flats=tuple(forb_flats),
                         arrangement=inst.arrangement, scope=inst.scope,
                         blocked_dim=inst.blocked_dim)


def restrict_blocking(inst, candidate, flat):
    """Cut a blocking set down to a flat.  The intersection blocks the
    induced sub-instance; that postcondition is asserted, not hoped for."""
    pts = _as_pointset(inst, candidate)
    if not is_blocking(inst, pts):
        raise NotBlocking("restriction needs a blocking set to start from")
    if flat.d <= inst.t:
        raise DimensionTooSmall(
            "flat dimension %d must exceed the level t=%d" % (flat.d, inst.t))
    fset = set(flat.points)
    if inst.scope == CONTAINED:
        if not fset <= inst.universe_set:
            raise FlatNotContained("flat leaves the complement")
    else:
        if not fset & inst.universe_set:
            raise FlatDisjointFromUniverse("flat misses the universe entirely")
    sub = induced_subinstance(inst, flat)
    part = tuple(sorted(pts & fset))
    assert is_blocking(sub, part)
    return sub, part


def join_blocking(c_complement, c_hyperplane, hyperplane, sp, t=1):
    """Glue a blocking set of the one-hyperplane complement (touching
    scope) to a set inside the hyperplane that hits every (n-t)-flat the
    hyperplane contains.  The union blocks the whole space at level t;
    asserted against the empty-arrangement instance before returning."""
    row = hyperplane.coeffs if isinstance(hyperplane, HyperplaneForm) else tuple(hyperplane)
    arr = arrangement_make(sp, [row])
    form = arr.forms[0]
    inst = build_instance(sp, arr, t, scope=TOUCHING)
    b1 = _as_pointset(inst, c_complement)
    for fl, tr in zip(inst.family_flats, inst.family):
        if not any(p in b1 for p in tr):
            raise PreconditionFailed(
                "complement part misses the trace of a flat, e.g. %r" % (tr[:4],))
    hset = set(i for i in range(sp.npoints) if evaluate_form(sp, form, i) == 0)
    b2 = set(p if isinstance(p, int) else sp.index_of(p) for p in c_hyperplane)
    if not b2 <= hset:
        raise PreconditionFailed("hyperplane part has points off the hyperplane")
    for fl in flats_within(sp, hset, sp.n - t):
        if not b2 & set(fl.points):
            raise PreconditionFailed(
                "hyperplane part misses a %d-flat inside the hyperplane" % (sp.n - t,))
    union = b1 | b2
    full = build_instance(sp, arrangement_make(sp, []), t, scope=CONTAINED)
    assert is_blocking(full, union)
    return tuple(sorted(union))


def guaranteed_existence_check(n, q, t=1):
    """Sufficient condition for existence at level t in dimension n: the
    field is at least 2^n.  One-way only; False decides nothing."""
    if not 1 <= t <= n:
        raise DimensionOutOfRange("level t=%d outside 1..%d" % (t, n))
    return q >= 2 ** n


@dataclass
class SubspaceCertificate:
    """A flat whose induced sub-instance provably has no blocking set;
    by restriction this rules out the ambient instance too."""
    flat: Flat
    sub: BlockingInstance
    result: SearchResult
    convention: str


def nonexistence_by_subspace(inst, convention=PLAIN, max_universe=ORACLE_FULL_CAP):
    """Search for a nonexistence certificate among flats inside the
    universe, dimensions ascending from blocked_dim to n, flats in
    canonical order.  A flat certifies when its sub-instance has a
    nonempty family, a universe small enough for the oracle, and the
    oracle says not-exists.  Returns None when nothing certifies (in
    particular whenever the ambient instance does have a blocking set)."""
    if convention not in CONVENTIONS:
        raise ValueError("convention must be one of %s" % (CONVENTIONS,))
    req = convention == NONTRIVIAL
    sp = inst.space
    for d in range(max(inst.blocked_dim, 0), sp.n + 1):
        if d <= inst.t:
            continue
        for fl in flats_within(sp, inst.universe_set, d):
            sub = induced_subinstance(inst, fl)
            if not sub.family:
                continue
            if len(sub.universe) > max_universe:
                continue
            res = exhaustive_oracle(sub, require_nontrivial=req)
            if res.verdict == "not-exists":
                return SubspaceCertificate(fl, sub, res, convention)
    return None


@dataclass
class ScanRow:
    n: int
    verdict: str   # exists | not-exists | vacuous | timeout | skipped
    size: int = None
    note: str = ""


@dataclass
class ScanReport:
    kind: str
    q: int
    t: int
    scope: str
    convention: str
    rows: list
    threshold: int = None   # largest n with verdict exists
    monotone: bool = True   # no not-exists below an exists


def threshold_scan(kind, q, t=1, n_max=4, scope=CONTAINED, convention=PLAIN,
                   arrangement_builder=None, size_cap=None, time_budget=None,
                   workers=1):
    """Row per dimension from n = t (the first level where the instance is
    defined) up to n_max.  The builder, when given, maps a space to the
    arrangement for that row; rows whose space or flat enumeration blows
    the guards are reported as skipped rather than aborting the scan."""
    from .geometry import space as make_space
    rows = []
    for n in range(max(t, 1), n_max + 1):
        try:
            sp = make_space(kind, n, q)
            arr = arrangement_builder(sp) if arrangement_builder else \
                arrangement_make(sp, [])
            inst = build_instance(sp, arr, t, scope)
        except (TooLarge, SpaceTooLarge) as exc:
            rows.append(ScanRow(n, "skipped", None, str(exc)))
            continue
        try:
            res = solve_instance(inst, convention, size_cap=size_cap,
                                 time_budget=time_budget, workers=workers)
        except SearchTimeout:
            rows.append(ScanRow(n, "timeout"))
            continue
        rows.append(ScanRow(n, res.verdict, res.size))
    threshold = None
    seen_not = False
    monotone = True
    for row in rows:
        if row.verdict == "exists":
            threshold = row.n
            if seen_not:
                monotone = False
        elif row.verdict == "not-exists":
            seen_not = True
    return ScanReport(kind, q, t, scope, convention, rows, threshold, monotone)


@dataclass
class ClassificationResult:
    category: str            # blocking-arrangement | unblocking-arrangement | neutral
    baseline: SearchResult
    with_arrangement: SearchResult
    minimal: bool = None
    pool_minimal: bool = None


def _exists_like(res):
    # vacuous means the empty set blocks, which is existence with a flag
    return res.verdict in ("exists", "vacuous")


def classify_arrangement(sp, arr, t=1, scope=CONTAINED, convention=PLAIN,
                         check_minimal=True, pool=None, size_cap=None,
                         time_budget=None, workers=1):
    """Compare existence with and without the arrangement.  The
    arrangement is blocking when it kills existence the empty arrangement
    had, unblocking when it creates it, neutral otherwise.  Minimality
    drops one form at a time; a caller-supplied pool widens the check to
    arbitrary smaller arrangements."""
    empty = arrangement_make(sp, [])
    base_inst = build_instance(sp, empty, t, scope)
    base = solve_instance(base_inst, convention, size_cap=size_cap,
                          time_budget=time_budget, workers=workers)
    inst = build_instance(sp, arr, t, scope)
    res = solve_instance(inst, convention, size_cap=size_cap,
                         time_budget=time_budget, workers=workers)
    e0, e1 = _exists_like(base), _exists_like(res)
    if e0 and not e1:
        category = "blocking-arrangement"
    elif e1 and not e0:
        category = "unblocking-arrangement"
    else:
        category = "neutral"
    out = ClassificationResult(category, base, res)
    if category == "neutral" or not check_minimal:
        return out

    def same_category(sub_arr):
        sub_inst = build_instance(sp, sub_arr, t, scope)
        sub_res = solve_instance(sub_inst, convention, size_cap=size_cap,
                                 time_budget=time_budget, workers=workers)
        se = _exists_like(sub_res)
        if category == "blocking-arrangement":
            return e0 and not se
        return se and not e0

    minimal = True
    forms = list(arr.forms)
    for i in range(len(forms)):
        rest = forms[:i] + forms[i + 1:]
        sub_arr = Arrangement(arr.kind, arr.n, arr.q, tuple(rest))
        if same_category(sub_arr):
            minimal = False
            break
    out.minimal = minimal
    if pool is not None:
        out.pool_minimal = True
        for cand in pool:
            if len(cand.forms) < len(arr.forms) and same_category(cand):
                out.pool_minimal = False
                break
    return out
