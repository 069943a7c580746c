"""Finite projective and affine spaces over GF(q).

Points are coordinate tuples of field codes.  A projective point is the
normalized representative of its scalar class (first nonzero coordinate
scaled to 1); an affine point is just a coordinate tuple.  The index of a
point is its position in the lexicographic enumeration of normalized
representatives, and everything downstream (complements, traces, witnesses)
speaks in these indices.

Flats carry a canonical basis so that equality is bit-for-bit:

* projective d-flat: the unique (d+1) x (n+1) reduced-row-echelon basis of
  its homogeneous span;
* affine d-flat: its lexicographically least member (which is exactly the
  coset representative with zeros in all pivot columns) plus the unique
  d x n reduced-row-echelon basis of its direction space.

Enumeration generates canonical echelon matrices directly instead of
deduplicating spans, so the count identities against Gaussian binomials are
structural rather than accidental.
"""

from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import combinations, product

from .errors import DimensionMismatch, DimensionOutOfRange, SpaceTooLarge, TooLarge
from .gf import FieldSpec, field_make

ENUM_GUARD = 2 ** 24

PROJECTIVE = "projective"
AFFINE = "affine"


def gaussian_binomial(m, k, q):
    """Number of k-dimensional linear subspaces of GF(q)^m, exact."""
    if k < 0 or k > m:
        return 0
    num = 1
    den = 1
    for i in range(k):
        num *= q ** (m - i) - 1
        den *= q ** (i + 1) - 1
    assert num % den == 0
    return num // den


def projective_point_count(n, q):
    return (q ** (n + 1) - 1) // (q - 1)


def flat_size(kind, d, q):
    """Number of points of a d-flat."""
    if kind == PROJECTIVE:
        return (q ** (d + 1) - 1) // (q - 1)
    return q ** d


def flat_count(kind, n, d, q):
    if kind == PROJECTIVE:
        return gaussian_binomial(n + 1, d + 1, q)
    return q ** (n - d) * gaussian_binomial(n, d, q)


@dataclass(eq=False)
class Space:
    """PG(n, q) or AG(n, q)."""

    kind: str
    n: int
    field: FieldSpec

    def __post_init__(self):
        if self.kind not in (PROJECTIVE, AFFINE):
            raise ValueError("kind must be %r or %r" % (PROJECTIVE, AFFINE))
        if self.n < 1:
            raise DimensionOutOfRange("space dimension must be >= 1, got %d" % self.n)

    @property
    def q(self):
        return self.field.q

    @property
    def ncoords(self):
        """Coordinates per point tuple."""
        return self.n + 1 if self.kind == PROJECTIVE else self.n

    @property
    def npoints(self):
        if self.kind == PROJECTIVE:
            return projective_point_count(self.n, self.q)
        return self.q ** self.n

    @cached_property
    def points(self):
        """All points, lexicographically ordered normalized tuples."""
        if self.npoints > ENUM_GUARD:
            raise SpaceTooLarge(
                "%s has %d points, beyond the enumeration guard %d"
                % (self, self.npoints, ENUM_GUARD))
        if self.kind == AFFINE:
            pts = [t for t in product(range(self.q), repeat=self.n)]
        else:
            pts = []
            for lead in range(self.n, -1, -1):
                zeros = (0,) * lead
                for tail in product(range(self.q), repeat=self.n - lead):
                    pts.append(zeros + (1,) + tail)
        return pts

    @cached_property
    def point_index(self):
        return {pt: i for i, pt in enumerate(self.points)}

    def normalize(self, coords):
        """Canonical representative of a coordinate tuple (identity for affine)."""
        coords = tuple(coords)
        if len(coords) != self.ncoords:
            raise DimensionMismatch(
                "expected %d coordinates, got %d" % (self.ncoords, len(coords)))
        for c in coords:
            if not isinstance(c, int) or not 0 <= c < self.q:
                raise ValueError("coordinate %r is not a GF(%d) code" % (c, self.q))
        if self.kind == AFFINE:
            return coords
        for c in coords:
            if c:
                if c == 1:
                    return coords
                f = self.field.inv(c)
                return tuple(self.field.mul(f, x) for x in coords)
        raise ValueError("the zero vector is not a projective point")

    def index_of(self, coords):
        return self.point_index[self.normalize(coords)]

    def __eq__(self, other):
        return (isinstance(other, Space) and self.kind == other.kind
                and self.n == other.n and self.q == other.q)

    def __hash__(self):
        return hash((self.kind, self.n, self.q))

    def __repr__(self):
        return "%s(%d,%d)" % ("PG" if self.kind == PROJECTIVE else "AG", self.n, self.q)


@lru_cache(maxsize=None)
def space(kind, n, q):
    """Cached Space constructor; reuses point tables across call sites."""
    return Space(kind, n, field_make(q))


def enumerate_points(sp):
    return list(sp.points)


# -- linear algebra over the field ---------------------------------------

def rref(rows, fq):
    """Reduced row echelon form.  Returns (pivot_cols, rows) with zero rows
    dropped; rows come back as tuples."""
    rows = [list(r) for r in rows]
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        lead = rows[r][c]
        if lead != 1:
            f = fq.inv(lead)
            rows[r] = [fq.mul(f, x) for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                g = rows[i][c]
                rows[i] = [fq.sub(rows[i][j], fq.mul(g, rows[r][j]))
                           for j in range(ncols)]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return pivots, [tuple(row) for row in rows[:r]]


def _vec_sub(u, v, fq):
    return tuple(fq.sub(a, b) for a, b in zip(u, v))


def _vec_add_scaled(u, lam, v, fq):
    if lam == 0:
        return u
    return tuple(fq.add(a, fq.mul(lam, b)) for a, b in zip(u, v))


def _reduce_by_rows(v, pivots, rows, fq):
    v = list(v)
    for p, row in zip(pivots, rows):
        c = v[p]
        if c:
            for j in range(len(v)):
                v[j] = fq.sub(v[j], fq.mul(c, row[j]))
    return tuple(v)


@dataclass(frozen=True)
class Flat:
    """A d-flat in canonical form.  base is None for projective flats."""

    kind: str
    d: int
    base: tuple
    rows: tuple
    points: tuple

    def sort_key(self):
        return (self.base or (), self.rows)

    def key(self):
        return (self.base, self.rows)

    def __repr__(self):
        head = "Flat(d=%d" % self.d
        if self.base is not None:
            head += ", base=%s" % (self.base,)
        return head + ", rows=%s)" % (self.rows,)


def _normalized_coeff_vectors(k, q):
    """Vectors of GF(q)^k with first nonzero entry 1, in leading-position
    order.  One per projective class; used to walk a flat's points."""
    for lead in range(k - 1, -1, -1):
        zeros = (0,) * lead
        for tail in product(range(q), repeat=k - 1 - lead):
            yield zeros + (1,) + tail


def _projective_flat(sp, rows):
    fq = sp.field
    pts = []
    for lam in _normalized_coeff_vectors(len(rows), sp.q):
        v = (0,) * sp.ncoords
        for li, row in zip(lam, rows):
            v = _vec_add_scaled(v, li, row, fq)
        pts.append(sp.point_index[v])  # combinations of rref rows are already normalized
    pts.sort()
    return Flat(PROJECTIVE, len(rows) - 1, None, tuple(rows), tuple(pts))


def _affine_flat(sp, base, rows):
    fq = sp.field
    pts = []
    for lam in product(range(sp.q), repeat=len(rows)):
        v = base
        for li, row in zip(lam, rows):
            v = _vec_add_scaled(v, li, row, fq)
        pts.append(sp.point_index[v])
    pts.sort()
    return Flat(AFFINE, len(rows), tuple(base), tuple(rows), tuple(pts))


def span(sp, pts):
    """Smallest flat containing the given points (indices or coord tuples)."""
    coords = [sp.points[p] if isinstance(p, int) else sp.normalize(p) for p in pts]
    if not coords:
        raise DimensionOutOfRange("span of an empty point set is undefined")
    fq = sp.field
    if sp.kind == PROJECTIVE:
        _, rows = rref(coords, fq)
        return _projective_flat(sp, rows)
    origin = coords[0]
    dirs = [_vec_sub(c, origin, fq) for c in coords[1:]]
    pivots, rows = rref(dirs, fq) if dirs else ([], [])
    base = _reduce_by_rows(origin, pivots, rows, fq)
    return _affine_flat(sp, base, rows)


def in_flat(sp, flat, point):
    """Membership test from the canonical basis, no point list needed."""
    coords = sp.points[point] if isinstance(point, int) else sp.normalize(point)
    fq = sp.field
    if flat.kind == PROJECTIVE:
        pivots = [next(j for j, x in enumerate(row) if x) for row in flat.rows]
        return not any(_reduce_by_rows(coords, pivots, flat.rows, fq))
    pivots = [next(j for j, x in enumerate(row) if x) for row in flat.rows]
    w = _vec_sub(coords, flat.base, fq)
    return not any(_reduce_by_rows(w, pivots, flat.rows, fq))


def iter_flats(sp, d):
    """Generate all d-flats by direct construction of canonical echelon
    bases: pivot-column choice, then free entries in row-major order."""
    if d < 0 or d > sp.n:
        raise DimensionOutOfRange("d=%d outside 0..%d" % (d, sp.n))
    q = sp.q
    if sp.kind == PROJECTIVE:
        k = d + 1
        m = sp.ncoords
        for pivots in combinations(range(m), k):
            pivot_set = set(pivots)
            free = [(r, c) for r in range(k) for c in range(m)
                    if c > pivots[r] and c not in pivot_set]
            for vals in product(range(q), repeat=len(free)):
                rows = [[0] * m for _ in range(k)]
                for r in range(k):
                    rows[r][pivots[r]] = 1
                for (r, c), v in zip(free, vals):
                    rows[r][c] = v
                yield _projective_flat(sp, [tuple(r) for r in rows])
    else:
        m = sp.n
        for pivots in combinations(range(m), d):
            pivot_set = set(pivots)
            free = [(r, c) for r in range(d) for c in range(m)
                    if c > pivots[r] and c not in pivot_set]
            nonpivot = [c for c in range(m) if c not in pivot_set]
            for vals in product(range(q), repeat=len(free)):
                rows = [[0] * m for _ in range(d)]
                for r in range(d):
                    rows[r][pivots[r]] = 1
                for (r, c), v in zip(free, vals):
                    rows[r][c] = v
                rows = [tuple(r) for r in rows]
                for bvals in product(range(q), repeat=len(nonpivot)):
                    base = [0] * m
                    for c, v in zip(nonpivot, bvals):
                        base[c] = v
                    yield _affine_flat(sp, tuple(base), rows)


def enumerate_flats(sp, d):
    """All d-flats sorted by canonical basis; length matches flat_count."""
    expected = flat_count(sp.kind, sp.n, d, sp.q)
    if expected > ENUM_GUARD:
        raise TooLarge("enumerating %d flats of dimension %d in %s exceeds the guard"
                       % (expected, d, sp))
    flats = sorted(iter_flats(sp, d), key=Flat.sort_key)
    assert len(flats) == expected
    return flats


def flats_within(sp, members, d):
    """All d-flats whose point set lies inside `members` (a set of point
    indices), grown from lower-dimensional flats by spanning.  Avoids
    enumerating the whole flat population when `members` is small."""
    if d < 0 or d > sp.n:
        raise DimensionOutOfRange("d=%d outside 0..%d" % (d, sp.n))
    members = set(members)
    if len(members) == sp.npoints:
        return enumerate_flats(sp, d)
    if not members:
        return []
    current = [span(sp, [p]) for p in sorted(members)]
    for level in range(1, d + 1):
        grown = {}
        need = flat_size(sp.kind, level, sp.q)
        for fl in current:
            lo = fl.points[0]
            for p in sorted(members):
                if p <= lo or p in fl.points:
                    continue
                cand = span(sp, list(fl.points) + [p])
                if cand.key() in grown:
                    continue
                if len(cand.points) == need and all(x in members for x in cand.points):
                    grown[cand.key()] = cand
        current = list(grown.values())
        if not current:
            return []
    return sorted(current, key=Flat.sort_key)
