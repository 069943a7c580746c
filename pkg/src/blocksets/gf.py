"""GF(q) arithmetic for prime powers q = p^e.

Elements are integer codes 0..q-1.  The code of an element is the base-p
packing of its polynomial coefficients: code = sum(c_i * p^i) where c_i is
the coefficient of x^i in the residue polynomial.  0 and 1 are therefore
always the additive and multiplicative identities.

The reducing modulus is not a free choice: field_make picks, for each (p, e),
the lexicographically smallest monic irreducible of degree e over GF(p),
comparing coefficient vectors written leading-coefficient-first (constant
term last).  That makes every element code, and everything built on top of
the field, reproducible across runs and machines.
"""

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product

from .errors import DivisionByZero, NotPrimePower, TooLarge

Q_CAP = 2 ** 16
# Full q x q tables only up to this; larger fields compute operations on
# demand (the q^2 table at the Q_CAP would not fit in memory).
TABLE_CAP = 512


def _factor_prime_power(q):
    if q < 2:
        raise NotPrimePower("q must be at least 2, got %r" % (q,))
    n = q
    p = None
    for cand in range(2, n + 1):
        if cand * cand > n:
            p = n  # leftover factor is prime
            break
        if n % cand == 0:
            p = cand
            break
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    if n != 1:
        raise NotPrimePower("q=%d is not a prime power" % q)
    return p, e


# Polynomials over GF(p) are coefficient lists, low degree first, no
# trailing zeros (the zero polynomial is the empty list).

def _poly_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a, m, p):
    a = list(a)
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i] % p
        if c:
            f = (c * inv_lead) % p
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - f * m[j]) % p
    del a[dm:]
    return _poly_trim(a)


def _poly_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _poly_trim(out)


def _divides(d, m, p):
    """True if polynomial d divides m over GF(p)."""
    return not _poly_mod(m, d, p)


def _is_irreducible(m, p):
    """Trial division by every monic polynomial of degree 1..deg(m)//2."""
    deg = len(m) - 1
    for k in range(1, deg // 2 + 1):
        for tail in product(range(p), repeat=k):
            d = list(tail) + [1]  # monic of degree k
            if _divides(d, m, p):
                return False
    return True


def _canonical_modulus(p, e):
    """Smallest monic irreducible of degree e, ordered by the coefficient
    vector written leading-first / constant-last."""
    if e == 1:
        return (1, 0)  # x
    for head in product(range(p), repeat=e):
        # head = (c_{e-1}, ..., c_0) scanned in ascending lex order
        m = [head[e - 1 - i] for i in range(e)] + [1]  # low-first for the math
        if _is_irreducible(m, p):
            return (1,) + head
    raise NotPrimePower("no irreducible of degree %d over GF(%d)" % (e, p))  # unreachable


@dataclass(eq=False)
class FieldSpec:
    """A concrete GF(q) with its reduction modulus and operation tables."""

    q: int
    p: int
    e: int
    modulus: tuple  # coefficient vector, leading coefficient first, constant last
    add_table: list = field(default=None, repr=False)
    mul_table: list = field(default=None, repr=False)
    inv_table: list = field(default=None, repr=False)
    neg_table: list = field(default=None, repr=False)

    # -- element codec -------------------------------------------------

    def coeffs(self, a):
        """Base-p digits of the code, low degree first, length e."""
        out = []
        for _ in range(self.e):
            out.append(a % self.p)
            a //= self.p
        return out

    def code(self, coeffs):
        a = 0
        for c in reversed(coeffs):
            a = a * self.p + (c % self.p)
        return a

    def _check(self, a):
        if not isinstance(a, int) or not 0 <= a < self.q:
            raise ValueError("element code %r outside 0..%d" % (a, self.q - 1))

    # -- operations -----------------------------------------------------

    def add(self, a, b):
        if self.add_table is not None:
            return self.add_table[a][b]
        return self._add_raw(a, b)

    def neg(self, a):
        if self.neg_table is not None:
            return self.neg_table[a]
        return self._neg_raw(a)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self.mul_table is not None:
            return self.mul_table[a][b]
        return self._mul_raw(a, b)

    def inv(self, a):
        if a == 0:
            raise DivisionByZero("0 has no multiplicative inverse in GF(%d)" % self.q)
        if self.inv_table is not None:
            return self.inv_table[a]
        return self.pow(a, self.q - 2)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, k):
        self._check(a)
        if k < 0:
            return self.pow(self.inv(a), -k)
        result = 1
        base = a
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def elements(self):
        return range(self.q)

    # -- raw (table-free) arithmetic -------------------------------------

    def _add_raw(self, a, b):
        self._check(a)
        self._check(b)
        if self.e == 1:
            return (a + b) % self.p
        p = self.p
        out = 0
        mult = 1
        while a or b:
            out += ((a % p + b % p) % p) * mult
            a //= p
            b //= p
            mult *= p
        return out

    def _neg_raw(self, a):
        self._check(a)
        if self.e == 1:
            return (-a) % self.p
        p = self.p
        out = 0
        mult = 1
        while a:
            out += ((p - a % p) % p) * mult
            a //= p
            mult *= p
        return out

    def _mul_raw(self, a, b):
        self._check(a)
        self._check(b)
        if self.e == 1:
            return (a * b) % self.p
        m_low = [self.modulus[-1 - i] for i in range(self.e + 1)]
        prod_ = _poly_mul(_poly_trim(self.coeffs(a)), _poly_trim(self.coeffs(b)), self.p)
        return self.code(_poly_mod(prod_, m_low, self.p) + [0] * self.e)

    # -- misc -------------------------------------------------------------

    def modulus_str(self):
        terms = []
        deg = self.e
        for i, c in enumerate(self.modulus):
            d = deg - i
            if c == 0:
                continue
            if d == 0:
                terms.append(str(c))
            elif d == 1:
                terms.append("x" if c == 1 else "%dx" % c)
            else:
                terms.append("x^%d" % d if c == 1 else "%dx^%d" % (c, d))
        return "+".join(terms) if terms else "0"

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and self.q == other.q

    def __hash__(self):
        return hash(("FieldSpec", self.q))

    def __repr__(self):
        return "FieldSpec(q=%d, p=%d, e=%d, modulus=%s)" % (
            self.q, self.p, self.e, self.modulus_str())


def _build_tables(fq):
    q = fq.q
    add = [[fq._add_raw(a, b) for b in range(q)] for a in range(q)]
    neg = [fq._neg_raw(a) for a in range(q)]
    mul = [[fq._mul_raw(a, b) for b in range(q)] for a in range(q)]
    inv = [None] * q
    for a in range(1, q):
        row = mul[a]
        for b in range(1, q):
            if row[b] == 1:
                inv[a] = b
                break
    fq.add_table, fq.neg_table, fq.mul_table, fq.inv_table = add, neg, mul, inv


def _validate_tables(fq):
    """Structural sanity on freshly built tables: identities, inverses, and
    the latin-square property of both operation tables.  Full associativity
    and distributivity exhaustion lives in the test suite."""
    q = fq.q
    full = list(range(q))
    for a in range(q):
        assert fq.add_table[a][0] == a
        assert fq.mul_table[a][1] == a
        assert fq.mul_table[a][0] == 0
        assert fq.add_table[a][fq.neg_table[a]] == 0
        assert sorted(fq.add_table[a]) == full
        if a:
            assert fq.mul_table[fq.inv_table[a]][a] == 1
            assert sorted(fq.mul_table[a][1:] + [0]) == full
        assert fq.add_table[a] == [fq.add_table[b][a] for b in range(q)]
        assert fq.mul_table[a] == [fq.mul_table[b][a] for b in range(q)]
    if q <= 16:  # cheap enough to exhaust at construction
        for a in range(q):
            for b in range(q):
                for c in range(q):
                    assert fq.add_table[fq.add_table[a][b]][c] == fq.add_table[a][fq.add_table[b][c]]
                    assert fq.mul_table[fq.mul_table[a][b]][c] == fq.mul_table[a][fq.mul_table[b][c]]
                    assert fq.mul_table[a][fq.add_table[b][c]] == fq.add_table[fq.mul_table[a][b]][fq.mul_table[a][c]]


@lru_cache(maxsize=None)
def field_make(q):
    """Construct GF(q).  Raises NotPrimePower for bad q, TooLarge beyond the cap."""
    if not isinstance(q, int):
        raise NotPrimePower("q must be an integer, got %r" % (q,))
    if q > Q_CAP:
        raise TooLarge("q=%d exceeds the cap %d" % (q, Q_CAP))
    p, e = _factor_prime_power(q)
    fq = FieldSpec(q=q, p=p, e=e, modulus=_canonical_modulus(p, e))
    if q <= TABLE_CAP:
        _build_tables(fq)
        _validate_tables(fq)
    return fq
