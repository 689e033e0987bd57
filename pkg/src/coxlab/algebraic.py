"""Exact arithmetic in the real cyclotomic field Q(c), c = 2*cos(pi/N).

Every Coxeter matrix determines one such field (N = lcm of its finite
orders), and every quantity the word machinery needs -- bilinear form
entries, root coordinates -- lives in it.  Elements are polynomials in c
reduced modulo the minimal polynomial of c; the minimal polynomial is
derived from the cyclotomic polynomial of order 2N.  Sign determination
is by bisection refinement of a rational isolating interval for c with
exact interval evaluation; there is no floating point anywhere in the
decision path, and ``SIGN_STATS`` counts every decision so a run can
prove it stayed exact.

Coefficients are Python ints where possible and ``Fraction`` otherwise;
the two mix freely (equal values hash equal), and the monic integer
minimal polynomial keeps integer inputs integer through reduction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import BudgetError, ConsistencyError, FieldError

DEFAULT_N_CAP = 210


@dataclass
class SignStats:
    """Instrumentation for exactness audits (see ``reset``)."""

    decisions: int = 0
    refinements: int = 0
    float_fallbacks: int = 0  # no fallback path exists; must stay 0

    def reset(self):
        self.decisions = 0
        self.refinements = 0
        self.float_fallbacks = 0


SIGN_STATS = SignStats()


# ---------------------------------------------------------------------------
# dense polynomial helpers; coefficient lists ascending, int/Fraction entries


def _ptrim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


def _padd(a, b):
    n = max(len(a), len(b))
    return _ptrim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)
                   for i in range(n)])


def _psub(a, b):
    n = max(len(a), len(b))
    return _ptrim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)
                   for i in range(n)])


def _pmul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _ptrim(out)


def _peval(c, x):
    acc = Fraction(0)
    for coeff in reversed(c):
        acc = acc * x + coeff
    return acc


def _pderiv(c):
    return _ptrim([i * c[i] for i in range(1, len(c))])


def _pdivmod(a, b):
    """Quotient and remainder over the rationals; b nonzero."""
    a = [Fraction(x) for x in a]
    b = [Fraction(x) for x in b]
    q = [Fraction(0)] * max(1, len(a) - len(b) + 1)
    lead = b[-1]
    while len(a) >= len(b) and _ptrim(a):
        a = _ptrim(a)
        if len(a) < len(b):
            break
        shift = len(a) - len(b)
        factor = a[-1] / lead
        q[shift] = factor
        for i in range(len(b)):
            a[shift + i] -= factor * b[i]
        a = a[:-1]
    return _ptrim(q), _ptrim(a)


def _pdivexact_int(a, b):
    """Exact division of integer polynomials; remainder must vanish."""
    q, r = _pdivmod(a, b)
    if r:
        raise ConsistencyError("inexact polynomial division", (a, b))
    return [int(x) for x in q]


def cyclotomic(n, _memo={1: [-1, 1]}):
    """Integer coefficients of the n-th cyclotomic polynomial, ascending."""
    if n in _memo:
        return list(_memo[n])
    num = [0] * n + [1]
    num[0] = -1  # x^n - 1
    den = [1]
    for d in range(1, n):
        if n % d == 0:
            den = _pmul(den, cyclotomic(d))
    out = _pdivexact_int(num, den)
    _memo[n] = out
    return list(out)


def minpoly_two_cos(N):
    """Minimal polynomial of 2*cos(pi/N) over Q, monic with int coefficients.

    For N >= 2 the value is zeta + 1/zeta for zeta a primitive 2N-th root
    of unity; the polynomial comes from halving the palindromic cyclotomic
    polynomial of order 2N via x^k + x^-k = P_k(x + 1/x).
    """
    if N < 1:
        raise FieldError("N must be positive")
    if N == 1:
        return [2, 1]  # c = -2
    phi = cyclotomic(2 * N)
    d = (len(phi) - 1) // 2
    # P_k recurrence: P_0 = 2, P_1 = y, P_k = y*P_{k-1} - P_{k-2}
    pk_prev, pk = [2], [0, 1]
    out = [phi[d]]
    for k in range(1, d + 1):
        out = _padd(out, _pmul([phi[d + k]], pk))
        if k < d:
            pk_prev, pk = pk, _psub(_pmul([0, 1], pk), pk_prev)
    return [int(x) for x in out]


def _euler_phi(n):
    out, m, p = 1, n, 2
    while p * p <= m:
        if m % p == 0:
            out *= p - 1
            m //= p
            while m % p == 0:
                out *= p
                m //= p
        p += 1
    if m > 1:
        out *= m - 1
    return out


# ---------------------------------------------------------------------------
# Sturm chains, used once per field to isolate the embedding of c


def _sturm_chain(p):
    chain = [[Fraction(x) for x in p], [Fraction(x) for x in _pderiv(p)]]
    while _ptrim(chain[-1]) and len(_ptrim(chain[-1])) > 1:
        _, r = _pdivmod(chain[-2], chain[-1])
        if not r:
            break
        chain.append([-x for x in r])
    return chain


def _sign_variations(chain, x):
    signs = []
    for poly in chain:
        v = _peval(poly, x)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _count_roots(chain, a, b):
    return _sign_variations(chain, a) - _sign_variations(chain, b)


def _isolate_largest_root(p):
    """Rational interval (lo, hi) around the largest real root of p.

    All roots of the minimal polynomials used here lie in (-2, 2).
    The returned interval contains exactly one root and p changes sign
    at its endpoints.
    """
    chain = _sturm_chain(p)
    lo, hi = Fraction(-3), Fraction(3)
    while _count_roots(chain, lo, hi) > 1:
        mid = (lo + hi) / 2
        if _count_roots(chain, mid, hi) >= 1:
            lo = mid
        else:
            hi = mid
    # nudge endpoints so p(lo) * p(hi) < 0 (simple root inside)
    while _peval(p, lo) == 0:
        lo -= Fraction(1, 64)
    while _peval(p, hi) == 0:
        hi += Fraction(1, 64)
    return lo, hi


def _interval_eval(coeffs, lo, hi):
    """Exact range bound of the polynomial over [lo, hi] (Horner)."""
    vlo = vhi = Fraction(coeffs[-1])
    for c in reversed(coeffs[:-1]):
        p1, p2, p3, p4 = vlo * lo, vlo * hi, vhi * lo, vhi * hi
        vlo = min(p1, p2, p3, p4) + c
        vhi = max(p1, p2, p3, p4) + c
    return vlo, vhi


# ---------------------------------------------------------------------------


class FieldSpec:
    """The session field Q(c), c = 2*cos(pi/N).

    Immutable after construction apart from monotone narrowing of the
    isolating interval, which is semantically transparent (any valid
    isolating interval gives the same signs).
    """

    __slots__ = ("N", "minpoly", "degree", "_lo", "_hi")

    def __init__(self, N):
        if N < 2:
            raise FieldError("field order N must be at least 2")
        self.N = N
        mp = minpoly_two_cos(N)
        expected = max(1, _euler_phi(2 * N) // 2)
        if len(mp) - 1 != expected:
            raise ConsistencyError("minimal polynomial degree mismatch",
                                   (N, mp))
        # square-free check: gcd(mp, mp') must be constant
        if len(mp) > 2:
            g = _poly_gcd(mp, _pderiv(mp))
            if len(g) > 1:
                raise ConsistencyError("minimal polynomial not square-free",
                                       (N, mp))
        self.minpoly = tuple(mp)
        self.degree = len(mp) - 1
        if self.degree == 1:
            self._lo = self._hi = None
        else:
            self._lo, self._hi = _isolate_largest_root(list(mp))

    def __repr__(self):
        return f"FieldSpec(N={self.N}, degree={self.degree})"

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and other.N == self.N

    def __hash__(self):
        return hash(("FieldSpec", self.N))

    @property
    def isolating_interval(self):
        if self.degree == 1:
            c = -self.minpoly[0]
            return (Fraction(c) - 1, Fraction(c) + 1)
        return (self._lo, self._hi)

    # -- raw coefficient-tuple operations (hot path; ints stay ints) -------

    def reduce(self, coeffs):
        """Reduce an ascending coefficient list mod the minimal polynomial."""
        d = self.degree
        c = list(coeffs)
        mp = self.minpoly
        for i in range(len(c) - 1, d - 1, -1):
            top = c[i]
            if top != 0:
                for k in range(d):
                    c[i - d + k] -= top * mp[k]
            c.pop()
        while len(c) < d:
            c.append(0)
        return tuple(c)

    def raw_add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def raw_sub(self, a, b):
        return tuple(x - y for x, y in zip(a, b))

    def raw_neg(self, a):
        return tuple(-x for x in a)

    def raw_mul(self, a, b):
        d = self.degree
        if d == 1:
            return (a[0] * b[0],)
        out = [0] * (2 * d - 1)
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                out[i + j] += x * y
        return self.reduce(out)

    def raw_scale(self, a, q):
        return tuple(x * q for x in a)

    def raw_from_int(self, k):
        return tuple([k] + [0] * (self.degree - 1))

    def raw_is_zero(self, a):
        return all(x == 0 for x in a)

    def sign_raw(self, coeffs):
        """Exact sign of the value at the real embedding c; in {-1, 0, +1}."""
        SIGN_STATS.decisions += 1
        if all(x == 0 for x in coeffs):
            return 0
        if self.degree == 1:
            # the element is rational: evaluate at c = -minpoly[0]
            v = coeffs[0]
            return 1 if v > 0 else -1
        lo, hi = self._lo, self._hi
        mp = self.minpoly
        sign_lo = 1 if _peval(list(mp), lo) > 0 else -1
        while True:
            vlo, vhi = _interval_eval(coeffs, lo, hi)
            if vlo > 0:
                break
            if vhi < 0:
                break
            SIGN_STATS.refinements += 1
            mid = (lo + hi) / 2
            vm = _peval(list(mp), mid)
            # mid is never a root: mp is irreducible of degree >= 2
            if (1 if vm > 0 else -1) != sign_lo:
                hi = mid
            else:
                lo = mid
        self._lo, self._hi = lo, hi
        return 1 if vlo > 0 else -1

    # -- public element constructors ---------------------------------------

    def element(self, coeffs):
        return AlgebraicReal(self, self.reduce(list(coeffs)))

    def zero(self):
        return AlgebraicReal(self, self.raw_from_int(0))

    def one(self):
        return AlgebraicReal(self, self.raw_from_int(1))

    def rational(self, q):
        q = Fraction(q)
        if q.denominator == 1:
            return AlgebraicReal(self, self.raw_from_int(int(q)))
        return AlgebraicReal(self, tuple([q] + [0] * (self.degree - 1)))

    def generator(self):
        """The element c = 2*cos(pi/N) itself."""
        if self.degree == 1:
            return AlgebraicReal(self, (-self.minpoly[0],))
        return AlgebraicReal(self, self.reduce([0, 1]))

    def two_cos_pi_over_raw(self, m):
        """2*cos(pi/m) as a raw tuple; requires m | N.

        Uses 2*cos(k*t) = P_k(2*cos t) with the P_k recurrence, at k = N/m.
        """
        if m < 1 or self.N % m != 0:
            raise FieldError(f"order {m} does not divide field order {self.N}")
        k = self.N // m
        c = self.generator().coeffs
        prev, cur = self.raw_from_int(2), c
        for _ in range(k - 1):
            prev, cur = cur, self.raw_sub(self.raw_mul(c, cur), prev)
        return cur

    def cos_pi_over(self, m):
        """cos(pi/m) as a field element; requires m | N."""
        raw = self.two_cos_pi_over_raw(m)
        return AlgebraicReal(self, self.raw_scale(raw, Fraction(1, 2)))


def _poly_gcd(a, b):
    a = [Fraction(x) for x in a]
    b = [Fraction(x) for x in b]
    while _ptrim(b):
        _, r = _pdivmod(a, b)
        a, b = b, r
    return _ptrim(a)


class AlgebraicReal:
    """An element of the session field, reduced mod the minimal polynomial."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        self.field = field
        self.coeffs = coeffs  # fixed-length tuple, already reduced

    def _check(self, other):
        if self.field is not other.field and self.field != other.field:
            raise FieldError("elements from different fields")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.field.rational(other)
        self._check(other)
        return AlgebraicReal(self.field,
                             self.field.raw_add(self.coeffs, other.coeffs))

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.field.rational(other)
        self._check(other)
        return AlgebraicReal(self.field,
                             self.field.raw_sub(self.coeffs, other.coeffs))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return AlgebraicReal(self.field, self.field.raw_neg(self.coeffs))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return AlgebraicReal(self.field,
                                 self.field.raw_scale(self.coeffs, other))
        self._check(other)
        return AlgebraicReal(self.field,
                             self.field.raw_mul(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.field.rational(other)
        if not isinstance(other, AlgebraicReal):
            return NotImplemented
        return self.field == other.field and all(
            x == y for x, y in zip(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash((self.field.N, tuple(Fraction(x) for x in self.coeffs)))

    def is_zero(self):
        return self.field.raw_is_zero(self.coeffs)

    def sign(self):
        return self.field.sign_raw(self.coeffs)

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __repr__(self):
        terms = []
        for i, x in enumerate(self.coeffs):
            if x == 0:
                continue
            if i == 0:
                terms.append(str(x))
            elif i == 1:
                terms.append(f"{x}*c")
            else:
                terms.append(f"{x}*c^{i}")
        body = " + ".join(terms) if terms else "0"
        return f"<{body} | c=2cos(pi/{self.field.N})>"


def lcm(a, b):
    return a * b // gcd(a, b)


def field_for(matrix, n_cap=DEFAULT_N_CAP):
    """Field spec for a Coxeter matrix: N = lcm of its finite orders.

    Every finite order m then divides N, so each 2*cos(pi/m) lies in the
    field.  A matrix with no off-diagonal finite order (or rank one)
    gets N = 2, i.e. the rationals.
    """
    n = 2
    for m in matrix.finite_orders():
        n = lcm(n, m)
        if n > n_cap:
            raise BudgetError(f"field order {n} exceeds cap {n_cap}")
    return FieldSpec(n)
