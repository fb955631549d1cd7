"""Exact arithmetic in quadratic fields Q(sqrt(d0)).

Elements are stored over the Q-basis (1, sqrt(d0)).  Ideals only appear
through their prime factorizations; a prime of degree one is named by the
residue prime p and the root r of the minimal polynomial of the integral
generator omega modulo p, i.e. the ideal (p, omega - r).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .arith import (
    factorize,
    integer_root,
    is_squarefree,
    kronecker,
    sqrt_mod,
    valuation,
)


@dataclass(frozen=True)
class QuadField:
    d0: int
    D: int

    @property
    def is_real(self) -> bool:
        return self.D > 0

    @property
    def signature(self) -> str:
        return "real" if self.D > 0 else "imaginary"

    @property
    def unit_rank(self) -> int:
        return 1 if self.D > 0 else 0

    @property
    def omega_is_half(self) -> bool:
        return self.d0 % 4 == 1

    def omega_minpoly(self) -> tuple[int, int]:
        """(T, N) with omega**2 - T*omega + N = 0."""
        if self.omega_is_half:
            return 1, (1 - self.d0) // 4
        return 0, -self.d0

    def roots_of_unity(self) -> int:
        if self.D == -4:
            return 4
        if self.D == -3:
            return 6
        return 2

    def __call__(self, a=0, b=0) -> "QuadElt":
        return QuadElt(self, Fraction(a), Fraction(b))

    @property
    def sqrt_d(self) -> "QuadElt":
        return QuadElt(self, Fraction(0), Fraction(1))

    @property
    def omega(self) -> "QuadElt":
        if self.omega_is_half:
            return QuadElt(self, Fraction(1, 2), Fraction(1, 2))
        return self.sqrt_d

    def from_omega(self, x, y) -> "QuadElt":
        """The element x + y*omega."""
        if self.omega_is_half:
            return QuadElt(self, Fraction(x) + Fraction(y, 2), Fraction(y, 2))
        return QuadElt(self, Fraction(x), Fraction(y))

    def __repr__(self):
        return f"Q(sqrt({self.d0}))"


def make_field(d0: int) -> QuadField:
    if d0 in (0, 1):
        raise ValueError(f"d0={d0} does not define a quadratic field")
    if not is_squarefree(d0):
        raise ValueError(f"d0={d0} is not squarefree")
    D = d0 if d0 % 4 == 1 else 4 * d0
    return QuadField(d0, D)


def field_from_discriminant(D: int) -> QuadField:
    d0 = D if D % 4 == 1 else D // 4
    K = make_field(d0)
    if K.D != D:
        raise ValueError(f"{D} is not a fundamental discriminant")
    return K


@dataclass(frozen=True)
class QuadElt:
    field: QuadField
    a: Fraction
    b: Fraction

    def _lift(self, o) -> "QuadElt":
        if isinstance(o, QuadElt):
            if o.field != self.field:
                raise ValueError("elements of different fields")
            return o
        return QuadElt(self.field, Fraction(o), Fraction(0))

    def __add__(self, o):
        o = self._lift(o)
        return QuadElt(self.field, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return QuadElt(self.field, -self.a, -self.b)

    def __sub__(self, o):
        return self + (-self._lift(o))

    def __rsub__(self, o):
        return self._lift(o) - self

    def __mul__(self, o):
        o = self._lift(o)
        d = self.field.d0
        return QuadElt(self.field, self.a * o.a + d * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def conj(self) -> "QuadElt":
        return QuadElt(self.field, self.a, -self.b)

    def norm(self) -> Fraction:
        return self.a * self.a - self.field.d0 * self.b * self.b

    def trace(self) -> Fraction:
        return 2 * self.a

    def inverse(self) -> "QuadElt":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        return QuadElt(self.field, self.a / n, -self.b / n)

    def __truediv__(self, o):
        return self * self._lift(o).inverse()

    def __rtruediv__(self, o):
        return self._lift(o) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = QuadElt(self.field, Fraction(1), Fraction(0))
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def __bool__(self):
        return not self.is_zero()

    def omega_coords(self) -> tuple[Fraction, Fraction]:
        if self.field.omega_is_half:
            return self.a - self.b, 2 * self.b
        return self.a, self.b

    def is_integral(self) -> bool:
        x, y = self.omega_coords()
        return x.denominator == 1 and y.denominator == 1

    def real_sign(self) -> int:
        """Sign of a + b*sqrt(d0) under the embedding with sqrt(d0) > 0 (real fields)."""
        if not self.field.is_real:
            raise ValueError("real_sign needs a real quadratic field")
        a, b, d = self.a, self.b, self.field.d0
        sa = (a > 0) - (a < 0)
        sb = (b > 0) - (b < 0)
        if sb == 0 or sa == sb:
            return sa or sb
        if sa == 0:
            return sb
        # opposite signs: compare a^2 with d*b^2
        return sa if a * a > d * b * b else sb

    def to_json(self) -> list[str]:
        return [str(self.a), str(self.b)]

    def __repr__(self):
        return f"({self.a} + {self.b}*sqrt({self.field.d0}))"


@dataclass(frozen=True)
class PrimeIdealFactor:
    """Prime ideal above p with its exponent.

    ``kind`` is 'split', 'inert' or 'ramified'; ``root`` is the residue of
    omega (None for inert primes, where the ideal is (p)).
    """

    p: int
    kind: str
    root: int | None
    exponent: int

    @property
    def residue_degree(self) -> int:
        return 2 if self.kind == "inert" else 1

    @property
    def key(self) -> tuple[int, int | None]:
        return (self.p, self.root)


def splitting_type(K: QuadField, p: int) -> str:
    k = kronecker(K.D, p)
    return {1: "split", -1: "inert", 0: "ramified"}[k]


def omega_roots_mod(K: QuadField, p: int) -> list[int]:
    """Sorted roots of the minimal polynomial of omega modulo p."""
    T, N = K.omega_minpoly()
    if p == 2:
        return [r for r in range(2) if (r * r - T * r + N) % 2 == 0]
    # (2r - T)^2 = T^2 - 4N = D'
    disc = T * T - 4 * N
    s = sqrt_mod(disc, p)
    if s is None:
        return []
    inv2 = pow(2, -1, p)
    return sorted({(T + s) * inv2 % p, (T - s) * inv2 % p})


def _primitive_decomposition(g: QuadElt) -> tuple[Fraction, int, int]:
    """g = c * (x + y*omega) with c > 0 rational and gcd(x, y) = 1."""
    x, y = g.omega_coords()
    den = math.lcm(x.denominator, y.denominator)
    xi, yi = int(x * den), int(y * den)
    g0 = math.gcd(xi, yi)
    return Fraction(g0, den), xi // g0, yi // g0


def ideal_factorization(g: QuadElt, budget: int | None = None) -> list[PrimeIdealFactor]:
    """Prime ideal factorization of the principal fractional ideal (g)."""
    if g.is_zero():
        raise ValueError("ideal_factorization of zero")
    K = g.field
    T, N = K.omega_minpoly()
    c, x, y = _primitive_decomposition(g)
    norm_prim = x * x + T * x * y + N * y * y
    primes = set()
    for n in (c.numerator, c.denominator, norm_prim):
        if abs(n) > 1:
            primes.update(factorize(n, budget))
    out: list[PrimeIdealFactor] = []
    for p in sorted(primes):
        vc = valuation(c.numerator, p) - valuation(c.denominator, p)
        vn = valuation(norm_prim, p) if norm_prim % p == 0 else 0
        kind = splitting_type(K, p)
        if kind == "inert":
            if vc:
                out.append(PrimeIdealFactor(p, kind, None, vc))
        elif kind == "ramified":
            (r,) = omega_roots_mod(K, p)
            e = 2 * vc + vn
            if e:
                out.append(PrimeIdealFactor(p, kind, r, e))
        else:
            for r in omega_roots_mod(K, p):
                e = vc + (vn if (x + y * r) % p == 0 else 0)
                if e:
                    out.append(PrimeIdealFactor(p, kind, r, e))
    return out


def selmer_member(g: QuadElt, m: int, budget: int | None = None) -> bool:
    """True iff every finite valuation of g is divisible by m."""
    if m < 2:
        raise ValueError("m must exceed 1")
    return all(f.exponent % m == 0 for f in ideal_factorization(g, budget))


def _integral_scale(g: QuadElt) -> int:
    x, y = g.omega_coords()
    return math.lcm(x.denominator, y.denominator)


def nth_root(g: QuadElt, n: int) -> QuadElt | None:
    """Some delta in K with delta**n == g, or None if there is none."""
    if g.is_zero():
        raise ValueError("nth_root of zero")
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        return g
    K = g.field
    L = _integral_scale(g)
    G = g * (L**n)
    norm = G.norm()
    if integer_root(int(norm), n) is None:
        return None
    size = max(abs(G.a), abs(G.b), 1)
    dps = len(str(size.numerator)) // n + len(str(abs(K.d0))) + 30
    with mpmath.workdps(dps):
        a = mpmath.mpf(G.a.numerator) / G.a.denominator
        b = mpmath.mpf(G.b.numerator) / G.b.denominator
        candidates = []
        if K.is_real:
            s = mpmath.sqrt(K.d0)
            embeds = [a + b * s, a - b * s]
            choices = []
            for val in embeds:
                mag = mpmath.root(abs(val), n)
                if n % 2:
                    choices.append([mag if val > 0 else -mag])
                else:
                    if val < 0:
                        return None
                    choices.append([mag, -mag])
            for r1 in choices[0]:
                for r2 in choices[1]:
                    candidates.append(((r1 + r2) / 2, (r1 - r2) / (2 * s)))
        else:
            s = mpmath.sqrt(-K.d0)
            z = mpmath.mpc(a, b * s)
            r = mpmath.root(abs(z), n)
            theta = mpmath.arg(z)
            for k in range(n):
                w = r * mpmath.expjpi((theta / mpmath.pi + 2 * k) / n)
                candidates.append((w.real, w.imag / s))
        for A, B in candidates:
            twoA = int(mpmath.nint(2 * A))
            twoB = int(mpmath.nint(2 * B))
            delta = QuadElt(K, Fraction(twoA, 2), Fraction(twoB, 2))
            if delta**n == G:
                return delta / L
    return None


def is_pth_power(g: QuadElt, p: int) -> bool:
    return nth_root(g, p) is not None


def is_mth_power(g: QuadElt, m: int) -> bool:
    return nth_root(g, m) is not None


def kummer_degree(g: QuadElt, m: int) -> int:
    """[K(g**(1/m)) : K], taken as the least degree of an irreducible factor of x**m - g.

    Equals m exactly when g is not a p-th power for any prime p | m and,
    when 4 | m, g is not of the form -4*beta**4.
    """
    if m < 2:
        raise ValueError("m must exceed 1")
    if g.is_zero():
        raise ValueError("kummer_degree of zero")
    degenerate = any(is_pth_power(g, p) for p in factorize(m))
    if not degenerate and m % 4 == 0:
        degenerate = is_pth_power(-g / 4, 4)
    if not degenerate:
        return m
    return _least_factor_degree(g, m)


def _least_factor_degree(g: QuadElt, m: int) -> int:
    import sympy

    X = sympy.Symbol("X")
    root = sympy.sqrt(g.field.d0)
    gamma = sympy.Rational(g.a.numerator, g.a.denominator) + sympy.Rational(g.b.numerator, g.b.denominator) * root
    _, factors = sympy.factor_list(X**m - gamma, X, extension=root)
    return int(min(sympy.degree(f, X) for f, _ in factors))


def linearly_disjoint_from_cyclotomic(K: QuadField, m: int) -> bool:
    """Q(sqrt D) lies in Q(zeta_m) iff its conductor |D| divides m."""
    if m < 2:
        raise ValueError("m must exceed 1")
    return m % abs(K.D) != 0


@dataclass(frozen=True)
class FundamentalUnit:
    element: QuadElt
    norm: int


def fundamental_unit(K: QuadField) -> FundamentalUnit:
    """Least unit > 1 via the continued fraction of omega."""
    if not K.is_real:
        raise ValueError("imaginary quadratic fields have no fundamental unit")
    d = K.d0
    P, Q = (1, 2) if K.omega_is_half else (0, 1)
    sq = math.isqrt(d)
    h1, h2, k1, k2 = 1, 0, 0, 1
    omega = K.omega
    while True:
        a = (P + sq) // Q
        h1, h2 = a * h1 + h2, h1
        k1, k2 = a * k1 + k2, k1
        e = omega * (-k1) + h1
        n = e.norm()
        if abs(n) == 1:
            return FundamentalUnit(_normalize_unit(e), int(n))
        P = a * Q - P
        Q = (d - P * P) // Q


def _normalize_unit(e: QuadElt) -> QuadElt:
    if e.real_sign() < 0:
        e = -e
    # now e > 0; pick e or 1/e so that the result exceeds 1
    if (e - 1).real_sign() < 0:
        e = e.inverse()
    return e
