"""Hyperelliptic Jacobians: Cantor arithmetic, torsion certificates, zeta functions.

Curves are y^2 = h(x).  Group arithmetic needs an odd-degree model (a single
point at infinity); even models pass through :func:`to_odd_model` first.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .arith import primes_up_to
from .poly import QQ, FiniteField, Poly

DEFAULT_ZETA_BUDGET = 10**7
DEFAULT_ENUMERATION_BUDGET = 2 * 10**6


class BadPrimeError(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class HyperCurve:
    h: Poly

    def __post_init__(self):
        if self.h.degree() < 1:
            raise ValueError("h must be nonconstant")

    @property
    def ring(self):
        return self.h.ring

    @property
    def genus(self) -> int:
        return (self.h.degree() - 1) // 2

    @property
    def is_odd(self) -> bool:
        return self.h.degree() % 2 == 1

    @property
    def p(self) -> int:
        return self.ring.characteristic

    def is_smooth(self) -> bool:
        return self.h.is_squarefree() and (self.ring.characteristic != 2)

    def reduce(self, p: int, k: int = 1) -> "HyperCurve":
        """Reduction of a rational model modulo p, over F_{p^k}."""
        if self.ring is not QQ:
            raise ValueError("reduce expects a curve over Q")
        F = FiniteField(p, k)
        if self.h.denominator() % p == 0:
            raise BadPrimeError(f"p={p} divides a denominator of h")
        hp = self.h.map_coeffs(F)
        if hp.degree() != self.h.degree():
            raise BadPrimeError(f"p={p} divides the leading coefficient of h")
        return HyperCurve(hp)

    def identity(self) -> "MumfordDiv":
        return MumfordDiv(Poly.one(self.ring), Poly.zero(self.ring))

    def to_json(self) -> dict:
        return {"h": self.h.to_strings(), "base": "Q" if self.ring is QQ else repr(self.ring)}


@dataclass(frozen=True)
class MumfordDiv:
    u: Poly
    v: Poly

    def is_identity(self) -> bool:
        return self.u.degree() == 0

    def __neg__(self):
        return MumfordDiv(self.u, (-self.v) % self.u if self.u.degree() > 0 else self.v)

    def key(self):
        return (self.u.c, self.v.c)

    def __repr__(self):
        return f"({self.u}, {self.v})"


def _require_odd(C: HyperCurve) -> None:
    if not C.is_odd:
        raise ValueError("Cantor arithmetic needs an odd-degree model; use to_odd_model")


def is_valid_divisor(D: MumfordDiv, C: HyperCurve) -> bool:
    u, v = D.u, D.v
    if u.lc() != 1 or (v and v.degree() >= u.degree()):
        return False
    return ((v * v - C.h) % u).is_zero()


def cantor_reduce(u: Poly, v: Poly, C: HyperCurve) -> MumfordDiv:
    g = C.genus
    h = C.h
    u = u.monic()
    v = v % u
    while u.degree() > g:
        u = (h - v * v).exact_div(u).monic()
        v = (-v) % u
    return MumfordDiv(u, v)


def cantor_add(D1: MumfordDiv, D2: MumfordDiv, C: HyperCurve) -> MumfordDiv:
    _require_odd(C)
    u1, v1, u2, v2 = D1.u, D1.v, D2.u, D2.v
    d1, e1, e2 = u1.xgcd(u2)
    d, c1, c2 = d1.xgcd(v1 + v2)
    s1, s2, s3 = c1 * e1, c1 * e2, c2
    u = (u1 * u2).exact_div(d * d)
    v = (s1 * u1 * v2 + s2 * u2 * v1 + s3 * (v1 * v2 + C.h)).exact_div(d)
    return cantor_reduce(u, v, C)


def negate(D: MumfordDiv) -> MumfordDiv:
    return -D


def scalar_mul(n: int, D: MumfordDiv, C: HyperCurve) -> MumfordDiv:
    _require_odd(C)
    if n < 0:
        return scalar_mul(-n, -D, C)
    result, base = C.identity(), D
    while n:
        if n & 1:
            result = cantor_add(result, base, C)
        n >>= 1
        if n:
            base = cantor_add(base, base, C)
    return result


def divisor_order(D: MumfordDiv, C: HyperCurve, multiple: int) -> int:
    """Exact order of D, given a positive multiple of it."""
    from .arith import factorize

    if not scalar_mul(multiple, D, C).is_identity():
        raise ValueError("the given multiple does not annihilate D")
    n = multiple
    for p in factorize(multiple) if multiple > 1 else {}:
        while n % p == 0 and scalar_mul(n // p, D, C).is_identity():
            n //= p
    return n


# --- torsion certificates -------------------------------------------------


@dataclass(frozen=True)
class TorsionCertificate:
    """Identity h - c^2 = e * w^m over Q: div(y - c) = m * (w = 0, y = c)."""

    h: Poly
    c: Poly
    w: Poly
    e: Fraction
    m: int

    def to_json(self) -> dict:
        return {
            "h": self.h.to_strings(),
            "c": self.c.to_strings(),
            "w": self.w.to_strings(),
            "e": str(self.e),
            "m": self.m,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "TorsionCertificate":
        try:
            return cls(
                Poly.from_strings(obj["h"]),
                Poly.from_strings(obj["c"]),
                Poly.from_strings(obj["w"]),
                Fraction(obj["e"]),
                int(obj["m"]),
            )
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed certificate: {exc}") from exc


def certificate_identity_holds(cert: TorsionCertificate) -> bool:
    return cert.h - cert.c * cert.c == cert.w ** cert.m * cert.e


def verify_certificate(cert: TorsionCertificate) -> bool:
    """Exact identity plus the support conditions that make div(y - c) m-divisible.

    The zeros of y - c lie over the roots of w; they carry multiplicity m
    times their multiplicity in w as long as c does not vanish there, which
    is the coprimality of w and c.
    """
    if cert.m < 2 or cert.e == 0:
        return False
    if cert.h.degree() < 3 or not cert.h.is_squarefree():
        return False
    if not certificate_identity_holds(cert):
        return False
    if cert.w.degree() > 0 and cert.w.gcd(cert.c).degree() > 0:
        return False
    return True


def certificate_bad_primes(cert: TorsionCertificate) -> set[int]:
    """Primes where reduction of the certificate data may fail."""
    from .arith import factorize

    bad = {2}
    h = cert.h
    nums = [h.lc(), h.discriminant(), cert.e]
    if cert.w.degree() > 0:
        nums.append(cert.w.lc())
        nums.append(cert.w.resultant(cert.c))
    for poly in (h, cert.c, cert.w):
        nums.append(Fraction(poly.denominator()))
    for q in nums:
        q = Fraction(q)
        for n in (q.numerator, q.denominator):
            if n == 0:
                continue
            if abs(n) > 1:
                bad.update(factorize(n))
    return bad


def divisor_from_certificate(cert: TorsionCertificate, p: int, k: int = 1) -> MumfordDiv:
    """Reduced Mumford class of (w = 0, y = c) on y^2 = h over F_{p^k}."""
    if not verify_certificate(cert):
        raise ValueError("certificate does not verify")
    if cert.h.degree() % 2 == 0:
        raise ValueError("certificate lives on an even model; transport it with to_odd_model")
    if p in certificate_bad_primes(cert):
        raise BadPrimeError(f"p={p} is bad for this certificate")
    F = FiniteField(p, k)
    C = HyperCurve(cert.h.map_coeffs(F))
    u = cert.w.map_coeffs(F).monic()
    v = cert.c.map_coeffs(F) % u if u.degree() > 0 else Poly.zero(F)
    if not ((v * v - C.h) % u).is_zero():
        raise BadPrimeError(f"v^2 = h mod u fails after reduction at p={p}")
    return cantor_reduce(u, v, C)


def independence_check(divs: list[MumfordDiv], m: int, C: HyperCurve) -> bool:
    """True iff the classes generate a subgroup of order m^s."""
    _require_odd(C)
    p = C.p
    if p == 0:
        raise ValueError("independence_check runs over a finite field")
    if (2 * m) % p == 0:
        raise ValueError(f"p={p} divides 2m; reduction need not be injective on m-torsion")
    for D in divs:
        if not scalar_mul(m, D, C).is_identity():
            raise ValueError(f"{D} is not killed by m={m}")
    group = {C.identity().key(): C.identity()}
    for D in divs:
        multiples = [C.identity()]
        for _ in range(m - 1):
            multiples.append(cantor_add(multiples[-1], D, C))
        new = {}
        for base in group.values():
            for mult in multiples:
                s = cantor_add(base, mult, C)
                new[s.key()] = s
        group = new
    return len(group) == m ** len(divs)


# --- point counting and zeta functions ------------------------------------


def count_points(C: HyperCurve, k: int = 1) -> int:
    """Projective points of the smooth model of y^2 = h over F_{p^k}."""
    if C.ring is QQ:
        raise ValueError("count_points needs a curve over a finite field")
    if C.genus < 1:
        raise ValueError("genus 0 curve")
    base = C.ring
    if base.k != 1:
        raise ValueError("count_points expects a curve over a prime field")
    F = FiniteField(base.p, k)
    h = Poly([F(c.v) for c in C.h.c], F)
    elems = F.elements()
    squares = {x * x for x in elems}
    total = 0
    for x in elems:
        val = h(x)
        if not val:
            total += 1
        elif val in squares:
            total += 2
    if C.is_odd:
        total += 1
    else:
        total += 2 if h.lc() in squares else 0
    return total


@dataclass(frozen=True)
class ZetaData:
    p: int
    counts: tuple[int, ...]
    L: tuple[int, ...]

    @property
    def jacobian_order(self) -> int:
        return sum(self.L)

    def to_json(self) -> dict:
        return {"p": self.p, "counts": list(self.counts), "L": list(self.L), "jacobian_order": self.jacobian_order}


def l_polynomial(p: int, counts: list[int]) -> tuple[int, ...]:
    """L-polynomial coefficients a_0..a_2g from N_1..N_g (Newton's identities)."""
    g = len(counts)
    s = [0] + [p**k + 1 - counts[k - 1] for k in range(1, g + 1)]
    e = [Fraction(1)]
    for k in range(1, g + 1):
        acc = sum(((-1) ** (i - 1)) * e[k - i] * s[i] for i in range(1, k + 1))
        e.append(acc / k)
    a = [int((-1) ** k * e[k]) for k in range(g + 1)]
    for k in range(g + 1):
        if e[k].denominator != 1:
            raise ArithmeticError("non-integral L-polynomial coefficient")
    full = a + [p ** (g - k) * a[k] for k in range(g - 1, -1, -1)]
    return tuple(full)


def zeta(C: HyperCurve, budget: int = DEFAULT_ZETA_BUDGET) -> ZetaData:
    g = C.genus
    if g < 1:
        raise ValueError("genus 0 curve")
    p = C.p
    if p == 0:
        raise ValueError("zeta needs a curve over a finite field")
    if p**g > budget:
        raise BudgetExceeded(f"p^g = {p**g} exceeds point-count budget {budget}")
    if not C.is_smooth():
        raise BadPrimeError(f"curve is singular modulo {p}")
    counts = [count_points(C, k) for k in range(1, g + 1)]
    return ZetaData(p, tuple(counts), l_polynomial(p, counts))


def jacobian_elements(C: HyperCurve, budget: int = DEFAULT_ENUMERATION_BUDGET) -> list[MumfordDiv]:
    """Every reduced divisor class of J(F_q), by exhaustive (u, v) search."""
    _require_odd(C)
    F = C.ring
    g = C.genus
    if sum(F.q ** (2 * d) for d in range(g + 1)) > budget:
        raise BudgetExceeded("Jacobian enumeration exceeds budget")
    elems = F.elements()
    out = [C.identity()]
    for d in range(1, g + 1):
        for tail in product(elems, repeat=d):
            u = Poly(list(tail) + [F.one], F)
            target = C.h % u
            for vc in product(elems, repeat=d):
                v = Poly(list(vc), F)
                if ((v * v) % u) == target:
                    out.append(MumfordDiv(u, v))
    return out


def torsion_profile(C: HyperCurve, m: int, budget: int = DEFAULT_ENUMERATION_BUDGET) -> int:
    """Order of the m-torsion subgroup J(F_q)[m]."""
    return sum(1 for D in jacobian_elements(C, budget) if scalar_mul(m, D, C).is_identity())


def random_divisor(C: HyperCurve, rng: random.Random) -> MumfordDiv:
    """Sum of g random affine points (not uniform on J, but spans it in practice)."""
    F = C.ring
    acc = C.identity()
    for _ in range(C.genus):
        while True:
            x = F.random(rng)
            y = F.sqrt(C.h(x))
            if y is not None:
                break
        if rng.random() < 0.5:
            y = -y
        pt = MumfordDiv(Poly([-x, F.one], F), Poly([y], F))
        acc = cantor_add(acc, pt, C)
    return acc


# --- odd models and good primes -------------------------------------------


@dataclass(frozen=True)
class CoordinateMap:
    """x = a + 1/X, y = Y / X^(g+1); a is None for the identity map."""

    a: Fraction | None
    g: int

    def point(self, x, y):
        if self.a is None:
            return x, y
        X = 1 / (x - self.a)
        return X, y * X ** (self.g + 1)

    def _reverse(self, f: Poly, degree: int) -> Poly:
        # X^degree * f(a + 1/X)
        if f.degree() > degree:
            raise ValueError("polynomial degree too large to transport")
        ring = f.ring
        shifted = f(Poly([ring(self.a), ring.one], ring)) if f else f
        coeffs = [shifted[degree - i] for i in range(degree + 1)]
        return Poly(coeffs, ring)

    def transport_poly(self, h: Poly) -> Poly:
        if self.a is None:
            return h
        return self._reverse(h, 2 * self.g + 2)

    def transport_divisor(self, D: MumfordDiv) -> MumfordDiv:
        """Transport an affine effective divisor avoiding x = a."""
        if self.a is None:
            return D
        u, v = D.u, D.v
        ring = u.ring
        if not u(ring(self.a)):
            raise ValueError("divisor meets the fibre x = a")
        U = self._reverse(u, u.degree()).monic()
        V = self._reverse(v, self.g + 1) % U
        return MumfordDiv(U, V)

    def transport_certificate(self, cert: TorsionCertificate) -> TorsionCertificate:
        if self.a is None:
            return cert
        top = 2 * self.g + 2
        dw = cert.w.degree()
        if (top - cert.m * dw) % cert.m or top < cert.m * dw:
            raise ValueError("certificate does not transport to the odd model")
        j = (top - cert.m * dw) // cert.m
        W = self._reverse(cert.w, dw).shift(j)
        return TorsionCertificate(
            self.transport_poly(cert.h),
            self._reverse(cert.c, self.g + 1),
            W,
            cert.e,
            cert.m,
        )

    def to_json(self) -> dict:
        return {"a": None if self.a is None else str(self.a), "g": self.g}


def to_odd_model(C: HyperCurve, a=None) -> tuple[HyperCurve, CoordinateMap]:
    """Odd-degree model moving the rational Weierstrass point x = a to infinity."""
    if C.ring is not QQ:
        raise ValueError("to_odd_model expects a curve over Q")
    g = C.genus
    if a is None:
        if not C.is_odd:
            raise ValueError("even model needs a rational Weierstrass point a")
        return C, CoordinateMap(None, g)
    a = Fraction(a)
    if C.h(a) != 0:
        raise ValueError(f"h({a}) != 0: not a Weierstrass point")
    if C.h.derivative()(a) == 0:
        raise ValueError(f"x = {a} is a multiple root of h")
    cmap = CoordinateMap(a, g)
    H = cmap.transport_poly(C.h)
    if H.degree() != 2 * g + 1:
        raise ArithmeticError("odd model has unexpected degree")
    return HyperCurve(H), cmap


def bad_primes(C: HyperCurve) -> set[int]:
    from .arith import factorize

    h = C.h
    bad = {2}
    vals = [Fraction(h.lc()), Fraction(h.denominator())]
    if h.degree() >= 1:
        vals.append(Fraction(h.discriminant()))
    for q in vals:
        for n in (q.numerator, q.denominator):
            if n == 0:
                raise ValueError("h is not squarefree")
            if abs(n) > 1:
                bad.update(factorize(n))
    return bad


def good_primes(C: HyperCurve, bound: int) -> list[int]:
    bad = bad_primes(C)
    return [p for p in primes_up_to(bound) if p not in bad]
