"""Curve families with torsion data and the maps used to specialize them."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import sympy

from .arith import factorize
from .jacobian import HyperCurve, TorsionCertificate, bad_primes, verify_certificate
from .poly import QQ, Poly

X = Poly.x()


@dataclass(frozen=True)
class Mobius:
    """Fibre parametrization x = (alpha*t + beta) / (gamma*t + delta)."""

    alpha: Fraction
    beta: Fraction
    gamma: Fraction = Fraction(0)
    delta: Fraction = Fraction(1)

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma", "delta"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.alpha * self.delta == self.beta * self.gamma:
            raise ValueError("degenerate fibre map")

    def __call__(self, t) -> Fraction | None:
        den = self.gamma * t + self.delta
        if den == 0:
            return None
        return (self.alpha * t + self.beta) / den

    def to_json(self) -> list[str]:
        return [str(self.alpha), str(self.beta), str(self.gamma), str(self.delta)]

    @classmethod
    def from_json(cls, obj) -> "Mobius":
        return cls(*(Fraction(v) for v in obj))


@dataclass(frozen=True)
class GammaFunction:
    """The function A(x) + B(x)*y on the curve, a generator of m * D_i."""

    A: Poly
    B: Poly
    label: str = ""

    def evaluate(self, x: Fraction, y):
        return y * self.B(x) + self.A(x)

    def to_json(self) -> dict:
        return {"A": self.A.to_strings(), "B": self.B.to_strings(), "label": self.label}

    @classmethod
    def from_json(cls, obj: dict) -> "GammaFunction":
        return cls(Poly.from_strings(obj["A"]), Poly.from_strings(obj["B"]), obj.get("label", ""))


@dataclass
class CurveFamily:
    kind: str
    params: dict
    h: Poly
    cover_degree: int
    m: int
    certificates: list[TorsionCertificate] = field(default_factory=list)
    gammas: list[GammaFunction] = field(default_factory=list)
    fibre_map: Mobius | None = None
    phi: str | None = None
    phi_degree: int | None = None
    weierstrass_point: Fraction | None = None
    claimed_rank: int = 0
    provenance: str = ""

    @property
    def genus(self) -> int:
        if self.cover_degree != 2:
            n, r = self.cover_degree, self.h.degree()
            # Riemann-Hurwitz for y^n = h with gcd(n, r) = 1 and h squarefree
            return (n - 1) * (r - 1) // 2
        return (self.h.degree() - 1) // 2

    def curve(self) -> HyperCurve:
        if self.cover_degree != 2:
            raise ValueError("not a hyperelliptic family")
        return HyperCurve(self.h)

    def validate(self) -> None:
        if not self.h.is_squarefree():
            raise ValueError("model polynomial is not squarefree")
        for cert in self.certificates:
            if not verify_certificate(cert):
                raise ValueError("attached certificate does not verify")

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "params": self.params,
            "h": self.h.to_strings(),
            "cover_degree": self.cover_degree,
            "m": self.m,
            "certificates": [c.to_json() for c in self.certificates],
            "gammas": [g.to_json() for g in self.gammas],
            "fibre_map": None if self.fibre_map is None else self.fibre_map.to_json(),
            "phi": self.phi,
            "phi_degree": self.phi_degree,
            "weierstrass_point": None if self.weierstrass_point is None else str(self.weierstrass_point),
            "claimed_rank": self.claimed_rank,
            "provenance": self.provenance,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "CurveFamily":
        """Build a family from its JSON description; 'user' families may omit gammas."""
        try:
            h = Poly.from_strings(obj["h"])
            m = int(obj["m"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed family description: {exc}") from exc
        certs = [TorsionCertificate.from_json(c) for c in obj.get("certificates", [])]
        gammas = [GammaFunction.from_json(g) for g in obj.get("gammas", [])]
        wp = obj.get("weierstrass_point")
        wp = None if wp is None else Fraction(wp)
        if not gammas:
            gammas = [gamma_from_certificate(c, wp) for c in certs]
        fm = obj.get("fibre_map")
        fam = cls(
            kind=obj.get("kind", "user"),
            params=obj.get("params", {}),
            h=h,
            cover_degree=int(obj.get("cover_degree", 2)),
            m=m,
            certificates=certs,
            gammas=gammas,
            fibre_map=None if fm is None else Mobius.from_json(fm),
            phi=obj.get("phi"),
            phi_degree=obj.get("phi_degree"),
            weierstrass_point=wp,
            claimed_rank=int(obj.get("claimed_rank", len(gammas))),
            provenance=obj.get("provenance", "user"),
        )
        fam.validate()
        return fam


def gamma_from_certificate(cert: TorsionCertificate, base_x: Fraction | None = None) -> GammaFunction:
    """y - c(x), divided by its value at the Weierstrass point (base_x, 0) when given.

    The normalization makes the function take the value 1 at the base point,
    so fibres p-adically close to it land in the m-th powers locally at bad p.
    """
    A, B = -cert.c, Poly.one()
    if base_x is not None:
        val = -cert.c(base_x)
        if val == 0:
            raise ValueError("certificate function vanishes at the base point")
        A, B = A * (1 / val), B * (1 / val)
    return GammaFunction(A, B, f"y - ({cert.c})")


def _bad_prime_product(h: Poly) -> int:
    return math.prod(bad_primes(HyperCurve(h)))


# --- hyperelliptic families -----------------------------------------------


def toy_family(m: int) -> CurveFamily:
    """y^2 = 1 - x^m with the m-torsion class of (0, 1) and gamma = 1 - y."""
    if m < 3 or m % 2 == 0:
        raise ValueError("toy family needs odd m >= 3")
    h = 1 - X**m
    cert = TorsionCertificate(h, Poly.one(), X, Fraction(-1), m)
    fam = CurveFamily(
        kind="toy",
        params={"m": m},
        h=h,
        cover_degree=2,
        m=m,
        certificates=[cert],
        gammas=[GammaFunction(Poly.one(), Poly([-1]), "1 - y")],
        fibre_map=Mobius(2, 1),
        phi="(x - 1)/2",
        phi_degree=2,
        weierstrass_point=Fraction(1),
        claimed_rank=1,
        provenance="classical: rank_m Cl >= 1 for imaginary fibres; certified per fibre",
    )
    fam.validate()
    return fam


def yamamoto_family(m: int, lam, N: int = 1) -> CurveFamily:
    """y^2 = (x^m - 1)(x^m - lam^2) with two m-torsion certificates.

    Fibres are x = 1 + Delta^N / (1 + Delta^N t): p-adically close to the
    Weierstrass point (1, 0) for every bad p.  Once x - 1 < |lam|^(2/m) - 1
    (t >= 2 for m = 3, lam = 2, N = 1) they lie where h < 0, so the fibres
    are imaginary quadratic.
    """
    lam = Fraction(lam)
    if m < 2:
        raise ValueError("m must exceed 1")
    if lam == 0 or abs(lam) == 1:
        raise ValueError("lambda must be nonzero and different from +-1")
    if N < 1:
        raise ValueError("N must be positive")
    h = (X**m - 1) * (X**m - lam * lam)
    if not h.is_squarefree():
        raise ValueError("degenerate lambda: h is not squarefree")
    c1 = X**m - lam
    c2 = X**m + lam
    certs = [
        TorsionCertificate(h, c1, X, -((lam - 1) ** 2), m),
        TorsionCertificate(h, c2, X, -((lam + 1) ** 2), m),
    ]
    base = Fraction(1)
    delta = _bad_prime_product(h)
    scale = delta**N
    fam = CurveFamily(
        kind="yamamoto",
        params={"m": m, "lambda": str(lam), "N": N, "Delta": delta},
        h=h,
        cover_degree=2,
        m=m,
        certificates=certs,
        gammas=[gamma_from_certificate(c, base) for c in certs],
        fibre_map=Mobius(scale, scale + 1, scale, 1),
        phi=f"1/(x - 1) - 1/{scale}",
        phi_degree=2,
        weierstrass_point=base,
        claimed_rank=2,
        provenance="from the literature: rank_m Jac(C)(Q)_tors >= 2 (not proved by this tool; evidence mod p only)",
    )
    fam.validate()
    return fam


# --- superelliptic families -----------------------------------------------


@dataclass(frozen=True)
class SuperellipticData:
    m: int
    a0: Fraction
    roots: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "a0", Fraction(self.a0))
        object.__setattr__(self, "roots", tuple(Fraction(a) for a in self.roots))
        if self.m < 2:
            raise ValueError("m must exceed 1")
        if self.a0 == 0:
            raise ValueError("a0 must be nonzero")
        if len(set(self.roots)) != len(self.roots):
            raise ValueError("roots must be pairwise distinct")
        if len(self.roots) < 2:
            raise ValueError("need r > 1 roots")
        if math.gcd(self.r, self.m) != 1:
            raise ValueError(f"gcd(r={self.r}, m={self.m}) != 1: more than one point at infinity")

    @property
    def r(self) -> int:
        return len(self.roots)

    def h(self) -> Poly:
        out = Poly([self.a0])
        for a in self.roots:
            out = out * (X - a)
        return out


def superelliptic_family(data: SuperellipticData) -> CurveFamily:
    """y^m = a0 * prod (x - a_i); div(x - a_i) = m P_i - m oo."""
    h = data.h()
    gammas = [GammaFunction(X - a, Poly.zero(), f"x - {a}") for a in data.roots]
    fam = CurveFamily(
        kind="superelliptic",
        params={
            "m": data.m,
            "a0": str(data.a0),
            "roots": [str(a) for a in data.roots],
            "map_degrees": {"x": data.m, "y": data.r},
        },
        h=h,
        cover_degree=data.m,
        m=data.m,
        gammas=gammas,
        fibre_map=Mobius(1, 0),
        phi="x",
        phi_degree=data.m,
        claimed_rank=data.r - 1,
        provenance="divisor identities: classes P_i - oo span (Z/m)^(r-1)",
    )
    fam.validate()
    return fam


def check_symbolic_torsion(data: SuperellipticData) -> bool:
    """Each x - a_i vanishes exactly at P_i with order m (a_i simple roots of h)."""
    h = data.h()
    dh = h.derivative()
    return all(h(a) == 0 and dh(a) != 0 for a in data.roots) and math.gcd(data.r, data.m) == 1


# --- power series ----------------------------------------------------------


def _series_inverse(a: Poly, n: int) -> Poly:
    if a[0] == 0:
        raise ZeroDivisionError("series with zero constant term")
    g = Poly([1 / a[0]])
    prec = 1
    while prec < n:
        prec = min(2 * prec, n)
        g = (g * (2 - (a.truncate(prec) * g).truncate(prec))).truncate(prec)
    return g


def mth_root_series(h: Poly, m: int, truncation: int, branch_constant) -> Poly:
    """Truncated power series f with f(0) = branch_constant and f^m = h mod x^(truncation+1)."""
    branch_constant = Fraction(branch_constant)
    if m < 1 or truncation < 0:
        raise ValueError("need m >= 1 and truncation >= 0")
    if h[0] == 0:
        raise ValueError("h(0) = 0: no m-th root series at x = 0")
    if branch_constant**m != h[0]:
        raise ValueError(f"branch constant {branch_constant} is not an m-th root of h(0) = {h[0]}")
    n = truncation + 1
    f = Poly([branch_constant])
    prec = 1
    while prec < n:
        prec = min(2 * prec, n)
        err = (f**m - h).truncate(prec)
        denom = _series_inverse((m * f ** (m - 1)).truncate(prec), prec)
        f = (f - (err * denom).truncate(prec)).truncate(prec)
    return f


# --- Levin's construction --------------------------------------------------


def levin_r(m: int, d: int) -> int:
    """Largest r with r - floor(r/m) <= d and gcd(r, m) = 1."""
    # r - floor(r/m) is nondecreasing in r, so scan up to the first failure
    r, best = 1, None
    while r - r // m <= d:
        if math.gcd(r, m) == 1:
            best = r
        r += 1
    if best is None:
        raise ValueError("no admissible r")
    return best


def _prime_support(values) -> list[int]:
    primes: set[int] = set()
    for v in values:
        v = Fraction(v)
        for n in (v.numerator, v.denominator):
            if abs(n) > 1:
                primes.update(factorize(n))
    return sorted(primes)


@dataclass(frozen=True)
class LevinData:
    m: int
    d: int
    r: int
    a: tuple[int, ...]
    h: Poly
    f: Poly
    b: int
    c0: int
    delta0: int

    @property
    def shift(self) -> int:
        return self.r - self.d

    def psi_expression(self) -> str:
        return f"{self.b}*(y - ({_sym(self.f)}))/x**{self.shift}"

    def phi_expression(self) -> str:
        return f"({self.psi_expression()} - {self.c0})/{self.delta0}"

    def fibre_polynomial(self, t: int) -> Poly:
        """Integer polynomial of degree d whose root x generates Q(P_t)."""
        c = self.c0 + self.delta0 * t
        num = (self.f * self.b + Poly.monomial(self.shift, c)) ** self.m - self.h * self.b**self.m
        if num.ord_x() < self.shift:
            raise ArithmeticError("fibre polynomial is not divisible by x^(r-d)")
        return Poly(num.c[self.shift :])


def _sym(p: Poly) -> str:
    return " + ".join(f"({a})*x**{i}" for i, a in enumerate(p.c)) or "0"


def levin_family(m: int, d: int, a: list[int] | None = None, c0: int = 0) -> tuple[CurveFamily, LevinData]:
    """y^m = -(x - a_1^m) prod_{i>=2} (x + a_i^m) with psi = b (y - f) / x^(r-d)."""
    if m < 2 or d < 2:
        raise ValueError("need m, d > 1")
    if d <= (m - 1) ** 2:
        raise ValueError(f"need d > (m-1)^2 = {(m - 1) ** 2}")
    r = levin_r(m, d)
    if not r >= d + Fraction(d, m - 1) - m + 1:
        raise ArithmeticError("r lower bound fails")
    if a is None:
        a = list(range(1, r + 1))
    a = [int(v) for v in a]
    if len(a) != r:
        raise ValueError(f"need exactly r = {r} values a_i")
    if any(v == 0 for v in a):
        raise ValueError("a_i must be nonzero")
    roots = [Fraction(a[0] ** m)] + [Fraction(-(v**m)) for v in a[1:]]
    if len(set(roots)) != r:
        raise ValueError("a_1^m, -a_i^m must be pairwise distinct")
    h = Poly([-1])
    for root in roots:
        h = h * (X - root)
    k = r // m
    f = mth_root_series(h, m, k - 1, math.prod(a))
    if (f**m - h).ord_x() < k:
        raise ArithmeticError("m-th root series lost precision")
    b = f.denominator()
    delta0 = math.prod(_prime_support(x - y for i, x in enumerate(roots) for y in roots[i + 1 :]))
    data = LevinData(m, d, r, tuple(a), h, f, b, c0, delta0)
    gammas = [GammaFunction(X + v**m, Poly.zero(), f"x + {v}^{m}") for v in a[1:]]
    fam = CurveFamily(
        kind="levin",
        params={"m": m, "d": d, "r": r, "a": a, "c0": c0, "Delta0": delta0, "b": b, "f": f.to_strings()},
        h=h,
        cover_degree=m,
        m=m,
        gammas=gammas,
        phi=data.phi_expression(),
        phi_degree=None,
        claimed_rank=math.ceil((d + 1) // 2 + Fraction(d, m - 1) - m),
        provenance="from the literature: rank_m Cl >= ceil(floor((d+1)/2) + d/(m-1) - m); not certified here; a_i and c0 are user choices",
    )
    fam.validate()
    fam.phi_degree = map_degree(fam, fam.phi)
    if fam.phi_degree != d:
        raise ArithmeticError(f"phi has degree {fam.phi_degree}, expected {d}")
    return fam, data


# --- map degrees -----------------------------------------------------------

_x, _y, _s = sympy.symbols("x y s")


def _to_sympy(p: Poly):
    return sum(sympy.Rational(a.numerator, a.denominator) * _x**i for i, a in enumerate(p.c))


def map_degree(family: CurveFamily, expression: str) -> int:
    """Degree of a rational function of x, y on y^n = h, by elimination.

    The fibre over a generic value s is cut out by Res_y(y^n - h, N - s*Den);
    factors free of s come from common zeros of N and Den and are dropped.
    """
    expr = sympy.together(sympy.sympify(expression, locals={"x": _x, "y": _y}))
    num, den = sympy.fraction(expr)
    curve = _y**family.cover_degree - _to_sympy(family.h)
    R = sympy.resultant(curve, sympy.expand(num - _s * den), _y)
    R = sympy.Poly(sympy.expand(R), _s)
    if R.is_zero or R.degree() < 1:
        raise ValueError("degenerate elimination: map is constant on the curve")
    # a map pulled back from x alone has fibres (x - s)^n: x-roots repeat, which is expected
    content = sympy.gcd_list([sympy.Poly(cf, _x).as_expr() for cf in R.all_coeffs()])
    R_prim = sympy.Poly(sympy.cancel(R.as_expr() / content), _x, _s)
    if R_prim.degree(_x) < 1:
        raise ValueError("degenerate elimination: map is constant on the curve")
    return R_prim.degree(_x)
