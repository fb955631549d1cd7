"""Class groups of quadratic fields through binary quadratic forms.

For D < 0 the forms are positive definite and every class has a unique
reduced representative.  For D > 0 the proper equivalence classes of forms
make up the narrow class group; each class is a cycle of reduced forms
under the rho operator, and the least form of the cycle is its canonical
representative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .arith import factorize, is_fundamental_discriminant
from .quadfield import PrimeIdealFactor, QuadField

DEFAULT_CLASSGROUP_BUDGET = 10**8


class ClassGroupBudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True, order=True)
class QuadForm:
    a: int
    b: int
    c: int

    @property
    def D(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def opposite(self) -> "QuadForm":
        return QuadForm(self.a, -self.b, self.c)

    def __call__(self, x: int, y: int) -> int:
        return self.a * x * x + self.b * x * y + self.c * y * y

    def __repr__(self):
        return f"({self.a}, {self.b}, {self.c})"


def principal_form(D: int) -> QuadForm:
    b = D % 2
    return QuadForm(1, b, (b * b - D) // 4)


def _check_disc(D: int) -> None:
    if D == 0 or (D > 0 and math.isqrt(D) ** 2 == D):
        raise ValueError(f"discriminant {D} is zero or a perfect square")
    if D % 4 not in (0, 1):
        raise ValueError(f"{D} is not a discriminant")


def is_reduced(f: QuadForm) -> bool:
    a, b, c = f.a, f.b, f.c
    D = f.D
    if D < 0:
        if not (abs(b) <= a <= c):
            return False
        return not ((abs(b) == a or a == c) and b < 0)
    if b <= 0 or b * b >= D:
        return False
    two_a = 2 * abs(a)
    if (two_a + b) ** 2 <= D:
        return False
    return two_a - b <= 0 or (two_a - b) ** 2 < D


def _reduce_definite(a: int, b: int, c: int) -> QuadForm:
    while True:
        if not (-a < b <= a):
            # normalize b into (-a, a]
            r = b % (2 * a)
            if r > a:
                r -= 2 * a
            k = (r - b) // (2 * a)
            c = a * k * k + b * k + c
            b = r
        if a > c:
            a, b, c = c, -b, a
            continue
        if a == c and b < 0:
            b = -b
        return QuadForm(a, b, c)


def rho(f: QuadForm) -> QuadForm:
    """One step of indefinite reduction: (a, b, c) -> (c, r, (r^2 - D)/4c)."""
    D = f.D
    c = f.c
    m = 2 * abs(c)
    sq = math.isqrt(D)
    if c * c > D:
        r = (-f.b) % m
        if r > abs(c):
            r -= m
    else:
        r = sq - ((sq + f.b) % m)
    return QuadForm(c, r, (r * r - D) // (4 * c))


def reduce(f: QuadForm) -> QuadForm:
    D = f.D
    _check_disc(D)
    if D < 0:
        if f.a <= 0:
            raise ValueError("only positive definite forms are supported for D < 0")
        return _reduce_definite(f.a, f.b, f.c)
    while not is_reduced(f):
        f = rho(f)
    return f


@lru_cache(maxsize=65536)
def cycle(f: QuadForm) -> tuple[QuadForm, ...]:
    """The rho-cycle of a reduced indefinite form, starting at f."""
    if f.D < 0:
        return (f,)
    if not is_reduced(f):
        raise ValueError("cycle needs a reduced form")
    out = [f]
    g = rho(f)
    while g != f:
        out.append(g)
        g = rho(g)
    return tuple(out)


def canonical(f: QuadForm) -> QuadForm:
    g = reduce(f)
    if g.D < 0:
        return g
    return min(cycle(g))


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def compose_raw(f: QuadForm, g: QuadForm) -> QuadForm:
    """Dirichlet composition (product of the oriented ideals); not reduced."""
    D = f.D
    if g.D != D:
        raise ValueError("forms of different discriminants")
    a1, b1, _ = f.a, f.b, f.c
    a2, b2, _ = g.a, g.b, g.c
    s = (b1 + b2) // 2
    e1, u1, v1 = _xgcd(a1, a2)
    e, u2, w = _xgcd(e1, s)
    i, j, k = u2 * u1, u2 * v1, w
    A = a1 * a2 // (e * e)
    B = (i * a1 * b2 + j * a2 * b1 + k * (b1 * b2 + D) // 2) // e
    B %= 2 * abs(A)
    C, rem = divmod(B * B - D, 4 * A)
    if rem:
        raise ArithmeticError(f"composition failed for {f}, {g}")
    return QuadForm(A, B, C)


def compose(f: QuadForm, g: QuadForm) -> QuadForm:
    return reduce(compose_raw(f, g))


def power(f: QuadForm, n: int) -> QuadForm:
    if n < 0:
        return power(f.opposite(), -n)
    result = principal_form(f.D)
    base = reduce(f)
    while n:
        if n & 1:
            result = compose(result, base)
        base = compose(base, base)
        n >>= 1
    return reduce(result)


def equivalent(f: QuadForm, g: QuadForm) -> bool:
    if f.D != g.D:
        raise ValueError("forms of different discriminants")
    rf, rg = reduce(f), reduce(g)
    if f.D < 0:
        return rf == rg
    return rg in cycle(rf)


def reduced_forms(D: int) -> list[QuadForm]:
    """Canonical representatives of all classes of discriminant D."""
    _check_disc(D)
    out = []
    if D < 0:
        parity = D % 2
        amax = math.isqrt(-D // 3)
        for a in range(1, amax + 1):
            for b in range(-a + 1, a + 1):
                if (b - parity) % 2:
                    continue
                num = b * b - D
                if num % (4 * a):
                    continue
                c = num // (4 * a)
                if c < a or (c == a and b < 0):
                    continue
                out.append(QuadForm(a, b, c))
        return out
    seen: set[QuadForm] = set()
    sq = math.isqrt(D)
    for b in range(sq, 0, -1):
        if (b - D) % 2:
            continue
        n = (D - b * b) // 4
        for d in range(1, math.isqrt(n) + 1):
            if n % d:
                continue
            for a_abs in {d, n // d}:
                for a in (a_abs, -a_abs):
                    f = QuadForm(a, b, -n // a)
                    if f in seen or not is_reduced(f):
                        continue
                    cyc = cycle(f)
                    seen.update(cyc)
                    out.append(min(cyc))
    return sorted(out)


def class_number(D: int) -> int:
    return len(reduced_forms(D))


@dataclass(frozen=True)
class ClassGroupStructure:
    D: int
    invariants: tuple[int, ...]
    generators: tuple[QuadForm, ...]
    narrow: bool

    @property
    def h(self) -> int:
        return math.prod(self.invariants)

    def to_json(self) -> dict:
        return {
            "D": self.D,
            "h": self.h,
            "invariants": list(self.invariants),
            "generators": [[g.a, g.b, g.c] for g in self.generators],
            "group": "narrow" if self.narrow else "ordinary",
        }


def _element_power(f: QuadForm, n: int) -> QuadForm:
    return canonical(power(f, n))


def _p_group_basis(elements: list[QuadForm], p: int, identity: QuadForm):
    """Basis of an enumerated abelian p-group, by discrete-log elimination.

    Returns a list of (generator, exponent k) with generator of order p**k,
    largest first.
    """
    order = len(elements)
    H = {identity: ()}
    basis: list[tuple[QuadForm, int]] = []

    def coset_order(y):
        k, z = 0, y
        while z not in H:
            z = _element_power(z, p)
            k += 1
        return k, z

    while len(H) < order:
        best = None
        for y in elements:
            if y in H:
                continue
            k, z = coset_order(y)
            if best is None or k > best[0]:
                best = (k, y, z)
        k, y, z = best
        pk = p**k
        # find h in H with h^(p^k) = z, then y / h has exact order p^k
        for hh in H:
            if _element_power(hh, pk) == z:
                gen = canonical(compose(y, hh.opposite()))
                break
        else:
            raise ArithmeticError("p-group basis elimination failed")
        basis.append((gen, k))
        newH = {}
        cur = identity
        for i in range(pk):
            for hh, coords in H.items():
                newH[canonical(compose(hh, cur))] = coords + (i,)
            cur = canonical(compose(cur, gen))
        H = newH
    return basis


def class_group(D: int, budget: int = DEFAULT_CLASSGROUP_BUDGET) -> ClassGroupStructure:
    """Invariant factors d1 | d2 | ... and generators of the (narrow for D > 0) class group."""
    if abs(D) > budget:
        raise ClassGroupBudgetExceeded(f"|D| = {abs(D)} exceeds class-group budget {budget}")
    if not is_fundamental_discriminant(D):
        raise ValueError(f"{D} is not a fundamental discriminant")
    forms = reduced_forms(D)
    h = len(forms)
    identity = canonical(principal_form(D))
    per_prime: list[list[tuple[QuadForm, int]]] = []
    for p, e in factorize(h).items() if h > 1 else []:
        cof = h // p**e
        sylow = sorted({_element_power(f, cof) for f in forms})
        basis = _p_group_basis(sylow, p, identity)
        per_prime.append([(g, p**k) for g, k in basis])
    width = max((len(b) for b in per_prime), default=0)
    invariants, generators = [], []
    for i in range(width):
        d, gen = 1, identity
        for b in per_prime:
            # basis lists are sorted by decreasing order; align at the top
            j = i - (width - len(b))
            if j >= 0:
                g, order = b[::-1][j]
                d *= order
                gen = canonical(compose(gen, g))
        invariants.append(d)
        generators.append(gen)
    return ClassGroupStructure(D, tuple(invariants), tuple(generators), narrow=D > 0)


def m_rank(S: ClassGroupStructure, m: int) -> int:
    if m < 2:
        raise ValueError("m must exceed 1")
    return sum(1 for d in S.invariants if d % m == 0)


def m_torsion_order(S: ClassGroupStructure, m: int) -> int:
    return math.prod(math.gcd(m, d) for d in S.invariants)


def form_order(f: QuadForm, h: int | None = None) -> int:
    """Exact order of the class of f."""
    D = f.D
    if h is None:
        h = class_number(D)
    identity = canonical(principal_form(D))
    n = h
    for p in factorize(h) if h > 1 else {}:
        while n % p == 0 and _element_power(f, n // p) == identity:
            n //= p
    return n


def prime_ideal_form(K: QuadField, p: int, root: int) -> QuadForm:
    """Form attached to the degree-one prime ideal (p, omega - root)."""
    b = 2 * root - 1 if K.omega_is_half else 2 * root
    num = b * b - K.D
    if num % (4 * p):
        raise ValueError(f"(p={p}, root={root}) is not a prime ideal of {K}")
    return QuadForm(p, b, num // (4 * p))


def class_of_ideal(factors: list[PrimeIdealFactor], K: QuadField) -> QuadForm:
    """Reduced form of the class of the ideal prod P_i^e_i."""
    result = principal_form(K.D)
    for fac in factors:
        if fac.kind == "inert":
            continue
        result = compose(result, power(prime_ideal_form(K, fac.p, fac.root), fac.exponent))
    return canonical(result)
