"""Dense univariate polynomials over Q and over finite fields F_{p^k}.

Coefficients are stored little-endian.  A ring object (``QQ`` or a
``FiniteField``) coerces integers into its elements; the element types
themselves support the usual Python operators, so the polynomial code is
written once for every base.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from functools import lru_cache

from .arith import is_prime


class _Rationals:
    characteristic = 0
    zero = Fraction(0)
    one = Fraction(1)

    def __call__(self, x) -> Fraction:
        if isinstance(x, Fraction):
            return x
        if isinstance(x, str):
            return Fraction(x)
        if isinstance(x, int):
            return Fraction(x)
        raise TypeError(f"cannot coerce {x!r} to a rational")

    def __repr__(self) -> str:
        return "QQ"

    def __reduce__(self):
        # keep the singleton identity across pickling
        return "QQ"


QQ = _Rationals()


class Fp:
    """Element of the prime field F_p."""

    __slots__ = ("v", "field")

    def __init__(self, v: int, field: "FiniteField"):
        self.v = v % field.p
        self.field = field

    def _other(self, o):
        if isinstance(o, Fp):
            return o.v
        if isinstance(o, int):
            return o
        return NotImplemented

    def __add__(self, o):
        w = self._other(o)
        return NotImplemented if w is NotImplemented else Fp(self.v + w, self.field)

    __radd__ = __add__

    def __sub__(self, o):
        w = self._other(o)
        return NotImplemented if w is NotImplemented else Fp(self.v - w, self.field)

    def __rsub__(self, o):
        w = self._other(o)
        return NotImplemented if w is NotImplemented else Fp(w - self.v, self.field)

    def __mul__(self, o):
        w = self._other(o)
        return NotImplemented if w is NotImplemented else Fp(self.v * w, self.field)

    __rmul__ = __mul__

    def __neg__(self):
        return Fp(-self.v, self.field)

    def inverse(self) -> "Fp":
        if self.v == 0:
            raise ZeroDivisionError("inverse of zero in F_p")
        return Fp(pow(self.v, -1, self.field.p), self.field)

    def __truediv__(self, o):
        if isinstance(o, int):
            o = Fp(o, self.field)
        return self * o.inverse()

    def __rtruediv__(self, o):
        return Fp(o, self.field) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return Fp(pow(self.v, n, self.field.p), self.field)

    def __eq__(self, o):
        if isinstance(o, Fp):
            return self.v == o.v
        if isinstance(o, int):
            return (self.v - o) % self.field.p == 0
        return NotImplemented

    def __hash__(self):
        return hash(self.v)

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        return str(self.v)


class Fq:
    """Element of F_{p^k}, k > 1, as a tuple of k residues over the fixed modulus."""

    __slots__ = ("c", "field")

    def __init__(self, c: tuple, field: "FiniteField"):
        self.c = c
        self.field = field

    def _other(self, o):
        if isinstance(o, Fq):
            return o.c
        if isinstance(o, int):
            return (o % self.field.p,) + (0,) * (self.field.k - 1)
        return NotImplemented

    def __add__(self, o):
        w = self._other(o)
        if w is NotImplemented:
            return w
        p = self.field.p
        return Fq(tuple((a + b) % p for a, b in zip(self.c, w)), self.field)

    __radd__ = __add__

    def __sub__(self, o):
        w = self._other(o)
        if w is NotImplemented:
            return w
        p = self.field.p
        return Fq(tuple((a - b) % p for a, b in zip(self.c, w)), self.field)

    def __rsub__(self, o):
        return -(self - o)

    def __neg__(self):
        p = self.field.p
        return Fq(tuple(-a % p for a in self.c), self.field)

    def __mul__(self, o):
        w = self._other(o)
        if w is NotImplemented:
            return w
        return Fq(self.field._mul(self.c, w), self.field)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result, base = self.field.one, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self) -> "Fq":
        if not any(self.c):
            raise ZeroDivisionError("inverse of zero in F_q")
        return self ** (self.field.q - 2)

    def __truediv__(self, o):
        if isinstance(o, int):
            o = self.field(o)
        return self * o.inverse()

    def __rtruediv__(self, o):
        return self.field(o) * self.inverse()

    def __eq__(self, o):
        w = self._other(o)
        if w is NotImplemented:
            return w
        return self.c == tuple(w)

    def __hash__(self):
        return hash(self.c)

    def __bool__(self):
        return any(self.c)

    def __repr__(self):
        return "[" + ",".join(map(str, self.c)) + "]"


@lru_cache(maxsize=None)
def conway_like_modulus(p: int, k: int) -> tuple[int, ...]:
    """Lexicographically least monic irreducible polynomial of degree k over F_p.

    Returned little-endian without the leading 1.  Lexicographic order is on
    the coefficient tuple read from the constant term upwards.
    """
    for tail in itertools.product(range(p), repeat=k):
        if tail[0] == 0:
            continue
        if _is_irreducible_mod_p(list(tail) + [1], p):
            return tail
    raise ValueError(f"no irreducible polynomial of degree {k} over F_{p}")


def _is_irreducible_mod_p(f: list[int], p: int) -> bool:
    # Rabin's test with explicit F_p polynomial arithmetic.
    F = FiniteField(p)
    poly = Poly(f, F)
    n = poly.degree()
    x = Poly([0, 1], F)
    prime_divisors = [q for q in range(2, n + 1) if n % q == 0 and is_prime(q)]
    for q in prime_divisors:
        h = x.powmod(p ** (n // q), poly) - x
        if poly.gcd(h).degree() != 0:
            return False
    return (x.powmod(p**n, poly) - x) % poly == Poly.zero(F)


class FiniteField:
    """F_{p^k} with a deterministic modulus."""

    _cache: dict = {}

    def __new__(cls, p: int, k: int = 1):
        key = (p, k)
        if key in cls._cache:
            return cls._cache[key]
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if k < 1:
            raise ValueError("extension degree must be positive")
        self = super().__new__(cls)
        self.p, self.k, self.q = p, k, p**k
        self.characteristic = p
        cls._cache[key] = self
        if k > 1:
            self.modulus = conway_like_modulus(p, k)
        else:
            self.modulus = ()
        self.zero = self(0)
        self.one = self(1)
        return self

    def __getnewargs__(self):
        return (self.p, self.k)

    def __reduce__(self):
        return (FiniteField, (self.p, self.k))

    def __call__(self, x):
        if isinstance(x, (Fp, Fq)):
            if x.field is not self:
                raise ValueError("element of a different field")
            return x
        if isinstance(x, Fraction):
            return self(x.numerator) / self(x.denominator)
        if isinstance(x, (tuple, list)):
            if self.k == 1:
                return Fp(x[0], self)
            c = tuple(int(a) % self.p for a in x) + (0,) * (self.k - len(x))
            return Fq(c, self)
        if self.k == 1:
            return Fp(int(x), self)
        return Fq((int(x) % self.p,) + (0,) * (self.k - 1), self)

    def _mul(self, a: tuple, b: tuple) -> tuple:
        p, k, mod = self.p, self.k, self.modulus
        prod = [0] * (2 * k - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    prod[i + j] += ai * bj
        for d in range(2 * k - 2, k - 1, -1):
            top = prod[d] % p
            if top:
                for j in range(k):
                    prod[d - k + j] -= top * mod[j]
        return tuple(c % p for c in prod[:k])

    def elements(self):
        if self.k == 1:
            return [Fp(i, self) for i in range(self.p)]
        return [Fq(c[::-1], self) for c in itertools.product(range(self.p), repeat=self.k)]

    def random(self, rng):
        if self.k == 1:
            return Fp(rng.randrange(self.p), self)
        return Fq(tuple(rng.randrange(self.p) for _ in range(self.k)), self)

    def is_square(self, a) -> bool:
        if not a:
            return True
        if self.p == 2:
            return True
        return a ** ((self.q - 1) // 2) == 1

    def sqrt(self, a):
        """A square root of a, or None (brute force; fields here are small)."""
        if not a:
            return self.zero
        if not self.is_square(a):
            return None
        if self.k == 1:
            from .arith import sqrt_mod

            return Fp(sqrt_mod(a.v, self.p), self)
        for x in self.elements():
            if x * x == a:
                return x
        return None

    def __repr__(self):
        return f"GF({self.p}^{self.k})" if self.k > 1 else f"GF({self.p})"


class Poly:
    """Univariate polynomial with coefficients in ``ring``."""

    __slots__ = ("c", "ring")

    def __init__(self, coeffs, ring=QQ):
        c = [ring(a) for a in coeffs]
        while c and not c[-1]:
            c.pop()
        self.c = tuple(c)
        self.ring = ring

    @classmethod
    def _raw(cls, c, ring):
        c = list(c)
        while c and not c[-1]:
            c.pop()
        obj = cls.__new__(cls)
        obj.c = tuple(c)
        obj.ring = ring
        return obj

    @classmethod
    def zero(cls, ring=QQ):
        return cls._raw((), ring)

    @classmethod
    def one(cls, ring=QQ):
        return cls._raw((ring.one,), ring)

    @classmethod
    def x(cls, ring=QQ):
        return cls._raw((ring.zero, ring.one), ring)

    @classmethod
    def monomial(cls, n: int, coeff=1, ring=QQ):
        return cls._raw((ring.zero,) * n + (ring(coeff),), ring)

    def degree(self) -> int:
        return len(self.c) - 1

    def lc(self):
        return self.c[-1] if self.c else self.ring.zero

    def __getitem__(self, i):
        return self.c[i] if 0 <= i < len(self.c) else self.ring.zero

    def __len__(self):
        return len(self.c)

    def is_zero(self) -> bool:
        return not self.c

    def __bool__(self):
        return bool(self.c)

    def _coerce(self, o):
        if isinstance(o, Poly):
            return o
        return Poly._raw((self.ring(o),), self.ring)

    def __add__(self, o):
        o = self._coerce(o)
        a, b = self.c, o.c
        if len(a) < len(b):
            a, b = b, a
        return Poly._raw([x + y for x, y in zip(a, b)] + list(a[len(b):]), self.ring)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw([-x for x in self.c], self.ring)

    def __sub__(self, o):
        return self + (-self._coerce(o))

    def __rsub__(self, o):
        return self._coerce(o) - self

    def __mul__(self, o):
        if not isinstance(o, Poly):
            s = self.ring(o)
            return Poly._raw([x * s for x in self.c], self.ring)
        if not self.c or not o.c:
            return Poly.zero(self.ring)
        out = [self.ring.zero] * (len(self.c) + len(o.c) - 1)
        for i, a in enumerate(self.c):
            if a:
                for j, b in enumerate(o.c):
                    out[i + j] = out[i + j] + a * b
        return Poly._raw(out, self.ring)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative polynomial power")
        result, base = Poly.one(self.ring), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __divmod__(self, o):
        o = self._coerce(o)
        if not o.c:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.c)
        dq = len(rem) - len(o.c)
        if dq < 0:
            return Poly.zero(self.ring), self
        inv = self.ring.one / o.c[-1]
        quo = [self.ring.zero] * (dq + 1)
        db = len(o.c) - 1
        for i in range(dq, -1, -1):
            coef = rem[i + db] * inv
            quo[i] = coef
            if coef:
                for j, b in enumerate(o.c):
                    rem[i + j] = rem[i + j] - coef * b
        return Poly._raw(quo, self.ring), Poly._raw(rem[:db], self.ring)

    def __floordiv__(self, o):
        return divmod(self, o)[0]

    def __mod__(self, o):
        return divmod(self, o)[1]

    def exact_div(self, o):
        q, r = divmod(self, o)
        if r:
            raise ArithmeticError("polynomial division is not exact")
        return q

    def __eq__(self, o):
        if isinstance(o, Poly):
            return self.c == o.c
        if isinstance(o, (int, Fraction, Fp, Fq)):
            return self.c == ((self.ring(o),) if o else ())
        return NotImplemented

    def __hash__(self):
        return hash(self.c)

    def __call__(self, x):
        acc = self.ring.zero if not isinstance(x, Poly) else Poly.zero(x.ring)
        for a in reversed(self.c):
            acc = acc * x + a
        return acc

    def monic(self):
        if not self.c:
            return self
        inv = self.ring.one / self.c[-1]
        return Poly._raw([a * inv for a in self.c], self.ring)

    def derivative(self):
        return Poly._raw([a * i for i, a in enumerate(self.c)][1:], self.ring)

    def gcd(self, o):
        a, b = self, o
        while b:
            a, b = b, a % b
        return a.monic()

    def xgcd(self, o):
        """Return (g, s, t) with s*self + t*o = g, g monic (or zero)."""
        r0, r1 = self, o
        s0, s1 = Poly.one(self.ring), Poly.zero(self.ring)
        t0, t1 = Poly.zero(self.ring), Poly.one(self.ring)
        while r1:
            q, r = divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
            t0, t1 = t1, t0 - q * t1
        if r0:
            inv = self.ring.one / r0.lc()
            return r0 * inv, s0 * inv, t0 * inv
        return r0, s0, t0

    def powmod(self, n: int, mod):
        result, base = Poly.one(self.ring), self % mod
        while n:
            if n & 1:
                result = result * base % mod
            base = base * base % mod
            n >>= 1
        return result

    def compose(self, inner):
        return self(inner)

    def shift(self, n: int):
        """Multiply by x**n."""
        if not self.c:
            return self
        return Poly._raw((self.ring.zero,) * n + self.c, self.ring)

    def truncate(self, n: int):
        """Reduce modulo x**n."""
        return Poly._raw(self.c[:n], self.ring)

    def ord_x(self) -> int:
        """x-adic valuation; infinity is reported as -1 for the zero polynomial."""
        for i, a in enumerate(self.c):
            if a:
                return i
        return -1

    def is_squarefree(self) -> bool:
        if self.degree() <= 0:
            return bool(self.c)
        d = self.derivative()
        if not d:
            return False
        return self.gcd(d).degree() == 0

    def resultant(self, o) -> object:
        return resultant(self, o)

    def discriminant(self):
        n = self.degree()
        if n < 1:
            raise ValueError("discriminant of a constant")
        sign = -1 if (n * (n - 1) // 2) % 2 else 1
        return self.ring(sign) * resultant(self, self.derivative()) / self.lc()

    def map_coeffs(self, ring):
        return Poly([ring(a) for a in self.c], ring)

    def denominator(self) -> int:
        return math.lcm(*(Fraction(a).denominator for a in self.c)) if self.c else 1

    def content_primitive(self):
        """For a rational polynomial, return (content, primitive integer polynomial)."""
        if not self.c:
            return Fraction(0), self
        den = self.denominator()
        ints = [int(a * den) for a in self.c]
        g = math.gcd(*ints)
        if ints[-1] < 0:
            g = -g
        return Fraction(g, den), Poly([a // g for a in ints], QQ)

    def to_strings(self) -> list[str]:
        return [str(a) for a in self.c]

    @classmethod
    def from_strings(cls, items, ring=QQ):
        return cls([Fraction(s) for s in items], ring) if ring is QQ else cls([ring(Fraction(s)) for s in items], ring)

    def __repr__(self):
        if not self.c:
            return "0"
        terms = []
        for i in range(len(self.c) - 1, -1, -1):
            a = self.c[i]
            if not a:
                continue
            if i == 0:
                terms.append(f"{a}")
            elif i == 1:
                terms.append(f"{a}*x" if a != 1 else "x")
            else:
                terms.append(f"{a}*x^{i}" if a != 1 else f"x^{i}")
        return " + ".join(terms)


def resultant(a: Poly, b: Poly):
    """Resultant over a field via the Euclidean remainder sequence."""
    ring = a.ring
    if not a.c or not b.c:
        return ring.zero
    da, db = a.degree(), b.degree()
    if da == 0:
        return a.c[0] ** db
    if db == 0:
        return b.c[0] ** da
    result = ring.one
    while True:
        da, db = a.degree(), b.degree()
        if db == 0:
            return result * b.c[0] ** da
        r = a % b
        if not r.c:
            return ring.zero
        dr = r.degree()
        if (da * db) % 2:
            result = -result
        result = result * b.lc() ** (da - dr)
        a, b = b, r
