import math
import random
from collections import Counter
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from classrank.quadfield import (
    field_from_discriminant,
    fundamental_unit,
    ideal_factorization,
    is_mth_power,
    is_pth_power,
    kummer_degree,
    linearly_disjoint_from_cyclotomic,
    make_field,
    nth_root,
    selmer_member,
)
from oracles import pell_unit

K31 = make_field(-31)
small_d0 = st.sampled_from([-31, -1, -3, -5, -47, -94, 2, 3, 5, 13, 29, 79, -3299])
small_q = st.fractions(min_value=-30, max_value=30, max_denominator=5)


def elements(d0s=small_d0):
    return st.builds(lambda d, a, b: make_field(d)(a, b), d0s, small_q, small_q).filter(lambda g: bool(g))


@pytest.mark.parametrize(
    "d0, D, real",
    [(-31, -31, False), (-1, -4, False), (5, 5, True), (2, 8, True), (-5, -20, False)],
)
def test_make_field(d0, D, real):
    K = make_field(d0)
    assert K.D == D and K.is_real == real and K.unit_rank == int(real)
    assert field_from_discriminant(D) == K


def test_make_field_rejects_non_squarefree():
    with pytest.raises(ValueError):
        make_field(12)


def test_factorization_examples():
    g = K31(1, -2)
    (f,) = ideal_factorization(g)
    assert (f.p, f.exponent, f.kind) == (5, 3, "split")
    assert ideal_factorization(K31(1)) == []
    fs = ideal_factorization(K31(7))
    assert sum(f.exponent * f.residue_degree for f in fs if f.p == 7) == 2


def test_selmer_examples():
    assert selmer_member(K31(1, -2), 3)
    assert not selmer_member(K31(5), 3)
    assert selmer_member(make_field(2)(1, 1), 5)  # a unit


@settings(max_examples=100, deadline=None)
@given(elements(), st.integers(min_value=-4, max_value=4), st.integers(min_value=-4, max_value=4))
def test_factorization_multiplicative(g, a, b):
    h = g.field(Fraction(a, 3) if a else 1, b)
    if not h:
        return
    fg, fh, fgh = (Counter({f.key: f.exponent for f in ideal_factorization(z)}) for z in (g, h, g * h))
    total = Counter(fg)
    total.update(fh)
    assert {k: v for k, v in total.items() if v} == dict(fgh)


@settings(max_examples=100, deadline=None)
@given(elements())
def test_valuation_norm_consistency(g):
    n = abs(g.norm())
    prod = Fraction(1)
    for f in ideal_factorization(g):
        prod *= Fraction(f.p) ** (f.exponent * f.residue_degree)
    assert prod == n


@settings(max_examples=60, deadline=None)
@given(elements(), st.sampled_from([2, 3, 5]))
def test_powers_are_selmer_and_pth_powers(g, p):
    assert selmer_member(g**p, p)
    assert is_pth_power(g**p, p)
    r = nth_root(g**p, p)
    assert r is not None and r**p == g**p


def test_pth_power_examples():
    K5 = make_field(5)
    assert is_pth_power(K5(Fraction(3, 2), Fraction(1, 2)), 2)
    assert not is_pth_power(K31(2), 2)
    assert is_pth_power(K31(1), 7)


def test_two_is_not_a_square_oracle():
    # a^2 + 31 b^2 = 2 (in half-integers: x^2 + 31 y^2 = 8) has no solution, so 2 is no square
    sols = [(x, y) for x in range(-3, 4) for y in range(-1, 2) if x * x + 31 * y * y == 8]
    assert sols == []
    assert not is_pth_power(K31(2), 2)


def test_kummer_examples():
    assert kummer_degree(K31(1, -2), 3) == 3
    assert kummer_degree(K31(8), 3) == 1
    assert kummer_degree(K31(-4), 4) < 4
    assert kummer_degree(K31(-4), 4) == 2
    assert kummer_degree(make_field(-1)(-4), 4) == 1  # -4 = (1+i)^4


def test_kummer_degree_matches_sympy_factor():
    X = sympy.Symbol("X")
    rng = random.Random(3)
    for _ in range(15):
        d0 = rng.choice([-31, -7, 5, 2])
        K = make_field(d0)
        base = K(rng.randint(-3, 3), rng.randint(-2, 2))
        if not base:
            continue
        for m, g in ((4, base**2), (6, base**3), (6, base), (4, -4 * base**4)):
            root = sympy.sqrt(d0)
            gamma = sympy.nsimplify(g.a) + sympy.nsimplify(g.b) * root
            _, fac = sympy.factor_list(X**m - gamma, X, extension=root)
            assert kummer_degree(g, m) == min(sympy.degree(f, X) for f, _ in fac)


@pytest.mark.parametrize("D, m, expected", [(-3, 3, False), (-31, 3, True), (5, 5, False), (-4, 4, False), (-4, 6, True), (-3, 6, False), (8, 8, False)])
def test_cyclotomic_disjointness(D, m, expected):
    assert linearly_disjoint_from_cyclotomic(field_from_discriminant(D), m) == expected


@pytest.mark.parametrize("d0, a, b", [(5, Fraction(1, 2), Fraction(1, 2)), (2, 1, 1), (3, 2, 1)])
def test_fundamental_unit_examples(d0, a, b):
    u = fundamental_unit(make_field(d0))
    assert (u.element.a, u.element.b) == (Fraction(a), Fraction(b))


def test_fundamental_unit_matches_pell_oracle():
    for d0 in [d for d in range(2, 100) if sympy.ntheory.factor_.core(d) == d]:
        u = fundamental_unit(make_field(d0))
        a, b, norm = pell_unit(d0)
        assert (u.element.a, u.element.b, u.norm) == (a, b, norm), d0
        assert u.element.real_sign() > 0 and (u.element - 1).real_sign() > 0


def test_fundamental_unit_rejects_imaginary():
    with pytest.raises(ValueError):
        fundamental_unit(K31)


def test_is_mth_power_composite():
    g = K31(3, 1)
    assert is_mth_power(g**6, 6)
    assert not is_mth_power(g**2, 6)
    assert math.gcd(6, 4) == 2
