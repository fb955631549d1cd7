import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from classrank.classgroup import (
    ClassGroupBudgetExceeded,
    ClassGroupStructure,
    QuadForm,
    canonical,
    class_group,
    class_number,
    class_of_ideal,
    compose,
    cycle,
    equivalent,
    form_order,
    is_reduced,
    m_rank,
    m_torsion_order,
    power,
    principal_form,
    reduce,
    reduced_forms,
    rho,
)
from classrank.quadfield import field_from_discriminant, ideal_factorization, make_field
from oracles import (
    class_number_analytic,
    class_number_ideal_oracle,
    fundamental_discriminants,
    ideal_product_form,
    narrow_class_number_analytic,
)

TEST_DISCS = [-31, -47, -56, -3299, -4027, -3896, 40, 229, 316, 8789]


def random_form(D, rng, amax=60):
    """A primitive form of discriminant D with a random leading coefficient (a > 0 for D < 0)."""
    while True:
        a = rng.randint(1, amax)
        if D > 0 and rng.random() < 0.5:
            a = -a
        bs = [b for b in range(-abs(a) + 1, abs(a) + 1) if (b * b - D) % (4 * a) == 0]
        if not bs:
            continue
        b = rng.choice(bs)
        f = QuadForm(a, b, (b * b - D) // (4 * a))
        if math.gcd(f.a, f.b, f.c) == 1:
            return f


def test_reduce_examples():
    assert reduce(QuadForm(1, 1, 8)) == QuadForm(1, 1, 8)
    assert reduce(QuadForm(8, 1, 1)) == QuadForm(1, 1, 8)
    for D in (-31, -4, -3, 5, 8, 40):
        p = principal_form(D)
        if D < 0:
            assert reduce(p) == p
        else:
            assert canonical(p) == canonical(reduce(p))


def test_reduce_rejects_square_and_zero():
    with pytest.raises(ValueError):
        reduce(QuadForm(1, 0, 0))
    with pytest.raises(ValueError):
        reduce(QuadForm(1, 4, 0))  # D = 16


def test_compose_examples():
    P = principal_form(-31)
    f = QuadForm(2, 1, 4)
    assert equivalent(compose(f, P), f)
    assert equivalent(compose(f, QuadForm(2, -1, 4)), P)
    assert equivalent(power(f, 3), P)
    assert not equivalent(power(f, 1), P)


def test_compose_rejects_mismatched():
    with pytest.raises(ValueError):
        compose(QuadForm(1, 1, 8), QuadForm(1, 1, 12))


def test_equivalent_examples():
    assert not equivalent(QuadForm(1, 1, 8), QuadForm(2, 1, 4))
    f = QuadForm(1, 6, -1)
    assert f.D == 40
    assert equivalent(f, rho(f))
    assert equivalent(f, reduce(f))


def test_class_group_examples():
    S = class_group(-31)
    assert S.h == 3 and S.invariants == (3,)
    assert class_group(-4).invariants == ()
    assert class_group(-47).invariants == (5,)
    assert class_group(-3299).invariants == (3, 9)


def test_class_group_rejects():
    with pytest.raises(ValueError):
        class_group(-48)
    with pytest.raises(ClassGroupBudgetExceeded):
        class_group(-3299, budget=1000)


def test_m_rank_examples():
    assert m_rank(ClassGroupStructure(-31, (3,), (), False), 3) == 1
    assert m_rank(ClassGroupStructure(0, (3, 3), (), False), 3) == 2
    assert m_rank(ClassGroupStructure(-47, (5,), (), False), 3) == 0
    with pytest.raises(ValueError):
        m_rank(class_group(-31), 1)


def test_class_of_ideal_examples():
    K = make_field(-31)
    assert class_of_ideal(ideal_factorization(K(7)), K) == principal_form(-31)
    (two,) = [f for f in ideal_factorization(K(2)) if f.exponent == 1][:1]
    assert class_of_ideal([two], K) in (QuadForm(2, 1, 4), QuadForm(2, -1, 4))
    (five,) = ideal_factorization(K(1, -2))
    f = class_of_ideal([type(five)(five.p, five.kind, five.root, 1)], K)
    assert form_order(f) == 3


@pytest.mark.parametrize("D", TEST_DISCS)
def test_group_laws(D):
    rng = random.Random(D)
    P = canonical(principal_form(D))
    forms = [random_form(D, rng) for _ in range(500)]
    for i, f in enumerate(forms):
        g, h = forms[i - 1], forms[i - 2]
        assert canonical(compose(compose(f, g), h)) == canonical(compose(f, compose(g, h)))
        assert canonical(compose(f, g)) == canonical(compose(g, f))
        assert canonical(compose(f, P)) == canonical(f)
        assert canonical(compose(f, f.opposite())) == P


@pytest.mark.parametrize("D", TEST_DISCS)
def test_compose_matches_ideal_multiplication(D):
    rng = random.Random(7 * D)
    for _ in range(200):
        f, g = random_form(D, rng), random_form(D, rng)
        if f.a < 0 or g.a < 0:
            continue
        assert equivalent(compose(f, g), ideal_product_form(f, g))


@pytest.mark.parametrize("D", TEST_DISCS)
def test_reduce_idempotent_and_cycle_stable(D):
    rng = random.Random(D + 1)
    for _ in range(100):
        r = reduce(random_form(D, rng))
        assert is_reduced(r)
        if D < 0:
            assert reduce(r) == r
        else:
            g = r
            for _ in range(len(cycle(r))):
                g = rho(g)
            assert g == r


def test_class_numbers_match_ideal_oracle():
    for D in fundamental_discriminants(-10**4, -1):
        assert class_group(D).h == class_number_ideal_oracle(D), D


def test_class_numbers_match_analytic_formula():
    for D in fundamental_discriminants(-1000, -1):
        assert class_number(D) == class_number_analytic(D), D
    for D in fundamental_discriminants(2, 120):
        assert class_number(D) == narrow_class_number_analytic(D), D


def test_field_discriminants_are_accepted():
    for D in (-31, -4, 5, 8, 12, -3):
        assert class_group(field_from_discriminant(D).D).h >= 1


@pytest.mark.parametrize("D", [-3299, -3896, -4027, -3, -4, 229, 316, 2920, -11651])
def test_structure_consistency(D):
    S = class_group(D)
    for x, y in zip(S.invariants, S.invariants[1:]):
        assert y % x == 0
    forms = reduced_forms(D)
    assert S.h == len(forms)
    for gen, d in zip(S.generators, S.invariants):
        assert form_order(gen, S.h) == d
    P = canonical(principal_form(D))
    for m in (2, 3, 4, 6, 9):
        brute = sum(1 for f in forms if canonical(power(f, m)) == P)
        assert brute == m_torsion_order(S, m)


@settings(max_examples=50, deadline=None)
@given(st.sampled_from(fundamental_discriminants(-3000, 3000)), st.integers(2, 12), st.integers(1, 6))
def test_m_rank_monotone(D, m, k):
    S = class_group(D)
    assert m_rank(S, m) >= m_rank(S, m * k)
