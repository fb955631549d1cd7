import math

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from classrank.arith import (
    FactorizationBudgetExceeded,
    factorize,
    integer_root,
    is_fundamental_discriminant,
    is_prime,
    kronecker,
    sqrt_mod,
    squarefree_part,
)
from oracles import fundamental_discriminants, kronecker_oracle


@pytest.mark.parametrize("n, expected", [(1, (1, 1)), (-124, (-31, 2)), (12, (3, 2)), (-1, (-1, 1)), (72, (2, 6))])
def test_squarefree_part_examples(n, expected):
    assert squarefree_part(n) == expected


def test_squarefree_part_zero():
    with pytest.raises(ValueError):
        squarefree_part(0)


@settings(max_examples=200, deadline=None)
@given(st.integers(min_value=1, max_value=10**24))
def test_factorize_matches_sympy(n):
    assert factorize(n) == sympy.factorint(n)


def test_factorize_semiprime():
    p, q = 1000000007, 998244353
    assert factorize(p * q) == {q: 1, p: 1}


def test_factorize_budget_error():
    p, q = 2**61 - 1, 2**89 - 1
    with pytest.raises(FactorizationBudgetExceeded):
        factorize(p * q, budget=50)


def test_budget_from_environment(monkeypatch):
    monkeypatch.setenv("CLASSRANK_BUDGET", "40")
    with pytest.raises(FactorizationBudgetExceeded):
        factorize((2**61 - 1) * (2**89 - 1))


@settings(max_examples=300, deadline=None)
@given(st.integers(min_value=-5000, max_value=5000), st.integers(min_value=1, max_value=3000))
def test_kronecker_matches_oracle(a, n):
    assert kronecker(a, n) == kronecker_oracle(a, n)


@settings(max_examples=200, deadline=None)
@given(st.integers(min_value=2, max_value=10**12))
def test_is_prime_matches_sympy(n):
    assert is_prime(n) == sympy.isprime(n)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from([3, 5, 13, 17, 97, 10007, 998244353]), st.integers(min_value=0, max_value=10**9))
def test_sqrt_mod(p, a):
    r = sqrt_mod(a, p)
    if r is None:
        assert sympy.legendre_symbol(a % p, p) == -1
    else:
        assert (r * r - a) % p == 0


@settings(max_examples=200, deadline=None)
@given(st.integers(min_value=0, max_value=10**30), st.integers(min_value=2, max_value=7))
def test_integer_root(x, k):
    assert integer_root(x**k, k) == x
    if x > 1:
        assert integer_root(x**k + 1, k) is None


def test_fundamental_discriminants_match_oracle():
    ours = [D for D in range(-2000, 2001) if is_fundamental_discriminant(D)]
    assert ours == fundamental_discriminants(-2000, 2000)
    assert not is_fundamental_discriminant(-48)
    assert math.prod([1]) == 1
