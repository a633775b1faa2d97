from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import random_branch_series
from itercover.poly import GF, QQ, Polynomial
from itercover.series import (
    BranchSeries,
    half_binomial,
    hypertangent_polynomial,
    hypertangent_polynomials,
    lemma23_substitution_check,
    residual,
    root_components,
    truncated_sqrt,
    xi_sequence,
)

z = Polynomial.variable(1, 0)
ZERO = Polynomial.zero(1)


def series_1d(l, *parts):
    return BranchSeries.from_parts(l, list(parts), 1, QQ)


def test_half_binomial_values():
    assert half_binomial(0) == 1
    assert half_binomial(1) == Fraction(1, 2)
    assert half_binomial(2) == Fraction(-1, 8)
    assert half_binomial(3) == Fraction(1, 16)
    assert half_binomial(4) == Fraction(-5, 128)


def test_half_binomial_oracle_squaring():
    # oracle: square the degree-4 truncation of sqrt(1 + t) with plain Fractions
    coeffs = [half_binomial(i) for i in range(5)]
    square = [sum(coeffs[s] * coeffs[i - s] for s in range(i + 1)) for i in range(5)]
    assert square == [1, 1, 0, 0, 0]


@pytest.mark.parametrize("i", range(13))
def test_half_binomial_self_convolution(i):
    total = sum(half_binomial(s) * half_binomial(i - s) for s in range(i + 1))
    assert total == (1 if i <= 1 else 0)


def test_truncated_sqrt_examples():
    root = truncated_sqrt(series_1d(2), 3)
    assert all(p.is_zero() for p in root.parts)
    root = truncated_sqrt(series_1d(1, z), 2)
    assert root.polynomial() == 1 + z * Fraction(1, 2) - z * z * Fraction(1, 8)
    assert root.phi(1) == z * Fraction(1, 2)
    root = truncated_sqrt(series_1d(1, None, z * z), 1)
    assert root.phi(1).is_zero() and root.polynomial() == Polynomial.one(1)


def test_residual_examples():
    assert residual(series_1d(2), 2).is_zero()
    g = series_1d(1, z)
    assert residual(g, 2) == z**3 * Fraction(1, 8) - z**4 * Fraction(1, 64)
    assert residual(g, 1) == z * z * Fraction(-1, 4)


def test_hypertangent_examples():
    assert hypertangent_polynomial(series_1d(1, None, z * z), 2) == z * z
    g = series_1d(2, z)
    assert hypertangent_polynomial(g, 2) == z * z * Fraction(-1, 4)
    assert hypertangent_polynomial(g, 3) == z**3 * Fraction(1, 8)
    with pytest.raises(ValueError):
        hypertangent_polynomial(g, 5)


def test_xi_examples():
    xi = xi_sequence(series_1d(2))
    assert sorted(xi) == [3, 4] and all(v.is_zero() for v in xi.values())
    xi = xi_sequence(series_1d(2, z, None, z**3, z**4))
    assert xi[3] == z**3 * Fraction(-1, 8)
    assert xi == xi_sequence(series_1d(2, z))


def test_substitution_check_examples():
    rng = random.Random(3)
    for l in (2, 3):
        g = random_branch_series(rng, l, 2)
        assert lemma23_substitution_check(g, l + 1)
    assert lemma23_substitution_check(random_branch_series(rng, 2, 3), 4)
    assert all(lemma23_substitution_check(series_1d(3), c) for c in (4, 5, 6))


def test_branch_series_validation():
    with pytest.raises(ValueError):
        series_1d(1, z * z)
    with pytest.raises(ValueError):
        BranchSeries(1, (Polynomial.constant(1, 2), z, ZERO))


series_params = st.tuples(st.integers(0, 2**32), st.sampled_from([2, 3, 4]), st.integers(1, 3))


@given(series_params)
def test_square_matches_through_degree_2l(params):
    seed, l, n = params
    g = random_branch_series(random.Random(seed), l, n)
    root = truncated_sqrt(g, 2 * l).polynomial()
    diff = g.polynomial() - root * root
    assert diff.is_zero() or diff.min_degree() > 2 * l


@given(series_params, st.data())
def test_residual_starts_above_j(params, data):
    seed, l, n = params
    g = random_branch_series(random.Random(seed), l, n)
    j = data.draw(st.integers(1, 2 * l))
    res = residual(g, j)
    assert res.is_zero() or res.min_degree() >= j + 1


@given(series_params, st.data())
def test_hypertangent_tail_independence(params, data):
    seed, l, n = params
    rng = random.Random(seed)
    g = random_branch_series(rng, l, n)
    j = data.draw(st.integers(1, 2 * l - 1))
    other = random_branch_series(rng, l, n)
    swapped = g.replace({t: other.w[t] for t in range(j + 1, 2 * l + 1)})
    a = hypertangent_polynomial(g, j + 1) - g.w[j + 1]
    b = hypertangent_polynomial(swapped, j + 1) - swapped.w[j + 1]
    assert a == b


@given(series_params, st.data())
def test_substitution_identity(params, data):
    seed, l, n = params
    g = random_branch_series(random.Random(seed), l, n)
    assert lemma23_substitution_check(g, data.draw(st.integers(l + 1, 2 * l)))


@given(series_params)
def test_xi_ignores_upper_components(params):
    seed, l, n = params
    rng = random.Random(seed)
    g = random_branch_series(rng, l, n)
    other = random_branch_series(rng, l, n)
    moved = g.replace({t: other.w[t] for t in range(l + 1, 2 * l + 1)})
    xi = xi_sequence(g)
    assert xi == xi_sequence(moved)
    assert all(v.is_zero() or v.is_homogeneous(d) for d, v in xi.items())


@given(series_params)
def test_prime_field_matches_reduction(params):
    seed, l, n = params
    F = GF(2**31 - 1)
    g = random_branch_series(random.Random(seed), l, n)
    gp = BranchSeries(l, tuple(w.change_domain(F) for w in g.w))
    for d in range(l + 1, 2 * l + 1):
        assert hypertangent_polynomial(g, d).change_domain(F) == hypertangent_polynomial(gp, d)


@given(series_params)
def test_recurrence_matches_binomial_series(params):
    seed, l, n = params
    g = random_branch_series(random.Random(seed), l, n)
    phi = root_components(g, 2 * l)
    assert list(truncated_sqrt(g, 2 * l).parts) == phi[1:]
    fast = hypertangent_polynomials(g, range(2, 2 * l + 1))
    assert all(fast[c] == hypertangent_polynomial(g, c) for c in range(2, 2 * l + 1))
