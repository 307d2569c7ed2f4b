import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sl3skein.chebyshev import (
    BivariatePoly,
    additivity_check,
    adjugate,
    cheb,
    det3,
    mat_mul,
    random_sl3,
    trace_identity_check,
    verify_chebyshev,
)
from sl3skein.errors import NotUnimodular

x1, x2 = BivariatePoly.x1(), BivariatePoly.x2()
I3 = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
JORDAN = ((1, 1, 0), (0, 1, 1), (0, 0, 1))


def test_small_polynomials():
    assert cheb(0) == BivariatePoly.const(3)
    assert cheb(1) == x1
    assert cheb(2) == x1 * x1 - x2 * 2
    assert cheb(3) == x1 ** 3 - x1 * x2 * 3 + BivariatePoly.const(3)
    assert cheb(4) == x1 ** 4 - x1 * x1 * x2 * 4 + x2 * x2 * 2 + x1 * 4


def test_no_zero_coefficients_stored():
    p = x1 - x1 + x2
    assert p.terms == {(0, 1): 1}
    assert (x1 - x1).terms == {}


def test_bad_arguments():
    with pytest.raises(ValueError):
        cheb(-1)
    with pytest.raises(ValueError):
        cheb(2, 3)
    with pytest.raises(ValueError):
        additivity_check(0, 2, 1)


@pytest.mark.parametrize("m", range(21))
def test_degree_and_leading_term(m):
    p = cheb(m)
    assert p.degree == m
    assert p.terms[(m, 0)] == (3 if m == 0 else 1)
    assert all(i + 2 * j <= m for i, j in p.terms)


@pytest.mark.parametrize("m", range(21))
def test_symmetry(m):
    assert cheb(m, 2) == cheb(m, 1).swap()
    assert cheb(m, 2).swap() == cheb(m, 1)


@pytest.mark.parametrize("m", range(3, 21))
def test_recurrence(m):
    assert cheb(m) == x1 * cheb(m - 1) - x2 * cheb(m - 2) + cheb(m - 3)


def test_composition_multiplies_indices():
    assert additivity_check(2, 3, 1)
    assert additivity_check(3, 2, 2)
    assert additivity_check(1, 1, 1)
    for n in range(1, 6):
        for m in range(1, 6):
            for i in (1, 2):
                assert additivity_check(n, m, i)


def test_composition_does_not_add_indices():
    # with (n, m) = (1, 1) the composite is x1, while the index sum gives x1^2 - 2 x2
    composite = cheb(1, 1).compose(cheb(1, 1), cheb(1, 2))
    assert composite == x1
    assert composite != cheb(2, 1)
    assert cheb(2, 1).compose(cheb(3, 1), cheb(3, 2)) != cheb(5, 1)


def test_trace_identity_examples():
    assert all(trace_identity_check(I3, m) for m in range(13))
    assert all(cheb(m).evaluate(3, 3) == 3 for m in range(13))
    assert all(trace_identity_check(JORDAN, m) for m in range(13))


def test_trace_identity_random():
    rng = random.Random(7)
    for _ in range(100):
        A = random_sl3(rng)
        assert det3(A) == 1
        assert mat_mul(A, adjugate(A)) == I3
        assert all(trace_identity_check(A, m) for m in range(13))


def test_not_unimodular():
    with pytest.raises(NotUnimodular):
        trace_identity_check(((2, 0, 0), (0, 1, 0), (0, 0, 1)), 3)


@given(st.integers(-3, 3), st.integers(-3, 3), st.integers(0, 8), st.integers(0, 8))
def test_evaluation_is_a_ring_map(a, b, m, n):
    p, q = cheb(m), cheb(n, 2)
    assert (p * q).evaluate(a, b) == p.evaluate(a, b) * q.evaluate(a, b)
    assert (p + q).evaluate(a, b) == p.evaluate(a, b) + q.evaluate(a, b)


def test_verify_report():
    rep = verify_chebyshev(12, 100, 7)
    assert rep["pass"] and rep["failures"] == [] and rep["matrices"] == 102
