"""
Unit and property tests for core.interval (directed rounding and interval containers).
"""
from decimal import Decimal
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mp, mpf

from core.errors import IntervalDomainError
from core.interval import (
    Interval,
    IntervalVector,
    SparseIntervalMatrix,
    add_down,
    add_up,
    div_down,
    div_up,
    format_endpoint,
    gamma,
    mul_down,
    mul_up,
    sqrt_down,
    sqrt_up,
)

finite = st.floats(min_value=-1e12, max_value=1e12, allow_nan=False, allow_infinity=False)
positive = st.floats(min_value=1e-12, max_value=1e12, allow_nan=False, allow_infinity=False)


def exact(x: float) -> Fraction:
    return Fraction(x)


@settings(max_examples=300)
@given(finite, finite)
def test_directed_add_and_mul_bracket_exact(a, b):
    """Downward and upward results bracket the exact sum and product."""
    s = exact(a) + exact(b)
    p = exact(a) * exact(b)
    assert exact(add_down(a, b)) <= s <= exact(add_up(a, b))
    assert exact(mul_down(a, b)) <= p <= exact(mul_up(a, b))


@settings(max_examples=200)
@given(finite, positive)
def test_directed_div_brackets_exact(a, b):
    """Directed quotients bracket a/b."""
    q = exact(a) / exact(b)
    assert exact(div_down(a, b)) <= q <= exact(div_up(a, b))


@settings(max_examples=200)
@given(positive)
def test_directed_sqrt_brackets_exact(x):
    """sqrt_down(x)² <= x <= sqrt_up(x)²."""
    lo, hi = exact(sqrt_down(x)), exact(sqrt_up(x))
    assert lo * lo <= exact(x) <= hi * hi


@settings(max_examples=300)
@given(finite, finite, finite, finite)
def test_interval_operations_contain_point_results(a, b, c, d):
    """x ∘ y contains the exact result for every point of the operands."""
    x = Interval(min(a, b), max(a, b))
    y = Interval(min(c, d), max(c, d))
    for px in (x.lo, x.hi):
        for py in (y.lo, y.hi):
            assert (x + y).contains(exact(px) + exact(py))
            assert (x - y).contains(exact(px) - exact(py))
            assert (x * y).contains(exact(px) * exact(py))
            if not y.contains(0.0):
                assert (x / y).contains(exact(px) / exact(py))


def test_exact_inputs_stay_exact():
    assert Interval(1, 2) + Interval(3, 4) == Interval(4.0, 6.0)
    assert 1 / Interval(2, 4) == Interval(0.25, 0.5)
    assert Interval(-2, 3).square() == Interval(0.0, 9.0)


def test_fraction_operands_are_enclosed():
    x = Interval(1.0, 1.0) * Fraction(1, 3)
    assert x.contains(Fraction(1, 3))
    assert x.lo < x.hi


def test_sqrt_encloses_mpmath():
    mp.dps = 50
    x = Interval(2.0, 3.0).sqrt()
    assert mpf(x.lo) <= mp.sqrt(2) and mp.sqrt(3) <= mpf(x.hi)


def test_domain_errors():
    with pytest.raises(IntervalDomainError):
        Interval(2.0, 1.0)
    with pytest.raises(IntervalDomainError):
        Interval(float("nan"), 1.0)
    with pytest.raises(IntervalDomainError):
        Interval(1.0, 2.0) / Interval(-1.0, 1.0)
    with pytest.raises(IntervalDomainError):
        Interval(-1.0, 1.0).sqrt()
    with pytest.raises(IntervalDomainError):
        Interval(0.0, 1.0).intersect(Interval(2.0, 3.0))
    # domain errors are value errors
    assert issubclass(IntervalDomainError, ValueError)


def test_formatting_is_outward():
    x = Interval.from_fraction(Fraction(1, 3))
    lo_text = format_endpoint(x.lo, 6)
    hi_text = format_endpoint(x.hi, 6, upward=True)
    assert Decimal(lo_text) <= Decimal(x.lo)
    assert Decimal(hi_text) >= Decimal(x.hi)
    assert str(x) == "[ 0.333333, 0.333334]"
    assert str(Interval(-1.5, 2.0)) == "[-1.5, 2]"


def test_gamma_grows_with_k():
    assert 0.0 < gamma(1) < gamma(10) < 1e-14


@settings(max_examples=150)
@given(st.lists(st.tuples(finite, finite), min_size=1, max_size=12))
def test_vector_dot_contains_exact(pairs):
    """The dot product of two point vectors contains the exact rational sum."""
    a = np.array([p[0] for p in pairs])
    b = np.array([p[1] for p in pairs])
    value = IntervalVector.point(a).dot(b)
    assert value.contains(sum(exact(x) * exact(y) for x, y in zip(a, b)))


def test_from_midrad_contains_ball():
    v = IntervalVector.from_midrad([1.0, -2.0], 0.5)
    assert v.contains(np.array([1.5, -2.5]))
    assert not v.contains(np.array([1.6, -2.0]))
    assert IntervalVector.from_midrad([0.1], 0.0).contains(np.array([0.1]))


def test_vector_intersect_and_positive():
    v = IntervalVector([0.1, 0.2], [1.0, 2.0])
    w = IntervalVector([0.5, 0.0], [2.0, 0.3])
    assert v.intersect(w).contains(np.array([0.7, 0.25]))
    assert v.is_positive()
    assert not w.is_positive()
    with pytest.raises(IntervalDomainError):
        v.intersect(IntervalVector([3.0, 0.0], [4.0, 1.0]))


def test_from_triplets_sums_duplicates_rigorously():
    A = SparseIntervalMatrix.from_triplets([0, 0, 1], [0, 0, 1], [0.1, 0.2, 1.0], [0.1, 0.2, 1.0], (2, 2))
    assert A.nnz == 2
    assert A.entry(0, 0).contains(Fraction(0.1) + Fraction(0.2))
    assert A.entry(1, 1) == Interval(1.0, 1.0)


def test_from_triplets_drops_exact_zeros():
    A = SparseIntervalMatrix.from_triplets([0, 1], [1, 0], [0.0, 2.0], [0.0, 2.0], (2, 2))
    assert A.nnz == 1
    assert not A.is_structurally_symmetric()


@settings(max_examples=100)
@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_matvec_contains_exact_product(seed):
    """A·x over random sparse point matrices contains the exact rational product."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 7))
    dense = rng.normal(size=(n, n)) * (rng.random((n, n)) < 0.6)
    x = rng.normal(size=n)
    A = SparseIntervalMatrix.from_dense(dense)
    y = A.matvec(x)
    for i in range(n):
        row = sum(exact(dense[i, j]) * exact(x[j]) for j in range(n))
        assert y[i].contains(row)


def test_quadratic_form_and_combine():
    K = SparseIntervalMatrix.from_dense(np.array([[2.0, -1.0], [-1.0, 2.0]]))
    M = SparseIntervalMatrix.from_dense(np.eye(2))
    x = np.array([1.0, 1.0])
    assert K.quadratic_form(x).contains(2.0)
    shifted = K.combine(M, Interval(-1.0, -1.0))
    assert shifted.quadratic_form(x).contains(0.0)
    assert K.gershgorin_upper() >= 3.0
    assert K.norm_inf_upper() >= 3.0


def test_restrict_keeps_requested_rows(tmp_path):
    A = SparseIntervalMatrix.from_dense(np.arange(1.0, 10.0).reshape(3, 3))
    B = A.restrict(np.array([0, 2]))
    lo, hi = B.dense()
    assert np.array_equal(lo, np.array([[1.0, 3.0], [7.0, 9.0]]))
    path = A.to_triplet_text(tmp_path / "a.txt")
    assert path.exists() and len(path.read_text().splitlines()) >= A.nnz
