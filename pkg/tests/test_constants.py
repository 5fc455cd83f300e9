"""
Tests for core.constants: rigorous π, trig and Bessel enclosures checked against mpmath.
"""
from fractions import Fraction

import pytest
from mpmath import mp, mpf

from core.constants import (
    bessel_j2,
    bessel_j2_no_zero_below,
    bessel_zero_j21,
    enclose_theta,
    j21_squared,
    pi_enclosure,
    sincos_pi,
)
from core.errors import IntervalDomainError
from core.interval import Interval

mp.dps = 40


def encloses(x: Interval, value) -> bool:
    return mpf(x.lo) <= value <= mpf(x.hi)


def test_pi_is_enclosed_tightly():
    pi = pi_enclosure()
    assert encloses(pi, mp.pi)
    assert pi.width <= 2 * 2.0**-51


@pytest.mark.parametrize("num,den", [(1, 5), (2, 5), (1, 6), (2, 6), (3, 7), (7, 10), (13, 12), (-3, 8)])
def test_sincos_encloses_mpmath(num, den):
    s, c = sincos_pi(num, den)
    angle = mp.pi * num / den
    assert encloses(s, mp.sin(angle))
    assert encloses(c, mp.cos(angle))
    assert s.width < 1e-15 and c.width < 1e-15


def test_sincos_quadrant_points_are_exact():
    assert sincos_pi(1, 2) == (Interval(1.0, 1.0), Interval(0.0, 0.0))
    assert sincos_pi(2, 2) == (Interval(0.0, 0.0), Interval(-1.0, -1.0))
    with pytest.raises(ValueError):
        sincos_pi(1, 0)


@pytest.mark.parametrize("n", [5, 6, 7, 8, 9, 10])
def test_theta_record(n):
    t = enclose_theta(n)
    theta = 2 * mp.pi / n
    assert encloses(t.theta, theta)
    assert encloses(t.require_tan(), mp.tan(theta))
    assert encloses(t.tan_half_t, mp.tan(theta / 2))
    assert encloses(t.cot_t, mp.cot(theta))
    s3, c3 = t.angle(3)
    # 3θ = 6π/n, exactly π for the hexagon
    assert encloses(s3, mp.sinpi(mpf(6) / n)) and encloses(c3, mp.cospi(mpf(6) / n))


def test_square_has_no_tangent():
    t = enclose_theta(4)
    assert t.tan_t is None
    with pytest.raises(IntervalDomainError):
        t.require_tan()
    with pytest.raises(ValueError):
        enclose_theta(2)


def test_j2_series_encloses_mpmath():
    for x in (0.5, 2.0, 5.0, 5.3, 11.0):
        assert encloses(bessel_j2(Interval(x, x)), mp.besselj(2, x))
    wide = bessel_j2(Interval(4.0, 4.5))
    assert encloses(wide, mp.besselj(2, mpf("4.25")))
    with pytest.raises(IntervalDomainError):
        bessel_j2(Interval(-1.0, 1.0))


def test_first_zero_of_j2():
    j = bessel_zero_j21()
    assert encloses(j, mp.besseljzero(2, 1))
    assert j.width < 1e-10
    sq = j21_squared()
    assert encloses(sq, mp.besseljzero(2, 1) ** 2)
    # j21² ≈ 26.374616
    assert 26.37 < sq.lo <= sq.hi < 26.38


def test_no_earlier_zero_of_j2():
    assert bessel_j2_no_zero_below(Fraction(5))
    # the cover fails once it reaches the first zero
    assert not bessel_j2_no_zero_below(Fraction(11, 2), max_depth=12)
