"""
Rigorous enclosures of the constants used by the pipeline: π, trig values of θ = 2π/n, and the
first positive zero of the Bessel function J₂.

Everything is evaluated in exact rational arithmetic with explicit series remainders and only
converted to outward-rounded doubles at the end.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from core.errors import IntervalDomainError
from core.interval import Interval

# π to 62 decimals; the true value lies in [PI_LO, PI_LO + 1e-62].
PI_LO = Fraction("3.14159265358979323846264338327950288419716939937510582097494459")
PI_HI = PI_LO + Fraction(1, 10**62)

TAYLOR_TERMS = 30
BESSEL_TERMS = 40
BESSEL_BRACKET = (Fraction(5), Fraction(53, 10))

FractionBox = tuple[Fraction, Fraction]


def _to_interval(lo: Fraction, hi: Fraction) -> Interval:
    return Interval(Interval.from_fraction(lo).lo, Interval.from_fraction(hi).hi)


def pi_enclosure() -> Interval:
    return _to_interval(PI_LO, PI_HI)


def _sin_series(x: Fraction) -> FractionBox:
    total, term = Fraction(0), x
    x2 = x * x
    for k in range(TAYLOR_TERMS):
        total += term if k % 2 == 0 else -term
        term = term * x2 / ((2 * k + 2) * (2 * k + 3))
    return total - term, total + term


def _cos_series(x: Fraction) -> FractionBox:
    total, term = Fraction(0), Fraction(1)
    x2 = x * x
    for k in range(TAYLOR_TERMS):
        total += term if k % 2 == 0 else -term
        term = term * x2 / ((2 * k + 1) * (2 * k + 2))
    return total - term, total + term


def _clip(box: FractionBox) -> FractionBox:
    return max(box[0], Fraction(-1)), min(box[1], Fraction(1))


def _neg(box: FractionBox) -> FractionBox:
    return -box[1], -box[0]


@lru_cache(maxsize=512)
def sincos_pi(num: int, den: int) -> tuple[Interval, Interval]:
    """
    Enclose sin and cos of num·π/den.

    Args:
        num (int): Numerator of the angle in units of π.
        den (int): Positive denominator.

    Returns:
        tuple[Interval, Interval]: Enclosures of (sin, cos).
    """
    if den <= 0:
        raise ValueError(f"Unknown denominator {den!r}, must be positive")
    r = Fraction(num, den) % 2
    quadrant = math.floor(2 * r)
    s = r - Fraction(quadrant, 2)
    if s == 0:
        sin_x, cos_x = (Fraction(0), Fraction(0)), (Fraction(1), Fraction(1))
    else:
        # sin increases and cos decreases on [0, π/2]
        x_lo, x_hi = s * PI_LO, s * PI_HI
        sin_x = (_sin_series(x_lo)[0], _sin_series(x_hi)[1])
        cos_x = (_cos_series(x_hi)[0], _cos_series(x_lo)[1])
        sin_x, cos_x = _clip(sin_x), _clip(cos_x)
    sin_box, cos_box = {
        0: (sin_x, cos_x),
        1: (cos_x, _neg(sin_x)),
        2: (_neg(sin_x), _neg(cos_x)),
        3: (_neg(cos_x), sin_x),
    }[quadrant]
    return _to_interval(*sin_box), _to_interval(*cos_box)


@dataclass(frozen=True)
class ThetaEnclosure:
    """Enclosures of θ = 2π/n and the trig values the assembly needs."""

    n: int
    theta: Interval
    sin_t: Interval
    cos_t: Interval
    tan_t: Optional[Interval]
    tan_half_t: Interval

    @property
    def cot_t(self) -> Interval:
        return self.cos_t / self.sin_t

    def require_tan(self) -> Interval:
        if self.tan_t is None:
            raise IntervalDomainError(f"tan(2π/{self.n}) is undefined (cos straddles 0)")
        return self.tan_t

    def angle(self, multiple: int) -> tuple[Interval, Interval]:
        """(sin, cos) of multiple·θ."""
        return sincos_pi(2 * multiple, self.n)


@lru_cache(maxsize=64)
def enclose_theta(n: int) -> ThetaEnclosure:
    """
    Enclose θ = 2π/n, sin θ, cos θ, tan θ and tan(θ/2).

    Args:
        n (int): Number of polygon vertices, at least 3.

    Returns:
        ThetaEnclosure: The trig record. ``tan_t`` is None when cos θ straddles 0 (n = 4).
    """
    if n < 3:
        raise ValueError(f"Unknown polygon size n={n!r}, must be >= 3")
    sin_t, cos_t = sincos_pi(2, n)
    sin_h, cos_h = sincos_pi(1, n)
    tan_t = None if cos_t.lo <= 0.0 <= cos_t.hi else sin_t / cos_t
    return ThetaEnclosure(
        n=n,
        theta=pi_enclosure() * 2 / n,
        sin_t=sin_t,
        cos_t=cos_t,
        tan_t=tan_t,
        tan_half_t=sin_h / cos_h,
    )


# ---------------------------------------------------------------------------
# Bessel J₂
# ---------------------------------------------------------------------------


def _j2_terms(x: Fraction, count: int) -> list[Fraction]:
    q = x * x / 4
    term = q / 2
    terms = []
    for k in range(count + 1):
        terms.append(term)
        term = term * q / ((k + 1) * (k + 3))
    return terms


def _j2_box(x_lo: Fraction, x_hi: Fraction) -> FractionBox:
    """J₂ over [x_lo, x_hi] ⊂ [0, 20]; every series term is increasing in x."""
    lo_terms = _j2_terms(x_lo, BESSEL_TERMS)
    hi_terms = _j2_terms(x_hi, BESSEL_TERMS)
    even_lo = sum(lo_terms[0:BESSEL_TERMS:2])
    even_hi = sum(hi_terms[0:BESSEL_TERMS:2])
    odd_lo = sum(lo_terms[1:BESSEL_TERMS:2])
    odd_hi = sum(hi_terms[1:BESSEL_TERMS:2])
    tail = hi_terms[BESSEL_TERMS]
    return even_lo - odd_hi - tail, even_hi - odd_lo + tail


def _dj2_box(x_lo: Fraction, x_hi: Fraction) -> FractionBox:
    """J₂' over [x_lo, x_hi] ⊂ (0, 20] from the termwise derivative (2k+2)·t_k/x."""
    lo_terms = _j2_terms(x_lo, BESSEL_TERMS)
    hi_terms = _j2_terms(x_hi, BESSEL_TERMS)
    d_lo = [(2 * k + 2) * t / x_lo for k, t in enumerate(lo_terms)]
    d_hi = [(2 * k + 2) * t / x_hi for k, t in enumerate(hi_terms)]
    even_lo = sum(d_lo[0:BESSEL_TERMS:2])
    even_hi = sum(d_hi[0:BESSEL_TERMS:2])
    odd_lo = sum(d_lo[1:BESSEL_TERMS:2])
    odd_hi = sum(d_hi[1:BESSEL_TERMS:2])
    tail = d_hi[BESSEL_TERMS]
    return even_lo - odd_hi - tail, even_hi - odd_lo + tail


def _check_domain(x_lo: Fraction, x_hi: Fraction) -> None:
    if x_lo < 0 or x_hi > 20:
        raise IntervalDomainError(f"J2 series evaluated on [{float(x_lo)}, {float(x_hi)}], must lie in [0, 20]")


def bessel_j2(x: Interval) -> Interval:
    """Rigorous enclosure of J₂ over x ⊂ [0, 20]."""
    x_lo, x_hi = Fraction(x.lo), Fraction(x.hi)
    _check_domain(x_lo, x_hi)
    return _to_interval(*_j2_box(x_lo, x_hi))


def _dyadic_outward(lo: Fraction, hi: Fraction, bits: int = 64) -> FractionBox:
    scale = 2**bits
    return Fraction(math.floor(lo * scale), scale), Fraction(math.ceil(hi * scale), scale)


@lru_cache(maxsize=1)
def bessel_zero_j21(tolerance: float = 1e-12) -> Interval:
    """
    Enclose j₂,₁ ≈ 5.1356, the first positive zero of J₂.

    A sign change is bracketed on [5, 5.3] and bisected, then interval Newton steps
    X ← X ∩ (c − J₂(c)/J₂'(X)) contract it below ``tolerance``.

    Returns:
        Interval: Enclosure of the zero.
    """
    a, b = BESSEL_BRACKET
    fa, fb = _j2_box(a, a), _j2_box(b, b)
    if not (fa[0] > 0 and fb[1] < 0):
        raise IntervalDomainError("J2 sign bracket on [5, 5.3] could not be established")
    for _ in range(20):
        c = (a + b) / 2
        fc = _j2_box(c, c)
        if fc[0] > 0:
            a = c
        elif fc[1] < 0:
            b = c
        else:
            break
    for _ in range(20):
        if b - a < Fraction(tolerance):
            break
        c = (a + b) / 2
        f_lo, f_hi = _j2_box(c, c)
        d_lo, d_hi = _dj2_box(a, b)
        if not d_hi < 0:
            break
        # c − [f_lo, f_hi]/[d_lo, d_hi] with a strictly negative denominator
        quotients = [f / d for f in (f_lo, f_hi) for d in (d_lo, d_hi)]
        n_lo, n_hi = _dyadic_outward(c - max(quotients), c - min(quotients))
        new_a, new_b = max(a, n_lo), min(b, n_hi)
        if new_a > new_b:
            raise IntervalDomainError("Interval Newton produced an empty enclosure for j21")
        if (new_b - new_a) >= (b - a):
            break
        a, b = new_a, new_b
    return _to_interval(a, b)


def j21_squared() -> Interval:
    """Enclosure of j₂,₁², the fourth Dirichlet eigenvalue of the unit disk."""
    return bessel_zero_j21().square()


def _g_terms(x: Fraction) -> list[Fraction]:
    """Terms x^{2k}/(4^{k+1} k!(k+2)!) of J₂(x)/x², each increasing in x ≥ 0."""
    q = x * x / 4
    out, t = [], Fraction(1, 8)
    for k in range(BESSEL_TERMS + 1):
        out.append(t)
        t = t * q / ((k + 1) * (k + 3))
    return out


def bessel_j2_no_zero_below(a: Fraction = Fraction(5), max_depth: int = 30) -> bool:
    """
    Certify that J₂ has no zero in (0, a] by showing J₂(x)/x² > 0 on [0, a].

    Args:
        a (Fraction): Right end of the cover.
        max_depth (int): Bisection depth limit.

    Returns:
        bool: True if positivity was proven on the whole cover.
    """
    a = Fraction(a)

    def lower(l: Fraction, r: Fraction) -> Fraction:
        tl, tr = _g_terms(l), _g_terms(r)
        return sum(tl[0:BESSEL_TERMS:2]) - sum(tr[1:BESSEL_TERMS:2]) - tr[BESSEL_TERMS]

    stack = [(Fraction(0), a, 0)]
    while stack:
        l, r, depth = stack.pop()
        if lower(l, r) > 0:
            continue
        if depth >= max_depth:
            return False
        mid = (l + r) / 2
        stack.extend([(l, mid, depth + 1), (mid, r, depth + 1)])
    return True
