"""
Outward-rounded interval arithmetic: scalars, vectors and sparse symmetric matrices.

Directed rounding is emulated with error-free transformations (TwoSum, Dekker's TwoProduct):
a round-to-nearest result is nudged one ulp outward only when it is inexact, so the global
floating-point rounding mode is never touched and exact operations stay exact.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import ROUND_CEILING, ROUND_FLOOR, Decimal, localcontext
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Iterable, Union

import numpy as np
import scipy.sparse as sp

from core.errors import IntervalDomainError

INF = math.inf
UNIT_ROUNDOFF = 2.0**-53
ETA = 2.0**-1074  # smallest positive subnormal
_SPLITTER = 134217729.0  # 2**27 + 1
_SPLIT_LIMIT = 2.0**996
_UNDERFLOW_LIMIT = 2.0**-969

Number = Union[int, float, Fraction]


# ---------------------------------------------------------------------------
# scalar error-free transformations
# ---------------------------------------------------------------------------


def _two_sum(a: float, b: float) -> tuple[float, float]:
    s = a + b
    if not math.isfinite(s):
        return s, math.nan
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _split(a: float) -> tuple[float, float]:
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


def _two_prod(a: float, b: float) -> tuple[float, float]:
    p = a * b
    if a == 0.0 or b == 0.0:
        return 0.0, 0.0
    if (
        not math.isfinite(p)
        or abs(a) > _SPLIT_LIMIT
        or abs(b) > _SPLIT_LIMIT
        or abs(p) < _UNDERFLOW_LIMIT
    ):
        return p, math.nan
    ah, al = _split(a)
    bh, bl = _split(b)
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def _round_down(s: float, err: float) -> float:
    if err < 0.0 or err != err:
        return math.nextafter(s, -INF)
    return s


def _round_up(s: float, err: float) -> float:
    if err > 0.0 or err != err:
        return math.nextafter(s, INF)
    return s


def add_down(a: float, b: float) -> float:
    return _round_down(*_two_sum(a, b))


def add_up(a: float, b: float) -> float:
    return _round_up(*_two_sum(a, b))


def mul_down(a: float, b: float) -> float:
    if a == 0.0 or b == 0.0:
        return 0.0
    return _round_down(*_two_prod(a, b))


def mul_up(a: float, b: float) -> float:
    if a == 0.0 or b == 0.0:
        return 0.0
    return _round_up(*_two_prod(a, b))


def _div_residual(a: float, b: float) -> tuple[float, float]:
    """Quotient and the sign of (exact − quotient), nan when unknown."""
    q = a / b
    if a == 0.0:
        return q, 0.0
    if not math.isfinite(q) or q == 0.0 or math.isinf(b):
        return q, math.nan
    p, e = _two_prod(q, b)
    if e != e:
        return q, math.nan
    r = (a - p) - e
    return q, math.copysign(1.0, b) * r if r != 0.0 else 0.0


def div_down(a: float, b: float) -> float:
    return _round_down(*_div_residual(a, b))


def div_up(a: float, b: float) -> float:
    return _round_up(*_div_residual(a, b))


def _sqrt_residual(x: float) -> tuple[float, float]:
    r = math.sqrt(x)
    if x == 0.0 or math.isinf(x):
        return r, 0.0
    p, e = _two_prod(r, r)
    if e != e:
        return r, math.nan
    return r, (x - p) - e


def sqrt_down(x: float) -> float:
    return _round_down(*_sqrt_residual(x))


def sqrt_up(x: float) -> float:
    return _round_up(*_sqrt_residual(x))


def gamma(k: int) -> float:
    """Upper bound of k·u/(1 − k·u), the classical accumulated rounding factor."""
    ku = k * UNIT_ROUNDOFF
    if ku >= 0.5:
        raise IntervalDomainError(f"Unknown accumulation length {k!r}, must satisfy k*u < 1/2")
    return div_up(ku, 1.0 - ku)


# ---------------------------------------------------------------------------
# vectorized counterparts
# ---------------------------------------------------------------------------


def _v_two_sum(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    with np.errstate(invalid="ignore", over="ignore"):
        s = a + b
        bb = s - a
        err = (a - (s - bb)) + (b - bb)
    err = np.where(np.isfinite(s), err, np.nan)
    return s, err


def _v_two_prod(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    a, b = np.broadcast_arrays(np.asarray(a, dtype=float), np.asarray(b, dtype=float))
    with np.errstate(invalid="ignore", over="ignore", under="ignore"):
        p = a * b
        ca = _SPLITTER * a
        ah = ca - (ca - a)
        al = a - ah
        cb = _SPLITTER * b
        bh = cb - (cb - b)
        bl = b - bh
        err = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    zero = (a == 0.0) | (b == 0.0)
    unsafe = (
        ~np.isfinite(p)
        | (np.abs(a) > _SPLIT_LIMIT)
        | (np.abs(b) > _SPLIT_LIMIT)
        | (np.abs(p) < _UNDERFLOW_LIMIT)
    ) & ~zero
    p = np.where(zero, 0.0, p)
    err = np.where(zero, 0.0, np.where(unsafe, np.nan, err))
    return p, err


def _v_down(s: np.ndarray, err: np.ndarray) -> np.ndarray:
    return np.where((err < 0.0) | np.isnan(err), np.nextafter(s, -INF), s)


def _v_up(s: np.ndarray, err: np.ndarray) -> np.ndarray:
    return np.where((err > 0.0) | np.isnan(err), np.nextafter(s, INF), s)


def v_add_down(a, b) -> np.ndarray:
    return _v_down(*_v_two_sum(np.asarray(a, dtype=float), np.asarray(b, dtype=float)))


def v_add_up(a, b) -> np.ndarray:
    return _v_up(*_v_two_sum(np.asarray(a, dtype=float), np.asarray(b, dtype=float)))


def v_mul_down(a, b) -> np.ndarray:
    return _v_down(*_v_two_prod(a, b))


def v_mul_up(a, b) -> np.ndarray:
    return _v_up(*_v_two_prod(a, b))


def _v_interval_mul(alo, ahi, blo, bhi) -> tuple[np.ndarray, np.ndarray]:
    candidates_lo = [v_mul_down(x, y) for x in (alo, ahi) for y in (blo, bhi)]
    candidates_hi = [v_mul_up(x, y) for x in (alo, ahi) for y in (blo, bhi)]
    return np.minimum.reduce(candidates_lo), np.maximum.reduce(candidates_hi)


def midrad_matmul(a_mid, a_rad, b_mid, b_rad, inner: int) -> tuple[np.ndarray, np.ndarray]:
    """
    Rigorous enclosure of a product of midpoint-radius matrices (dense or sparse left factor).

    Args:
        a_mid, a_rad: Left factor center and radius (ndarray or scipy sparse).
        b_mid, b_rad (np.ndarray): Right factor center and radius (vector or matrix).
        inner (int): Maximal number of products per entry (row nnz of the left factor).

    Returns:
        tuple[np.ndarray, np.ndarray]: Lower and upper endpoint arrays.
    """
    k = max(int(inner), 1)
    abs_a = abs(a_mid)
    abs_b = np.abs(b_mid)
    with np.errstate(over="ignore", invalid="ignore"):
        center = np.asarray(a_mid @ b_mid)
        s = np.asarray(abs_a @ abs_b)
        r = np.asarray(abs_a @ b_rad) + np.asarray(a_rad @ v_add_up(abs_b, b_rad))
        rad = ((gamma(k) * s + r) / (1.0 - gamma(k + 3))) * (1.0 + 8.0 * UNIT_ROUNDOFF)
        rad = rad + (2 * k + 2) * ETA
        rad = np.nextafter(rad, INF)
        lo = np.nextafter(center - rad, -INF)
        hi = np.nextafter(center + rad, INF)
    return lo, hi


# ---------------------------------------------------------------------------
# formatting
# ---------------------------------------------------------------------------


def format_endpoint(x: float, digits: int = 6, upward: bool = False) -> str:
    """Decimal string rounded toward −inf (or +inf with ``upward``) to ``digits`` significant digits."""
    if math.isinf(x):
        return "Inf" if x > 0 else "-Inf"
    if x == 0.0:
        return "0"
    with localcontext() as ctx:
        ctx.prec = 80
        d = Decimal(x)
        quantum = Decimal(1).scaleb(d.adjusted() - (digits - 1))
        q = d.quantize(quantum, rounding=ROUND_CEILING if upward else ROUND_FLOOR)
        if not -6 <= q.adjusted() < 12:
            return format(q, "E")
        text = format(q, "f")
        if "." in text:
            text = text.rstrip("0").rstrip(".")
        return text


def _pad(text: str) -> str:
    return text if text.startswith("-") else " " + text


# ---------------------------------------------------------------------------
# scalar interval
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Interval:
    """Closed interval [lo, hi] of doubles containing the exact quantity it stands for."""

    lo: float
    hi: float

    def __post_init__(self) -> None:
        lo, hi = float(self.lo), float(self.hi)
        if lo != lo or hi != hi:
            raise IntervalDomainError(f"Unknown interval endpoints ({self.lo!r}, {self.hi!r}), NaN is not allowed")
        if lo > hi:
            raise IntervalDomainError(f"Unknown interval [{lo!r}, {hi!r}], must satisfy lo <= hi")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    # construction -----------------------------------------------------------

    @classmethod
    def point(cls, x: float) -> "Interval":
        return cls(x, x)

    @classmethod
    def from_fraction(cls, q: Fraction) -> "Interval":
        """Tightest double enclosure of an exact rational."""
        f = float(q)
        if math.isinf(f):
            return cls(math.nextafter(f, 0.0), f) if f > 0 else cls(f, math.nextafter(f, 0.0))
        exact = Fraction(f)
        if exact == q:
            return cls(f, f)
        if exact < q:
            return cls(f, math.nextafter(f, INF))
        return cls(math.nextafter(f, -INF), f)

    @classmethod
    def hull(cls, *values: "Interval | Number") -> "Interval":
        boxes = [_coerce(v) for v in values]
        return cls(min(b.lo for b in boxes), max(b.hi for b in boxes))

    # properties -------------------------------------------------------------

    @property
    def mid(self) -> float:
        if self.lo == -INF and self.hi == INF:
            return 0.0
        if math.isinf(self.lo) or math.isinf(self.hi):
            return 0.5 * self.lo + 0.5 * self.hi
        return 0.5 * (self.lo + self.hi)

    @property
    def rad(self) -> float:
        """Upper bound of the radius around :attr:`mid`."""
        m = self.mid
        return max(add_up(m, -self.lo), add_up(self.hi, -m))

    @property
    def width(self) -> float:
        return add_up(self.hi, -self.lo)

    @property
    def mag(self) -> float:
        return max(abs(self.lo), abs(self.hi))

    @property
    def mig(self) -> float:
        if self.lo <= 0.0 <= self.hi:
            return 0.0
        return min(abs(self.lo), abs(self.hi))

    def is_finite(self) -> bool:
        return math.isfinite(self.lo) and math.isfinite(self.hi)

    def is_positive(self) -> bool:
        return self.lo > 0.0

    def is_negative(self) -> bool:
        return self.hi < 0.0

    def contains(self, x: "Interval | Number") -> bool:
        if isinstance(x, Interval):
            return self.lo <= x.lo and x.hi <= self.hi
        if isinstance(x, (Fraction, int)):
            return (self.lo == -INF or Fraction(self.lo) <= x) and (self.hi == INF or x <= Fraction(self.hi))
        return self.lo <= x <= self.hi

    def overlaps(self, other: "Interval | Number") -> bool:
        o = _coerce(other)
        return self.lo <= o.hi and o.lo <= self.hi

    def intersect(self, other: "Interval | Number") -> "Interval":
        o = _coerce(other)
        lo, hi = max(self.lo, o.lo), min(self.hi, o.hi)
        if lo > hi:
            raise IntervalDomainError(f"Empty intersection of {self} and {o}")
        return Interval(lo, hi)

    # arithmetic -------------------------------------------------------------

    def __add__(self, other):
        return iv_add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        return iv_sub(self, other)

    def __rsub__(self, other):
        return iv_sub(other, self)

    def __mul__(self, other):
        return iv_mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return iv_div(self, other)

    def __rtruediv__(self, other):
        return iv_div(other, self)

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def __pos__(self) -> "Interval":
        return self

    def __abs__(self) -> "Interval":
        return Interval(self.mig, self.mag)

    def __pow__(self, k: int) -> "Interval":
        if not isinstance(k, int) or k < 0:
            raise IntervalDomainError(f"Unknown exponent {k!r}, must be a non-negative int")
        if k == 0:
            return Interval(1.0, 1.0)
        if k == 2:
            return self.square()
        result = self
        for _ in range(k - 1):
            result = result * self
        return result

    def square(self) -> "Interval":
        lo, hi = self.mig, self.mag
        return Interval(mul_down(lo, lo), mul_up(hi, hi))

    def sqrt(self) -> "Interval":
        return iv_sqrt(self)

    def __format__(self, spec: str) -> str:
        digits = int(spec) if spec else 6
        lo = format_endpoint(self.lo, digits)
        hi = format_endpoint(self.hi, digits, upward=True)
        return f"[{_pad(lo)},{_pad(hi)}]"

    def __str__(self) -> str:
        return format(self, "6")


def _coerce(x: "Interval | Number") -> Interval:
    if isinstance(x, Interval):
        return x
    if isinstance(x, (bool, np.integer)):
        x = int(x)
    if isinstance(x, int):
        if abs(x) <= 2**53:
            return Interval(float(x), float(x))
        return Interval.from_fraction(Fraction(x))
    if isinstance(x, Fraction):
        return Interval.from_fraction(x)
    if isinstance(x, (float, np.floating)):
        return Interval(float(x), float(x))
    raise TypeError(f"Unknown operand type {type(x).__name__!r}, must be Interval, int, float or Fraction")


def iv_add(a, b) -> Interval:
    a, b = _coerce(a), _coerce(b)
    return Interval(add_down(a.lo, b.lo), add_up(a.hi, b.hi))


def iv_sub(a, b) -> Interval:
    a, b = _coerce(a), _coerce(b)
    return Interval(add_down(a.lo, -b.hi), add_up(a.hi, -b.lo))


def iv_mul(a, b) -> Interval:
    a, b = _coerce(a), _coerce(b)
    pairs = [(a.lo, b.lo), (a.lo, b.hi), (a.hi, b.lo), (a.hi, b.hi)]
    return Interval(min(mul_down(x, y) for x, y in pairs), max(mul_up(x, y) for x, y in pairs))


def iv_div(a, b) -> Interval:
    a, b = _coerce(a), _coerce(b)
    if b.lo <= 0.0 <= b.hi:
        raise IntervalDomainError(f"Division by interval {b} containing zero")
    pairs = [(a.lo, b.lo), (a.lo, b.hi), (a.hi, b.lo), (a.hi, b.hi)]
    return Interval(min(div_down(x, y) for x, y in pairs), max(div_up(x, y) for x, y in pairs))


def iv_sqrt(a) -> Interval:
    a = _coerce(a)
    if a.lo < 0.0:
        raise IntervalDomainError(f"Square root of interval {a} with negative lower endpoint")
    return Interval(sqrt_down(a.lo), sqrt_up(a.hi))


def iv_max(*values) -> Interval:
    boxes = [_coerce(v) for v in values]
    return Interval(max(b.lo for b in boxes), max(b.hi for b in boxes))


def iv_min(*values) -> Interval:
    boxes = [_coerce(v) for v in values]
    return Interval(min(b.lo for b in boxes), min(b.hi for b in boxes))


def iv_sum(values: Iterable) -> Interval:
    total = Interval(0.0, 0.0)
    for v in values:
        total = total + v
    return total


def upper(x: "Interval | Number") -> float:
    """Upper endpoint of an enclosure of ``x``."""
    return _coerce(x).hi


# ---------------------------------------------------------------------------
# interval vector
# ---------------------------------------------------------------------------


def _fsum_down(values: np.ndarray) -> float:
    total = math.fsum(values)
    return math.nextafter(total, -INF)


def _fsum_up(values: np.ndarray) -> float:
    total = math.fsum(values)
    return math.nextafter(total, INF)


class IntervalVector:
    """Vector of intervals stored as two float64 endpoint arrays."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi) -> None:
        lo = np.array(lo, dtype=float, copy=True).reshape(-1)
        hi = np.array(hi, dtype=float, copy=True).reshape(-1)
        if lo.shape != hi.shape:
            raise ValueError(f"Unknown endpoint shapes {lo.shape!r} and {hi.shape!r}, must match")
        if np.isnan(lo).any() or np.isnan(hi).any():
            raise IntervalDomainError("IntervalVector endpoints must not be NaN")
        if (lo > hi).any():
            raise IntervalDomainError("IntervalVector requires lo <= hi entrywise")
        self.lo = lo
        self.hi = hi

    @classmethod
    def point(cls, x) -> "IntervalVector":
        x = np.asarray(x, dtype=float)
        return cls(x, x)

    @classmethod
    def zeros(cls, n: int) -> "IntervalVector":
        return cls(np.zeros(n), np.zeros(n))

    @classmethod
    def from_midrad(cls, center, radius) -> "IntervalVector":
        c = np.asarray(center, dtype=float)
        r = np.broadcast_to(np.asarray(radius, dtype=float), c.shape)
        with np.errstate(over="ignore"):
            lo = np.nextafter(c - r, -INF)
            hi = np.nextafter(c + r, INF)
        lo = np.where(r == 0.0, c, lo)
        hi = np.where(r == 0.0, c, hi)
        return cls(lo, hi)

    @classmethod
    def from_intervals(cls, values: Iterable[Interval]) -> "IntervalVector":
        values = list(values)
        return cls([v.lo for v in values], [v.hi for v in values])

    def __len__(self) -> int:
        return self.lo.shape[0]

    def __getitem__(self, i: int) -> Interval:
        return Interval(self.lo[i], self.hi[i])

    def __iter__(self):
        for lo, hi in zip(self.lo, self.hi):
            yield Interval(lo, hi)

    def __repr__(self) -> str:
        return f"IntervalVector(len={len(self)})"

    def take(self, indices) -> "IntervalVector":
        return IntervalVector(self.lo[indices], self.hi[indices])

    def mid(self) -> np.ndarray:
        return 0.5 * (self.lo + self.hi)

    def rad(self) -> np.ndarray:
        m = self.mid()
        return np.maximum(v_add_up(m, -self.lo), v_add_up(self.hi, -m))

    def mag(self) -> np.ndarray:
        return np.maximum(np.abs(self.lo), np.abs(self.hi))

    def is_positive(self) -> bool:
        return bool((self.lo > 0.0).all())

    def contains(self, x) -> bool:
        if isinstance(x, IntervalVector):
            return bool(((self.lo <= x.lo) & (x.hi <= self.hi)).all())
        x = np.asarray(x, dtype=float)
        return bool(((self.lo <= x) & (x <= self.hi)).all())

    def overlaps(self, other: "IntervalVector") -> bool:
        return bool(((self.lo <= other.hi) & (other.lo <= self.hi)).all())

    def intersect(self, other: "IntervalVector") -> "IntervalVector":
        lo = np.maximum(self.lo, other.lo)
        hi = np.minimum(self.hi, other.hi)
        if (lo > hi).any():
            raise IntervalDomainError("Empty intersection of interval vectors")
        return IntervalVector(lo, hi)

    def hull(self, other: "IntervalVector") -> "IntervalVector":
        return IntervalVector(np.minimum(self.lo, other.lo), np.maximum(self.hi, other.hi))

    def _pair(self, other) -> tuple[np.ndarray, np.ndarray]:
        if isinstance(other, IntervalVector):
            return other.lo, other.hi
        if isinstance(other, Interval):
            return np.full_like(self.lo, other.lo), np.full_like(self.hi, other.hi)
        x = np.asarray(other, dtype=float)
        return x, x

    def __add__(self, other) -> "IntervalVector":
        blo, bhi = self._pair(other)
        return IntervalVector(v_add_down(self.lo, blo), v_add_up(self.hi, bhi))

    __radd__ = __add__

    def __sub__(self, other) -> "IntervalVector":
        blo, bhi = self._pair(other)
        return IntervalVector(v_add_down(self.lo, -bhi), v_add_up(self.hi, -blo))

    def __rsub__(self, other) -> "IntervalVector":
        return (-self) + other

    def __neg__(self) -> "IntervalVector":
        return IntervalVector(-self.hi, -self.lo)

    def __mul__(self, other) -> "IntervalVector":
        """Entrywise product with an Interval, a float, an array or another IntervalVector."""
        if isinstance(other, (int, float, Fraction)):
            other = _coerce(other)
        blo, bhi = self._pair(other)
        lo, hi = _v_interval_mul(self.lo, self.hi, blo, bhi)
        return IntervalVector(lo, hi)

    __rmul__ = __mul__

    def dot(self, other) -> Interval:
        """Enclosure of the dot product with an IntervalVector or a float array."""
        blo, bhi = self._pair(other)
        lo, hi = _v_interval_mul(self.lo, self.hi, blo, bhi)
        return Interval(_fsum_down(lo), _fsum_up(hi))

    def norm2_upper(self) -> float:
        return iv_norm2_upper(self)


def iv_dot(a: IntervalVector, b) -> Interval:
    return a.dot(b)


def iv_norm2_upper(v: IntervalVector) -> float:
    """Upper bound of sup ‖x‖₂ over x ∈ v."""
    mag = v.mag()
    if not mag.any():
        return 0.0
    if not np.isfinite(mag).all():
        return INF
    squares = mag * mag
    k = squares.shape[0]
    total = math.fsum(squares)
    total = add_up(mul_up(total, 1.0 + 8.0 * UNIT_ROUNDOFF), (k + 1) * ETA)
    return sqrt_up(total)


# ---------------------------------------------------------------------------
# sparse interval matrix
# ---------------------------------------------------------------------------


class SparseIntervalMatrix:
    """
    Sparse matrix with interval entries.

    The lower and upper endpoint matrices share one CSR sparsity pattern, kept canonical
    (row-major, duplicates summed, exact [0,0] entries dropped).
    """

    def __init__(self, rows: np.ndarray, cols: np.ndarray, lo: np.ndarray, hi: np.ndarray, shape: tuple[int, int]) -> None:
        self.shape = (int(shape[0]), int(shape[1]))
        self.rows = np.asarray(rows, dtype=np.int64)
        self.cols = np.asarray(cols, dtype=np.int64)
        self.lo_data = np.asarray(lo, dtype=float)
        self.hi_data = np.asarray(hi, dtype=float)
        indptr = np.zeros(self.shape[0] + 1, dtype=np.int64)
        np.cumsum(np.bincount(self.rows, minlength=self.shape[0]), out=indptr[1:])
        self.lo = sp.csr_matrix((self.lo_data, self.cols, indptr), shape=self.shape)
        self.hi = sp.csr_matrix((self.hi_data, self.cols, indptr.copy()), shape=self.shape)

    @classmethod
    def from_triplets(cls, rows, cols, lo, hi, shape: tuple[int, int]) -> "SparseIntervalMatrix":
        """
        Build a matrix from (row, col, [lo, hi]) contributions, summing duplicates rigorously.

        Args:
            rows, cols: Integer index arrays.
            lo, hi: Endpoint arrays of each contribution.
            shape (tuple[int, int]): Matrix dimensions.

        Returns:
            SparseIntervalMatrix: The accumulated matrix.
        """
        rows = np.asarray(rows, dtype=np.int64).reshape(-1)
        cols = np.asarray(cols, dtype=np.int64).reshape(-1)
        lo = np.asarray(lo, dtype=float).reshape(-1)
        hi = np.asarray(hi, dtype=float).reshape(-1)
        if not (rows.shape == cols.shape == lo.shape == hi.shape):
            raise ValueError("Triplet arrays must have equal length")
        ncols = int(shape[1])
        if rows.size == 0:
            empty = np.zeros(0)
            return cls(empty.astype(np.int64), empty.astype(np.int64), empty, empty, shape)
        keys = rows * ncols + cols
        unique, inverse = np.unique(keys, return_inverse=True)
        count = np.bincount(inverse)
        lo_sum = np.bincount(inverse, weights=lo)
        hi_sum = np.bincount(inverse, weights=hi)
        kmax = int(count.max())
        if kmax > 1:
            g = gamma(kmax - 1)
            slack = g / (1.0 - gamma(kmax))
            err_lo = np.nextafter(np.bincount(inverse, weights=np.abs(lo)) * slack, INF)
            err_hi = np.nextafter(np.bincount(inverse, weights=np.abs(hi)) * slack, INF)
            summed = count > 1
            lo_sum = np.where(summed, np.nextafter(lo_sum - err_lo, -INF), lo_sum)
            hi_sum = np.where(summed, np.nextafter(hi_sum + err_hi, INF), hi_sum)
        keep = (lo_sum != 0.0) | (hi_sum != 0.0)
        unique, lo_sum, hi_sum = unique[keep], lo_sum[keep], hi_sum[keep]
        return cls(unique // ncols, unique % ncols, lo_sum, hi_sum, shape)

    @classmethod
    def from_dense(cls, lo, hi=None) -> "SparseIntervalMatrix":
        lo = np.asarray(lo, dtype=float)
        hi = lo if hi is None else np.asarray(hi, dtype=float)
        r, c = np.nonzero((lo != 0.0) | (hi != 0.0))
        return cls(r, c, lo[r, c], hi[r, c], lo.shape)

    @property
    def nnz(self) -> int:
        return int(self.rows.shape[0])

    @cached_property
    def max_row_nnz(self) -> int:
        if self.nnz == 0:
            return 1
        return int(np.bincount(self.rows, minlength=self.shape[0]).max())

    @cached_property
    def _midrad(self) -> tuple[sp.csr_matrix, sp.csr_matrix]:
        mid = 0.5 * (self.lo_data + self.hi_data)
        rad = np.maximum(v_add_up(mid, -self.lo_data), v_add_up(self.hi_data, -mid))
        indptr = self.lo.indptr
        m = sp.csr_matrix((mid, self.cols, indptr), shape=self.shape)
        r = sp.csr_matrix((rad, self.cols, indptr), shape=self.shape)
        return m, r

    def mid_matrix(self) -> sp.csr_matrix:
        return self._midrad[0]

    def rad_matrix(self) -> sp.csr_matrix:
        return self._midrad[1]

    def mag_matrix(self) -> sp.csr_matrix:
        mag = np.maximum(np.abs(self.lo_data), np.abs(self.hi_data))
        return sp.csr_matrix((mag, self.cols, self.lo.indptr), shape=self.shape)

    def entry(self, i: int, j: int) -> Interval:
        return Interval(self.lo[i, j], self.hi[i, j])

    def diagonal(self) -> IntervalVector:
        return IntervalVector(self.lo.diagonal(), self.hi.diagonal())

    def dense(self) -> tuple[np.ndarray, np.ndarray]:
        return self.lo.toarray(), self.hi.toarray()

    def is_structurally_symmetric(self) -> bool:
        pattern = sp.csr_matrix((np.ones(self.nnz), self.cols, self.lo.indptr), shape=self.shape)
        return (pattern != pattern.T).nnz == 0

    def restrict(self, indices) -> "SparseIntervalMatrix":
        """Principal submatrix on ``indices`` (in the given order)."""
        indices = np.asarray(indices, dtype=np.int64)
        position = np.full(self.shape[0], -1, dtype=np.int64)
        position[indices] = np.arange(indices.shape[0])
        r, c = position[self.rows], position[self.cols]
        keep = (r >= 0) & (c >= 0)
        n = indices.shape[0]
        return SparseIntervalMatrix.from_triplets(r[keep], c[keep], self.lo_data[keep], self.hi_data[keep], (n, n))

    def combine(self, other: "SparseIntervalMatrix", scale: "Interval | Number") -> "SparseIntervalMatrix":
        """Enclosure of self + scale·other."""
        s = _coerce(scale)
        olo, ohi = _v_interval_mul(other.lo_data, other.hi_data, s.lo, s.hi)
        return SparseIntervalMatrix.from_triplets(
            np.concatenate([self.rows, other.rows]),
            np.concatenate([self.cols, other.cols]),
            np.concatenate([self.lo_data, olo]),
            np.concatenate([self.hi_data, ohi]),
            self.shape,
        )

    def scaled(self, scale: "Interval | Number") -> "SparseIntervalMatrix":
        s = _coerce(scale)
        lo, hi = _v_interval_mul(self.lo_data, self.hi_data, s.lo, s.hi)
        return SparseIntervalMatrix(self.rows, self.cols, lo, hi, self.shape)

    def matvec(self, x: "IntervalVector | np.ndarray") -> IntervalVector:
        """Rigorous enclosure of A·x for a point or interval vector x."""
        if isinstance(x, IntervalVector):
            xm, xr = x.mid(), x.rad()
        else:
            xm = np.asarray(x, dtype=float)
            xr = np.zeros_like(xm)
        if xm.shape[0] != self.shape[1]:
            raise ValueError(f"Unknown vector length {xm.shape[0]!r}, must be {self.shape[1]}")
        mid, rad = self._midrad
        lo, hi = midrad_matmul(mid, rad, xm, xr, self.max_row_nnz)
        return IntervalVector(lo, hi)

    def matvec_point(self, x: np.ndarray) -> IntervalVector:
        return self.matvec(np.asarray(x, dtype=float))

    def quadratic_form(self, x: "IntervalVector | np.ndarray", y: "IntervalVector | np.ndarray | None" = None) -> Interval:
        """Enclosure of xᵀ A y (y defaults to x)."""
        y = x if y is None else y
        ay = self.matvec(y)
        if isinstance(x, IntervalVector):
            return x.dot(ay)
        return ay.dot(np.asarray(x, dtype=float))

    def _row_sums_upper(self, weights: np.ndarray) -> np.ndarray:
        sums = np.bincount(self.rows, weights=weights, minlength=self.shape[0])
        return np.nextafter(sums / (1.0 - gamma(self.max_row_nnz + 1)), INF)

    def norm_inf_upper(self) -> float:
        """Upper bound of the ∞-norm of every matrix in the enclosure."""
        if self.nnz == 0:
            return 0.0
        mag = np.maximum(np.abs(self.lo_data), np.abs(self.hi_data))
        return float(self._row_sums_upper(mag).max())

    def gershgorin_upper(self) -> float:
        """Upper bound of the largest eigenvalue of every symmetric matrix in the enclosure."""
        if self.nnz == 0:
            return 0.0
        mag = np.maximum(np.abs(self.lo_data), np.abs(self.hi_data))
        off = self._row_sums_upper(np.where(self.rows == self.cols, 0.0, mag))
        return float(np.max(v_add_up(self.hi.diagonal(), off)))

    def to_triplet_text(self, path: "str | Path", digits: int = 17) -> Path:
        """Write ``row col lo hi`` lines with outward-rounded decimal endpoints."""
        path = Path(path)
        with path.open("w", encoding="utf-8") as fh:
            fh.write(f"% {self.shape[0]} {self.shape[1]} {self.nnz}\n")
            for i, j, lo, hi in zip(self.rows, self.cols, self.lo_data, self.hi_data):
                fh.write(f"{i} {j} {format_endpoint(lo, digits)} {format_endpoint(hi, digits, upward=True)}\n")
        return path
