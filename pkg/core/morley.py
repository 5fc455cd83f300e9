"""
Morley element matrices on a refined triangle and a certified upper bound of the P1
interpolation constant C(T).

Degrees of freedom are the vertex values and, per edge, the normal derivative at the edge
midpoint with respect to a global edge orientation (lower node index to higher). The gradient of
a quadratic is affine, so its values at the three vertices follow from the midpoint gradients,
and those follow from the degrees of freedom:

* tangential part: (v_j − v_i)/ℓ_ij, exact for quadratics;
* normal part: σ_ij·ψ_ij, with σ_ij = ±1 matching the local and global edge normals.

The H² seminorm and the gradient L² norm of the Morley function are then P1 stiffness and mass
forms of the two gradient components.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import numpy as np
from rich.console import Console

from core.constants import sincos_pi
from core.errors import CertificationError
from core.interval import Interval, SparseIntervalMatrix, add_down, iv_sqrt
from core.log import get_logger, kv
from core.vlinalg import cholesky_spd_check, fp_eigs

Point = tuple[Interval, Interval]
Row = list[Interval]

# local edge order (opposite vertex 1, 2, 3) as (start, end) vertex pairs
LOCAL_EDGES = ((1, 2), (2, 0), (0, 1))

DEFAULT_EPS = 1e-6


def _zeros(rows: int, cols: int) -> list[Row]:
    return [[Interval(0.0, 0.0) for _ in range(cols)] for _ in range(rows)]


def _lattice_point(a: Interval, b: Interval, m: int, i: int, j: int) -> Point:
    """x₁ + (i/m)(x₂ − x₁) + (j/m)(x₃ − x₁) for x₁ = (0,0), x₂ = (1,0), x₃ = (a,b)."""
    return (Interval.from_fraction(Fraction(i, m)) + a * Fraction(j, m), b * Fraction(j, m))


def _midpoint_gradient_maps(points: list[Point]) -> list[tuple[Row, Row]]:
    """Per local edge, the (x, y) gradient at its midpoint as linear maps of the six dofs."""
    maps = []
    for e, (i, j) in enumerate(LOCAL_EDGES):
        dx = points[j][0] - points[i][0]
        dy = points[j][1] - points[i][1]
        length = iv_sqrt(dx.square() + dy.square())
        tx, ty = dx / length, dy / length
        nx, ny = -ty, tx
        gx = [Interval(0.0, 0.0)] * 6
        gy = [Interval(0.0, 0.0)] * 6
        gx[i], gx[j] = -tx / length, tx / length
        gy[i], gy[j] = -ty / length, ty / length
        gx[3 + e], gy[3 + e] = nx, ny
        maps.append((gx, gy))
    return maps


def _vertex_gradient_maps(points: list[Point]) -> tuple[list[Row], list[Row]]:
    """3x6 maps of the dofs to ∂x and ∂y at the three vertices."""
    mids = _midpoint_gradient_maps(points)
    combine = ((-1, 1, 1), (1, -1, 1), (1, 1, -1))
    X, Y = _zeros(3, 6), _zeros(3, 6)
    for v, signs in enumerate(combine):
        for e, sign in enumerate(signs):
            for d in range(6):
                X[v][d] = X[v][d] + mids[e][0][d] * sign
                Y[v][d] = Y[v][d] + mids[e][1][d] * sign
    return X, Y


def p1_element(points: list[Point]) -> tuple[list[Row], list[Row], Interval]:
    """P1 stiffness and mass matrices and the area of one counter-clockwise triangle."""
    (x1, y1), (x2, y2), (x3, y3) = points
    twice_area = (x2 - x1) * (y3 - y1) - (x3 - x1) * (y2 - y1)
    if twice_area.lo <= 0.0:
        raise ValueError(f"Unknown triangle orientation with signed area {twice_area / 2}, must be positive")
    grads = [
        ((y2 - y3) / twice_area, (x3 - x2) / twice_area),
        ((y3 - y1) / twice_area, (x1 - x3) / twice_area),
        ((y1 - y2) / twice_area, (x2 - x1) / twice_area),
    ]
    area = twice_area / 2
    K = _zeros(3, 3)
    M = _zeros(3, 3)
    for p in range(3):
        for q in range(3):
            K[p][q] = area * (grads[p][0] * grads[q][0] + grads[p][1] * grads[q][1])
            M[p][q] = area / (6 if p == q else 12)
    return K, M, area


def _congruence(G: list[Row], B: list[Row]) -> list[Row]:
    """Gᵀ B G for a 3x6 map G and a symmetric 3x3 B."""
    BG = _zeros(3, 6)
    for p in range(3):
        for d in range(6):
            acc = Interval(0.0, 0.0)
            for q in range(3):
                acc = acc + B[p][q] * G[q][d]
            BG[p][d] = acc
    out = _zeros(6, 6)
    for r in range(6):
        for c in range(6):
            acc = Interval(0.0, 0.0)
            for p in range(3):
                acc = acc + G[p][r] * BG[p][c]
            out[r][c] = acc
    return out


def _endpoints(A: list[Row], B: list[Row]) -> tuple[np.ndarray, np.ndarray]:
    """Endpoints of A + B, symmetrized as the entrywise hull with the transpose."""
    lo = np.array([[(A[r][c] + B[r][c]).lo for c in range(6)] for r in range(6)])
    hi = np.array([[(A[r][c] + B[r][c]).hi for c in range(6)] for r in range(6)])
    return np.minimum(lo, lo.T), np.maximum(hi, hi.T)


def morley_element(points: list[Point]) -> dict[str, tuple[np.ndarray, np.ndarray]]:
    """
    Morley element matrices of one triangle with all σ = +1.

    Returns:
        dict: ``"K"`` (H² seminorm form) and ``"M"`` (gradient L² form) as endpoint pairs.
    """
    X, Y = _vertex_gradient_maps(points)
    K, M, _ = p1_element(points)
    return {
        "K": _endpoints(_congruence(X, K), _congruence(Y, K)),
        "M": _endpoints(_congruence(X, M), _congruence(Y, M)),
    }


@dataclass
class MorleySystem:
    """Morley matrices on the m-refined triangle (0,0), (1,0), (a,b)."""

    a: Interval
    b: Interval
    m: int
    Kxx_morley: SparseIntervalMatrix
    Mxx_morley: SparseIntervalMatrix
    dirichlet_vertices: np.ndarray
    coordinates: np.ndarray
    triangles: np.ndarray
    edges: np.ndarray
    element_edges: np.ndarray
    signs: np.ndarray
    orientation: int = 1
    free: np.ndarray = field(init=False)

    def __post_init__(self) -> None:
        keep = np.ones(self.dof, dtype=bool)
        keep[self.dirichlet_vertices] = False
        self.free = np.flatnonzero(keep)

    @property
    def vertex_count(self) -> int:
        return int(self.coordinates.shape[0])

    @property
    def dof(self) -> int:
        return self.vertex_count + int(self.edges.shape[0])

    @property
    def Kxx0(self) -> SparseIntervalMatrix:
        return self.Kxx_morley.restrict(self.free)

    @property
    def Mxx0(self) -> SparseIntervalMatrix:
        return self.Mxx_morley.restrict(self.free)


def _lattice(m: int) -> tuple[np.ndarray, np.ndarray]:
    """Node ids of the refined triangle and its counter-clockwise sub-triangles."""
    ids = -np.ones((m + 1, m + 1), dtype=np.int64)
    count = 0
    for j in range(m + 1):
        for i in range(m + 1 - j):
            ids[i, j] = count
            count += 1
    tris = []
    for j in range(m):
        for i in range(m - j):
            tris.append((ids[i, j], ids[i + 1, j], ids[i, j + 1]))
            if i + j <= m - 2:
                tris.append((ids[i + 1, j + 1], ids[i, j + 1], ids[i + 1, j]))
    return ids, np.array(tris, dtype=np.int64)


def morley_assemble(a: "Interval | float", b: "Interval | float", m: int, orientation: int = 1) -> MorleySystem:
    """
    Assemble the Morley H² seminorm and gradient-mass matrices on the triangle (0,0), (1,0), (a,b)
    split into m² congruent triangles.

    Upward sub-triangles are translates of one element and downward ones its point reflections,
    so a single element pair of matrices serves the whole mesh; only the edge signs vary.

    Args:
        a, b: Third vertex; b must be positive.
        m (int): Segments per side, at least 1.
        orientation (int): +1, or −1 to reverse every edge sign.

    Returns:
        MorleySystem: The assembled system.
    """
    a, b = Interval.hull(a), Interval.hull(b)
    if b.lo <= 0.0:
        raise ValueError(f"Unknown vertex height b={b}, must be positive")
    if m < 1:
        raise ValueError(f"Unknown subdivision count m={m!r}, must be >= 1")
    if orientation not in (1, -1):
        raise ValueError(f"Unknown orientation {orientation!r}, must be +1 or -1")
    ids, triangles = _lattice(m)
    element = morley_element([_lattice_point(a, b, m, 0, 0), _lattice_point(a, b, m, 1, 0), _lattice_point(a, b, m, 0, 1)])

    starts = triangles[:, [1, 2, 0]]
    ends = triangles[:, [2, 0, 1]]
    low, high = np.minimum(starts, ends), np.maximum(starts, ends)
    vertex_count = int(ids.max()) + 1
    keys = low * vertex_count + high
    unique, inverse = np.unique(keys.reshape(-1), return_inverse=True)
    element_edges = inverse.reshape(-1, 3)
    edges = np.stack([unique // vertex_count, unique % vertex_count], axis=1)
    signs = np.where(starts < ends, 1, -1) * orientation

    dofs = np.concatenate([triangles, vertex_count + element_edges], axis=1)
    row_sign = np.concatenate([np.ones_like(signs), signs], axis=1)
    pair_sign = row_sign[:, :, None] * row_sign[:, None, :]
    rows = np.repeat(dofs[:, :, None], 6, axis=2)
    cols = np.repeat(dofs[:, None, :], 6, axis=1)
    size = vertex_count + edges.shape[0]

    def assemble(block: tuple[np.ndarray, np.ndarray]) -> SparseIntervalMatrix:
        lo, hi = block
        lo_all = np.where(pair_sign > 0, lo[None], -hi[None])
        hi_all = np.where(pair_sign > 0, hi[None], -lo[None])
        return SparseIntervalMatrix.from_triplets(rows, cols, lo_all, hi_all, (size, size))

    coordinates = np.zeros((vertex_count, 2))
    for j in range(m + 1):
        for i in range(m + 1 - j):
            x, y = _lattice_point(a, b, m, i, j)
            coordinates[ids[i, j]] = (x.mid, y.mid)
    return MorleySystem(
        a=a,
        b=b,
        m=m,
        Kxx_morley=assemble(element["K"]),
        Mxx_morley=assemble(element["M"]),
        dirichlet_vertices=np.array([ids[0, 0], ids[m, 0], ids[0, m]], dtype=np.int64),
        coordinates=coordinates,
        triangles=triangles,
        edges=edges,
        element_edges=element_edges,
        signs=signs,
        orientation=orientation,
    )


def flip_orientation(system: MorleySystem) -> MorleySystem:
    """The same system with every global edge orientation reversed."""
    return morley_assemble(system.a, system.b, system.m, orientation=-system.orientation)


def morley_interpolate(
    value: Callable[[float, float], float],
    gradient: Callable[[float, float], tuple[float, float]],
    system: MorleySystem,
) -> np.ndarray:
    """
    Morley degrees of freedom of a smooth function: vertex values and mean normal derivatives.

    Edge means use three-point Gauss-Legendre quadrature, exact for cubics.
    """
    xy = system.coordinates
    dofs = np.zeros(system.dof)
    for k, (x, y) in enumerate(xy):
        dofs[k] = value(float(x), float(y))
    nodes, weights = np.polynomial.legendre.leggauss(3)
    for e, (p, q) in enumerate(system.edges):
        start, end = xy[p], xy[q]
        tangent = end - start
        normal = np.array([-tangent[1], tangent[0]]) / np.hypot(*tangent)
        mean = 0.0
        for t, w in zip(nodes, weights):
            gx, gy = gradient(*(start + 0.5 * (t + 1.0) * tangent))
            mean += 0.5 * w * (gx * normal[0] + gy * normal[1])
        dofs[system.vertex_count + e] = system.orientation * mean
    return dofs


def certify_interp_constant(a: "Interval | float", b: "Interval | float", m: int, eps: float = DEFAULT_EPS) -> Interval:
    """Module-level shortcut for :meth:`MorleyCertifier.certify`."""
    return MorleyCertifier(m=m, eps=eps).certify(a, b)


class MorleyCertifier:
    """Certifies upper bounds of C(T) through the smallest Morley eigenvalue ρ₁ of (K⁰, M⁰)."""

    def __init__(self, m: int = 32, eps: float = DEFAULT_EPS, log_level: int = logging.INFO, console: Optional[Console] = None) -> None:
        """
        Args:
            m (int): Segments per side of the refined triangle, at least 2.
            eps (float): Margin subtracted from the floating ρ̄ before the SPD check.
            log_level (int): Logging level for the logger.
            console (Console, optional): Console the logger renders to.
        """
        self.console = console or Console(stderr=True)
        self.logger = get_logger("MorleyCertifier", log_level)
        if m < 2:
            self.logger.error(f"Unknown subdivision count m={m!r}, must be >= 2")
            raise ValueError(f"Unknown subdivision count m={m!r}, must be >= 2")
        if not eps > 0.0:
            self.logger.error(f"Unknown margin eps={eps!r}, must be positive")
            raise ValueError(f"Unknown margin eps={eps!r}, must be positive")
        self.m = m
        self.eps = eps

    def certify(self, a: "Interval | float", b: "Interval | float") -> Interval:
        """
        Certified ``[0, bound]`` with C(T) ≤ √(m²/(m²−1)) / √(ρ̄ − ε).

        Raises:
            CertificationError: If K⁰ − (ρ̄ − ε)M⁰ could not be proven positive definite.
        """
        system = morley_assemble(a, b, self.m)
        K0, M0 = system.Kxx0, system.Mxx0
        self.logger.info(f"Morley system on (a, b) = ({system.a.mid:.6f}, {system.b.mid:.6f}) with {K0.shape[0]} dofs")
        values, _ = fp_eigs(K0, M0, count=1)
        rho_bar = float(values[0])
        shift = add_down(rho_bar, -self.eps)
        if not shift > 0.0:
            raise CertificationError(f"Shifted eigenvalue {shift!r} is not positive, a lower bound was not found", stage="morley")
        spd = cholesky_spd_check(K0.combine(M0, Interval.point(-shift)))
        self.logger.debug(kv(rho_bar=rho_bar, shift=shift, spd=spd))
        if not spd:
            self.logger.warning("SPD check failed, a lower bound was not found")
            raise CertificationError("K0 - (rho - eps) M0 is not certified positive definite, a lower bound was not found", stage="morley")
        m2 = self.m * self.m
        bound = iv_sqrt(Interval.from_fraction(Fraction(m2, m2 - 1))) / iv_sqrt(Interval.point(shift))
        self.logger.info(f"Certified C(T) <= {bound.hi:.6f} (rho >= {shift:.8f})")
        return Interval(0.0, bound.hi)

    def certify_polygon(self, n: int) -> Interval:
        """Bound for the slice triangle of the regular n-gon: (a, b) = (cos 2π/n, sin 2π/n)."""
        if n < 3:
            raise ValueError(f"Unknown polygon size n={n!r}, must be >= 3")
        sin_t, cos_t = sincos_pi(2, n)
        return self.certify(cos_t, sin_t)
