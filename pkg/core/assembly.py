"""
Interval assembly of the P1 stiffness and mass matrices of the symmetric n-gon mesh.

All element contributions come from closed-form 3x3 blocks in θ; coordinates are never used.
Every triangle of the symmetric mesh is a homothety of the reference slice triangle (factor h),
upward or point-reflected, so one block per derivative pairing suffices for the whole mesh.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

import numpy as np

from core.constants import ThetaEnclosure, enclose_theta
from core.interval import Interval, IntervalVector, SparseIntervalMatrix
from core.mesh import SymmetricMesh, slice_interior_nodes

Gradient = tuple[Interval, Interval]
Vector = Union[IntervalVector, np.ndarray]
PAIRINGS = ("xx", "xy", "yx", "yy")


def element_gradients(trig: ThetaEnclosure) -> list[Gradient]:
    """
    Gradients (times h) of the P1 basis on the reference slice triangle (0,0), (1,0), (cos θ, sin θ).

    Args:
        trig (ThetaEnclosure): Trig enclosures of θ.

    Returns:
        list[Gradient]: (∂x, ∂y) of ψ_i, ψ_j, ψ_k.
    """
    one = Interval(1.0, 1.0)
    zero = Interval(0.0, 0.0)
    return [
        (-one, -trig.tan_half_t),
        (one, -trig.cot_t),
        (zero, one / trig.sin_t),
    ]


def rotate_gradients(grads: list[Gradient], sin_a: Interval, cos_a: Interval) -> list[Gradient]:
    """Apply the rotation by angle a to each gradient."""
    return [(cos_a * gx - sin_a * gy, sin_a * gx + cos_a * gy) for gx, gy in grads]


def pairing_block(grads: list[Gradient], weight: Interval, a: int, b: int) -> tuple[np.ndarray, np.ndarray]:
    """Endpoints of weight·(g_p)_a·(g_q)_b for p, q in 0..2."""
    lo = np.zeros((3, 3))
    hi = np.zeros((3, 3))
    for p in range(3):
        for q in range(3):
            v = weight * grads[p][a] * grads[q][b]
            lo[p, q], hi[p, q] = v.lo, v.hi
    return lo, hi


def _sum_blocks(*blocks: tuple[np.ndarray, np.ndarray]) -> tuple[np.ndarray, np.ndarray]:
    lo = np.zeros((3, 3))
    hi = np.zeros((3, 3))
    for p in range(3):
        for q in range(3):
            v = Interval(0.0, 0.0)
            for sign, (blo, bhi) in blocks:
                term = Interval(blo[p, q], bhi[p, q])
                v = v + term if sign > 0 else v - term
            lo[p, q], hi[p, q] = v.lo, v.hi
    return lo, hi


def stiffness_block(grads: list[Gradient], weight: Interval) -> tuple[np.ndarray, np.ndarray]:
    return _sum_blocks((1, pairing_block(grads, weight, 0, 0)), (1, pairing_block(grads, weight, 1, 1)))


def mass_block(area: Interval) -> tuple[np.ndarray, np.ndarray]:
    diag = area / 6
    off = area / 12
    lo = np.full((3, 3), off.lo)
    hi = np.full((3, 3), off.hi)
    np.fill_diagonal(lo, diag.lo)
    np.fill_diagonal(hi, diag.hi)
    return lo, hi


def assemble_block(triangles: np.ndarray, block: tuple[np.ndarray, np.ndarray], size: int) -> SparseIntervalMatrix:
    """
    Accumulate one 3x3 interval block over every triangle.

    Args:
        triangles (np.ndarray): (T, 3) node indices in reference vertex order.
        block: Lower and upper 3x3 endpoint arrays.
        size (int): Number of nodes.

    Returns:
        SparseIntervalMatrix: The assembled matrix.
    """
    lo, hi = block
    rows = np.repeat(triangles, 3, axis=1).reshape(-1)
    cols = np.tile(triangles, (1, 3)).reshape(-1)
    count = triangles.shape[0]
    return SparseIntervalMatrix.from_triplets(
        rows, cols, np.tile(lo.reshape(-1), count), np.tile(hi.reshape(-1), count), (size, size)
    )


def _restrict_interior(matrix: SparseIntervalMatrix, mesh: SymmetricMesh) -> SparseIntervalMatrix:
    return matrix.restrict(mesh.interior_nodes)


@dataclass
class AssembledSystem:
    """Interior stiffness and mass matrices of the symmetric mesh."""

    n: int
    m: int
    K0: SparseIntervalMatrix
    M0: SparseIntervalMatrix
    area_h: Interval
    dof: int
    mesh: Optional[SymmetricMesh] = field(default=None, repr=False)
    trig: Optional[ThetaEnclosure] = field(default=None, repr=False)
    K: Optional[SparseIntervalMatrix] = field(default=None, repr=False)
    M: Optional[SparseIntervalMatrix] = field(default=None, repr=False)

    @property
    def mass_lower(self) -> float:
        """Lower bound of λ_min(M₀): min{n, 6}·A_h/12."""
        return (self.area_h * min(self.n, 6) / 12).lo


def element_area(trig: ThetaEnclosure, m: int) -> Interval:
    """A_h = ½h² sin θ with h = 1/m."""
    return trig.sin_t * Fraction(1, 2 * m * m)


def assemble_system(mesh: SymmetricMesh, trig: Optional[ThetaEnclosure] = None) -> AssembledSystem:
    """
    Assemble K₀ and M₀ on the interior nodes.

    Args:
        mesh (SymmetricMesh): Symmetric mesh of the n-gon.
        trig (ThetaEnclosure, optional): Trig record; computed from mesh.n if omitted.

    Returns:
        AssembledSystem: Interval stiffness and mass matrices.
    """
    trig = trig or enclose_theta(mesh.n)
    if trig.n != mesh.n:
        raise ValueError(f"Unknown trig record for n={trig.n!r}, must match mesh n={mesh.n}")
    grads = element_gradients(trig)
    weight = trig.sin_t / 2
    area = element_area(trig, mesh.m)
    K = assemble_block(mesh.triangles, stiffness_block(grads, weight), mesh.node_count)
    M = assemble_block(mesh.triangles, mass_block(area), mesh.node_count)
    return AssembledSystem(
        n=mesh.n,
        m=mesh.m,
        K0=_restrict_interior(K, mesh),
        M0=_restrict_interior(M, mesh),
        area_h=area,
        dof=mesh.dof,
        mesh=mesh,
        trig=trig,
        K=K,
        M=M,
    )


@dataclass
class SliceSystem:
    """Pencil of one slice with natural conditions on both rays (nodes with r < m)."""

    n: int
    m: int
    K: SparseIntervalMatrix
    M: SparseIntervalMatrix
    nodes: np.ndarray  # slice-lattice indices of the unknowns

    @property
    def dof(self) -> int:
        return self.nodes.shape[0]

    @property
    def mass_lower(self) -> float:
        return 0.5 * float(self.M.diagonal().lo.min())

    def to_lattice(self, values: Vector) -> Vector:
        """Pad the boundary row of the slice lattice with zeros."""
        size = (self.m + 1) * (self.m + 2) // 2
        if isinstance(values, IntervalVector):
            lo = np.zeros(size)
            hi = np.zeros(size)
            lo[self.nodes], hi[self.nodes] = values.lo, values.hi
            return IntervalVector(lo, hi)
        out = np.zeros(size)
        out[self.nodes] = values
        return out


def assemble_slice_system(mesh: SymmetricMesh, trig: Optional[ThetaEnclosure] = None) -> SliceSystem:
    """Slice-0 stiffness and mass restricted to the lattice nodes off the polygon boundary."""
    trig = trig or enclose_theta(mesh.n)
    sm = mesh.slice_mesh
    size = sm.nodes.shape[0]
    grads = element_gradients(trig)
    K = assemble_block(sm.triangles, stiffness_block(grads, trig.sin_t / 2), size)
    M = assemble_block(sm.triangles, mass_block(element_area(trig, mesh.m)), size)
    nodes = slice_interior_nodes(sm)
    return SliceSystem(n=mesh.n, m=mesh.m, K=K.restrict(nodes), M=M.restrict(nodes), nodes=nodes)


def assemble_square_system(m: int) -> AssembledSystem:
    """
    P1 pencil of the unit square on a uniform mesh of 2m² right triangles.

    Each cell [x, x+h]×[y, y+h] is split along its anti-diagonal into (x,y),(x+h,y),(x,y+h) and
    the point-reflected (x+h,y+h),(x,y+h),(x+h,y).
    """
    if m < 2:
        raise ValueError(f"Unknown subdivision m={m!r}, must be >= 2")
    idx = np.arange((m + 1) ** 2).reshape(m + 1, m + 1)  # idx[row y, col x]
    x, y = np.meshgrid(np.arange(m), np.arange(m), indexing="xy")
    x, y = x.reshape(-1), y.reshape(-1)
    lower = np.column_stack([idx[y, x], idx[y, x + 1], idx[y + 1, x]])
    upper = np.column_stack([idx[y + 1, x + 1], idx[y + 1, x], idx[y, x + 1]])
    triangles = np.vstack([lower, upper])
    one = Interval(1.0, 1.0)
    zero = Interval(0.0, 0.0)
    grads = [(-one, -one), (one, zero), (zero, one)]
    area = Interval.from_fraction(Fraction(1, 2 * m * m))
    size = (m + 1) ** 2
    K = assemble_block(triangles, stiffness_block(grads, Interval(0.5, 0.5)), size)
    M = assemble_block(triangles, mass_block(area), size)
    row, col = np.divmod(np.arange(size), m + 1)
    interior = np.flatnonzero((row > 0) & (row < m) & (col > 0) & (col < m))
    return AssembledSystem(n=4, m=m, K0=K.restrict(interior), M0=M.restrict(interior), area_h=area, dof=interior.shape[0], K=K, M=M)


# ---------------------------------------------------------------------------
# partial stiffness blocks
# ---------------------------------------------------------------------------


@dataclass
class PartialBlocks:
    """
    Partial stiffness matrices on T₊ ∪ T₋ and the per-slice derivative pairings.

    ``reference`` holds the slice-0 pairing matrices on the slice lattice; slice j follows from
    them by the node map of slice j and the rotation by jθ of the derivative directions.
    """

    n: int
    Kxx: SparseIntervalMatrix
    Kyy: SparseIntervalMatrix
    Kxy_plus: SparseIntervalMatrix
    Kxy_minus: SparseIntervalMatrix
    reference: dict[str, SparseIntervalMatrix]
    rotations: list[tuple[Interval, Interval]]
    slice_rows: list[np.ndarray]  # per slice: interior row of each lattice node, −1 on the boundary
    mesh: SymmetricMesh = field(repr=False)
    trig: ThetaEnclosure = field(repr=False)

    def local(self, j: int, values: Vector) -> Vector:
        """Slice-j lattice values of an interior vector (zero on the boundary)."""
        rows = self.slice_rows[j]
        inside = rows >= 0
        if isinstance(values, IntervalVector):
            lo = np.zeros(rows.shape[0])
            hi = np.zeros(rows.shape[0])
            lo[inside], hi[inside] = values.lo[rows[inside]], values.hi[rows[inside]]
            return IntervalVector(lo, hi)
        out = np.zeros(rows.shape[0])
        out[inside] = np.asarray(values)[rows[inside]]
        return out

    def _rotate(self, j: int, base: dict[str, Interval]) -> list[list[Interval]]:
        sin_a, cos_a = self.rotations[j]
        R = [[cos_a, -sin_a], [sin_a, cos_a]]
        I0 = [[base["xx"], base["xy"]], [base["yx"], base["yy"]]]
        out = [[Interval(0.0, 0.0)] * 2 for _ in range(2)]
        for a in range(2):
            for b in range(2):
                acc = Interval(0.0, 0.0)
                for c in range(2):
                    for d in range(2):
                        acc = acc + R[a][c] * R[b][d] * I0[c][d]
                out[a][b] = acc
        return out

    def pairing(self, j: int, u: Vector, U: Vector) -> list[list[Interval]]:
        """
        Enclose ∫_{T_j} ∂_a u ∂_b U for a, b ∈ {x, y}.

        Args:
            j (int): Slice index.
            u, U: Interior vectors (IntervalVector or float arrays).

        Returns:
            list[list[Interval]]: 2x2 matrix indexed [a][b].
        """
        ul, Ul = self.local(j, u), self.local(j, U)
        base = {key: self.reference[key].quadratic_form(ul, Ul) for key in PAIRINGS}
        return self._rotate(j, base)

    def seminorm_upper(self, j: int, x: Vector) -> float:
        """Upper bound of |x|_{H¹(T_j)}."""
        xl = self.local(j, x)
        stiff = self.reference["stiff"]
        value = stiff.quadratic_form(xl)
        return Interval(max(value.lo, 0.0), max(value.hi, 0.0)).sqrt().hi

    @property
    def slice_stiffness_bound(self) -> float:
        """Upper bound of the largest eigenvalue of the slice stiffness matrix."""
        return self.reference["stiff"].gershgorin_upper()

    def per_slice(self, j: int) -> dict[str, SparseIntervalMatrix]:
        """The four pairing matrices of slice j on interior rows, assembled from rotated gradients."""
        sin_a, cos_a = self.rotations[j]
        grads = rotate_gradients(element_gradients(self.trig), sin_a, cos_a)
        weight = self.trig.sin_t / 2
        m2 = self.mesh.m * self.mesh.m
        triangles = self.mesh.triangles[j * m2 : (j + 1) * m2]
        out = {}
        for key in PAIRINGS:
            a, b = "xy".index(key[0]), "xy".index(key[1])
            full = assemble_block(triangles, pairing_block(grads, weight, a, b), self.mesh.node_count)
            out[key] = _restrict_interior(full, self.mesh)
        return out


def _slice_triangles(mesh: SymmetricMesh, j: int) -> np.ndarray:
    m2 = mesh.m * mesh.m
    return mesh.triangles[j * m2 : (j + 1) * m2]


def assemble_partials(mesh: SymmetricMesh, trig: Optional[ThetaEnclosure] = None) -> PartialBlocks:
    """
    Assemble K_xx, K_yy, K_xy^± on T₊ = T_0, T₋ = T_{n−1} and the slice-lattice pairing matrices.

    Args:
        mesh (SymmetricMesh): Symmetric mesh.
        trig (ThetaEnclosure, optional): Trig record; computed from mesh.n if omitted.

    Returns:
        PartialBlocks: Partial stiffness matrices on interior rows plus per-slice data.
    """
    trig = trig or enclose_theta(mesh.n)
    n = mesh.n
    weight = trig.sin_t / 2
    grads0 = element_gradients(trig)
    rotations = [trig.angle(j) for j in range(n)]
    grads_minus = rotate_gradients(grads0, *rotations[n - 1])
    size = mesh.node_count
    plus_tris = _slice_triangles(mesh, 0)
    minus_tris = _slice_triangles(mesh, n - 1)

    def blocks(grads):
        return {key: pairing_block(grads, weight, "xy".index(key[0]), "xy".index(key[1])) for key in PAIRINGS}

    bp, bm = blocks(grads0), blocks(grads_minus)
    Kxx = _sum_blocks_over(
        [(plus_tris, _sum_blocks((1, bp["xx"]))), (minus_tris, _sum_blocks((1, bm["xx"])))], size
    )
    Kyy = _sum_blocks_over(
        [(plus_tris, _sum_blocks((1, bp["yy"]))), (minus_tris, _sum_blocks((-1, bm["yy"])))], size
    )
    Kxy_plus = assemble_block(plus_tris, _sum_blocks((1, bp["xy"]), (1, bp["yx"])), size)
    Kxy_minus = assemble_block(minus_tris, _sum_blocks((1, bm["xy"]), (1, bm["yx"])), size)

    sm = mesh.slice_mesh
    lattice = sm.nodes.shape[0]
    reference = {key: assemble_block(sm.triangles, bp[key], lattice) for key in PAIRINGS}
    reference["stiff"] = assemble_block(sm.triangles, stiffness_block(grads0, weight), lattice)
    slice_rows = [mesh.interior_index[mesh.slice_node_map(j)] for j in range(n)]
    return PartialBlocks(
        n=n,
        Kxx=_restrict_interior(Kxx, mesh),
        Kyy=_restrict_interior(Kyy, mesh),
        Kxy_plus=_restrict_interior(Kxy_plus, mesh),
        Kxy_minus=_restrict_interior(Kxy_minus, mesh),
        reference=reference,
        rotations=rotations,
        slice_rows=slice_rows,
        mesh=mesh,
        trig=trig,
    )


def _sum_blocks_over(parts: list[tuple[np.ndarray, tuple[np.ndarray, np.ndarray]]], size: int) -> SparseIntervalMatrix:
    rows, cols, lo, hi = [], [], [], []
    for triangles, (blo, bhi) in parts:
        rows.append(np.repeat(triangles, 3, axis=1).reshape(-1))
        cols.append(np.tile(triangles, (1, 3)).reshape(-1))
        lo.append(np.tile(blo.reshape(-1), triangles.shape[0]))
        hi.append(np.tile(bhi.reshape(-1), triangles.shape[0]))
    return SparseIntervalMatrix.from_triplets(
        np.concatenate(rows), np.concatenate(cols), np.concatenate(lo), np.concatenate(hi), (size, size)
    )


# ---------------------------------------------------------------------------
# right-hand sides of the material-derivative systems
# ---------------------------------------------------------------------------


def rhs_operators(sys: AssembledSystem, blocks: PartialBlocks, lam1: Interval) -> tuple[SparseIntervalMatrix, SparseIntervalMatrix]:
    """
    Matrices F₁, F₂ with f_i = F_i·u₁.

    F₁ = 2K_xx − cot θ (K_xy⁺ − K_xy⁻) − (2λ₁/n) M₀ and F₂ = −2 cot θ K_yy + K_xy⁺ + K_xy⁻.
    """
    cot = blocks.trig.cot_t
    F1 = blocks.Kxx.scaled(2).combine(blocks.Kxy_plus, -cot).combine(blocks.Kxy_minus, cot)
    F1 = F1.combine(sys.M0, -(lam1 * 2 / sys.n))
    F2 = blocks.Kyy.scaled(-(cot * 2)).combine(blocks.Kxy_plus, 1).combine(blocks.Kxy_minus, 1)
    return F1, F2


def assemble_rhs_material(
    sys: AssembledSystem, blocks: PartialBlocks, u1: Vector, lam1: Interval
) -> tuple[IntervalVector, IntervalVector]:
    """
    Right-hand sides of the discrete material-derivative systems.

    Args:
        sys (AssembledSystem): Interior pencil.
        blocks (PartialBlocks): Partial stiffness matrices.
        u1: First eigenvector enclosure (or a float candidate).
        lam1 (Interval): First eigenvalue enclosure.

    Returns:
        tuple[IntervalVector, IntervalVector]: (f1, f2).
    """
    if len(u1) != sys.dof:
        raise ValueError(f"Unknown eigenvector length {len(u1)!r}, must be {sys.dof}")
    cot = blocks.trig.cot_t
    Kxx_u = blocks.Kxx.matvec(u1)
    Kyy_u = blocks.Kyy.matvec(u1)
    plus_u = blocks.Kxy_plus.matvec(u1)
    minus_u = blocks.Kxy_minus.matvec(u1)
    M_u = sys.M0.matvec(u1)
    f1 = Kxx_u * 2.0 - (plus_u - minus_u) * cot - M_u * (lam1 * 2 / sys.n)
    f2 = Kyy_u * (-(cot * 2)) + (plus_u + minus_u)
    return f1, f2
