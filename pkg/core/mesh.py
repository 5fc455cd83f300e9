"""
Dihedrally symmetric triangulation of the regular n-gon inscribed in the unit circle.

The polygon is cut into n slices T_j = (o, a_j, a_{j+1}). Each slice carries the lattice
(r, c), 0 <= c <= r <= m, with node (r, c) at h·((r − c)·a_j + c·a_{j+1}) and h = 1/m.
Node (r, 0) lies on the ray S_j, node (r, r) on S_{j+1} and row r = m on the polygon boundary.

Full-mesh numbering: the center is node 0, then slice j owns its nodes with c < r in row-major
order, 1 + j·m(m+1)/2 + r(r−1)/2 + c. Node (r, r) of slice j is node (r, 0) of slice j+1, so
rotations are modular arithmetic on the slice index.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Union

import numpy as np

from core.constants import sincos_pi
from core.interval import Interval, IntervalVector

UP = 0
DOWN = 1


def slice_node_count(m: int) -> int:
    return (m + 1) * (m + 2) // 2


def full_node_count(n: int, m: int) -> int:
    return 1 + n * m * (m + 1) // 2


def slice_index(r, c):
    """Row-major index of lattice node (r, c) inside a slice."""
    return r * (r + 1) // 2 + c


def _check_sizes(n: int, m: int) -> None:
    if n < 5:
        raise ValueError(f"Unknown polygon size n={n!r}, must be >= 5")
    if m < 1:
        raise ValueError(f"Unknown subdivision m={m!r}, must be >= 1")


@dataclass(frozen=True)
class SliceMesh:
    """Lattice triangulation of one slice."""

    n: int
    m: int
    nodes: np.ndarray  # (count, 2) lattice coordinates (r, c)
    triangles: np.ndarray  # (m², 3) node indices, ordered as the reference vertices (i, j, k)
    orientation: np.ndarray  # UP or DOWN per triangle
    boundary_mask: np.ndarray

    @property
    def apex(self) -> int:
        return 0

    @property
    def on_first_ray(self) -> np.ndarray:
        return self.nodes[:, 1] == 0

    @property
    def on_second_ray(self) -> np.ndarray:
        return self.nodes[:, 1] == self.nodes[:, 0]


def build_slice_mesh(n: int, m: int) -> SliceMesh:
    """
    Build the lattice triangulation of the slice (o, a_0, a_1).

    Args:
        n (int): Number of polygon vertices.
        m (int): Subdivisions per ray.

    Returns:
        SliceMesh: Slice with (m+1)(m+2)/2 nodes and m² triangles; the apex is node 0.
    """
    _check_sizes(n, m)
    rows = np.concatenate([np.full(r + 1, r) for r in range(m + 1)])
    cols = np.concatenate([np.arange(r + 1) for r in range(m + 1)])
    nodes = np.column_stack([rows, cols]).astype(np.int64)

    up_r = np.concatenate([np.full(r + 1, r) for r in range(m)])
    up_c = np.concatenate([np.arange(r + 1) for r in range(m)])
    up = np.column_stack([slice_index(up_r, up_c), slice_index(up_r + 1, up_c), slice_index(up_r + 1, up_c + 1)])

    if m > 1:
        dn_r = np.concatenate([np.full(r, r) for r in range(1, m)])
        dn_c = np.concatenate([np.arange(r) for r in range(1, m)])
        down = np.column_stack(
            [slice_index(dn_r + 1, dn_c + 1), slice_index(dn_r, dn_c + 1), slice_index(dn_r, dn_c)]
        )
    else:
        down = np.zeros((0, 3), dtype=np.int64)

    triangles = np.vstack([up, down]).astype(np.int64)
    orientation = np.concatenate([np.full(len(up), UP), np.full(len(down), DOWN)])
    return SliceMesh(n=n, m=m, nodes=nodes, triangles=triangles, orientation=orientation, boundary_mask=rows == m)


def full_index(n: int, m: int, j, r, c):
    """Full-mesh index of slice-j lattice node (r, c) (vectorized)."""
    j, r, c = np.broadcast_arrays(np.asarray(j), np.asarray(r), np.asarray(c))
    j = np.where(c == r, (j + 1) % n, j % n)
    c = np.where(c == r, 0, c)
    idx = 1 + j * (m * (m + 1) // 2) + r * (r - 1) // 2 + c
    return np.where(r == 0, 0, idx)


@dataclass(frozen=True)
class SymmetricMesh:
    """Full triangulation of the regular n-gon, assembled from n rotated slices."""

    n: int
    m: int
    slice_mesh: SliceMesh
    nodes: np.ndarray  # (N, 3) owner coordinates (slice, r, c)
    triangles: np.ndarray  # (n·m², 3)
    orientation: np.ndarray
    slice_label: np.ndarray
    boundary_mask: np.ndarray
    interior_nodes: np.ndarray = field(repr=False)
    interior_index: np.ndarray = field(repr=False)  # full index → row of K₀, −1 on the boundary

    @property
    def node_count(self) -> int:
        return self.nodes.shape[0]

    @property
    def dof(self) -> int:
        return self.interior_nodes.shape[0]

    @property
    def h(self) -> Interval:
        return Interval.from_fraction(Fraction(1, self.m))

    def slice_node_map(self, j: int) -> np.ndarray:
        """Full index of every slice-lattice node, seen from slice j."""
        sm = self.slice_mesh
        return full_index(self.n, self.m, j, sm.nodes[:, 0], sm.nodes[:, 1])

    def edges(self) -> np.ndarray:
        pairs = np.vstack([self.triangles[:, [0, 1]], self.triangles[:, [1, 2]], self.triangles[:, [2, 0]]])
        return np.unique(np.sort(pairs, axis=1), axis=0)


def build_full_mesh(n: int, m: int) -> SymmetricMesh:
    """
    Build the symmetric mesh of the regular n-gon.

    Args:
        n (int): Number of polygon vertices.
        m (int): Subdivisions per ray.

    Returns:
        SymmetricMesh: Mesh with 1 + n·m(m+1)/2 nodes and n·m² triangles, slice-major.
    """
    sm = build_slice_mesh(n, m)
    count = full_node_count(n, m)
    nodes = np.zeros((count, 3), dtype=np.int64)
    owned = ~sm.on_second_ray
    owned_rc = sm.nodes[owned]
    for j in range(n):
        idx = full_index(n, m, j, owned_rc[:, 0], owned_rc[:, 1])
        nodes[idx, 0] = j
        nodes[idx, 1:] = owned_rc

    slice_maps = [full_index(n, m, j, sm.nodes[:, 0], sm.nodes[:, 1]) for j in range(n)]
    triangles = np.vstack([slice_maps[j][sm.triangles] for j in range(n)])
    orientation = np.tile(sm.orientation, n)
    slice_label = np.repeat(np.arange(n), m * m)

    boundary_mask = nodes[:, 1] == m
    interior_nodes = np.flatnonzero(~boundary_mask)
    interior_index = np.full(count, -1, dtype=np.int64)
    interior_index[interior_nodes] = np.arange(interior_nodes.shape[0])
    return SymmetricMesh(
        n=n,
        m=m,
        slice_mesh=sm,
        nodes=nodes,
        triangles=triangles,
        orientation=orientation,
        slice_label=slice_label,
        boundary_mask=boundary_mask,
        interior_nodes=interior_nodes,
        interior_index=interior_index,
    )


def slice_interior_nodes(mesh: Union[SliceMesh, SymmetricMesh]) -> np.ndarray:
    """Slice-lattice nodes off the polygon boundary (rays kept): m(m+1)/2 of them."""
    sm = mesh.slice_mesh if isinstance(mesh, SymmetricMesh) else mesh
    return np.flatnonzero(~sm.boundary_mask)


Values = Union[IntervalVector, np.ndarray]


def extend_slice_to_full(mesh: SymmetricMesh, slice_values: Values) -> Values:
    """
    Extend slice-lattice values to the full mesh by rotation.

    Every full node takes the value of its owner coordinates (r, c), c < r. For inputs that are
    symmetric about the slice bisector the result is invariant under the whole dihedral group.

    Args:
        mesh (SymmetricMesh): Target mesh.
        slice_values: Values on the slice lattice, IntervalVector or float array.

    Returns:
        Same type as ``slice_values``, one entry per full-mesh node.
    """
    expected = slice_node_count(mesh.m)
    if len(slice_values) != expected:
        raise ValueError(f"Unknown slice vector length {len(slice_values)!r}, must be {expected}")
    source = slice_index(mesh.nodes[:, 1], mesh.nodes[:, 2])
    if isinstance(slice_values, IntervalVector):
        return slice_values.take(source)
    return np.asarray(slice_values)[source]


def rotation_permutation(mesh: SymmetricMesh, k: int) -> np.ndarray:
    """
    Node permutation of the rotation by k·θ.

    Args:
        mesh (SymmetricMesh): The mesh.
        k (int): Rotation step, 0 <= k < n.

    Returns:
        np.ndarray: ``perm[i]`` is the image of node i.
    """
    if not 0 <= k < mesh.n:
        raise ValueError(f"Unknown rotation step k={k!r}, must be in [0, {mesh.n})")
    j, r, c = mesh.nodes.T
    return full_index(mesh.n, mesh.m, (j + k) % mesh.n, r, c)


def reflection_permutation(mesh: SymmetricMesh) -> np.ndarray:
    """Node permutation of the reflection y ↦ −y: (j, r, c) ↦ (n−1−j, r, r−c)."""
    j, r, c = mesh.nodes.T
    return full_index(mesh.n, mesh.m, mesh.n - 1 - j, r, r - c)


def interior_permutation(mesh: SymmetricMesh, perm: np.ndarray) -> np.ndarray:
    """Restrict a node permutation to interior rows: ``out[i]`` is the image row of row i."""
    return mesh.interior_index[perm[mesh.interior_nodes]]


def node_coordinates(mesh: SymmetricMesh) -> tuple[IntervalVector, IntervalVector]:
    """Interval enclosures of all node coordinates."""
    x_lo = np.zeros(mesh.node_count)
    x_hi = np.zeros(mesh.node_count)
    y_lo = np.zeros(mesh.node_count)
    y_hi = np.zeros(mesh.node_count)
    m = mesh.m
    for j in range(mesh.n):
        owned = np.flatnonzero((mesh.nodes[:, 0] == j) & (mesh.nodes[:, 1] > 0))
        r, c = mesh.nodes[owned, 1], mesh.nodes[owned, 2]
        sin_a, cos_a = sincos_pi(2 * j, mesh.n)
        sin_b, cos_b = sincos_pi(2 * (j + 1), mesh.n)
        first = IntervalVector.from_intervals(Interval.from_fraction(Fraction(int(v), m)) for v in r - c)
        second = IntervalVector.from_intervals(Interval.from_fraction(Fraction(int(v), m)) for v in c)
        x = first * cos_a + second * cos_b
        y = first * sin_a + second * sin_b
        x_lo[owned], x_hi[owned] = x.lo, x.hi
        y_lo[owned], y_hi[owned] = y.lo, y.hi
    return IntervalVector(x_lo, x_hi), IntervalVector(y_lo, y_hi)


def export_csv(mesh: SymmetricMesh, path: Union[str, Path]) -> tuple[Path, Path]:
    """
    Write ``<stem>_nodes.csv`` (index, x, y, boundary) and ``<stem>_triangles.csv``.

    Args:
        mesh (SymmetricMesh): Mesh to export.
        path (str | Path): Base path; the suffix is ignored.

    Returns:
        tuple[Path, Path]: The two written files.
    """
    base = Path(path)
    nodes_path = base.with_name(f"{base.stem}_nodes.csv")
    tris_path = base.with_name(f"{base.stem}_triangles.csv")
    x, y = node_coordinates(mesh)
    xm, ym = x.mid(), y.mid()
    with nodes_path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["index", "x", "y", "boundary"])
        for i in range(mesh.node_count):
            writer.writerow([i, repr(float(xm[i])), repr(float(ym[i])), int(mesh.boundary_mask[i])])
    with tris_path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["v0", "v1", "v2", "slice"])
        for tri, label in zip(mesh.triangles, mesh.slice_label):
            writer.writerow([int(tri[0]), int(tri[1]), int(tri[2]), int(label)])
    return nodes_path, tris_path
