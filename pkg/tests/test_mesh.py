"""
Tests for core.mesh: node counts, dihedral permutations and the slice extension.
"""
import csv
import math

import numpy as np
import pytest

from core.mesh import (
    build_full_mesh,
    build_slice_mesh,
    export_csv,
    extend_slice_to_full,
    full_node_count,
    interior_permutation,
    node_coordinates,
    reflection_permutation,
    rotation_permutation,
    slice_interior_nodes,
    slice_node_count,
)
from tests.conftest import oracle_coordinates


def test_counts_match_reported_sizes():
    # full-size runs report these DoF counts
    assert full_node_count(5, 250) == 156876
    assert full_node_count(6, 380) == 1 + 6 * 380 * 381 // 2
    assert slice_node_count(4) == 15


@pytest.mark.parametrize("n,m", [(5, 1), (5, 4), (6, 3), (7, 5)])
def test_full_mesh_structure(n, m):
    mesh = build_full_mesh(n, m)
    assert mesh.node_count == full_node_count(n, m)
    assert mesh.triangles.shape == (n * m * m, 3)
    assert mesh.dof == mesh.node_count - n * m
    assert np.bincount(mesh.slice_label).tolist() == [m * m] * n
    # every interior edge is shared by two triangles, boundary edges by one
    assert mesh.edges().shape[0] == (3 * mesh.triangles.shape[0] + n * m) // 2
    assert mesh.interior_index[mesh.interior_nodes].tolist() == list(range(mesh.dof))


def test_slice_mesh():
    sm = build_slice_mesh(5, 3)
    assert sm.nodes.shape == (10, 2)
    assert sm.triangles.shape == (9, 3)
    assert sm.boundary_mask.sum() == 4
    assert sm.on_first_ray.sum() == sm.on_second_ray.sum() == 4
    assert slice_interior_nodes(sm).shape[0] == 6


def test_small_sizes_rejected():
    with pytest.raises(ValueError):
        build_full_mesh(4, 3)
    with pytest.raises(ValueError):
        build_full_mesh(5, 0)


def test_rotations_and_reflection_are_symmetries():
    mesh = build_full_mesh(6, 4)
    xy = oracle_coordinates(mesh)
    theta = 2 * math.pi / mesh.n
    for k in range(mesh.n):
        perm = rotation_permutation(mesh, k)
        assert np.array_equal(np.sort(perm), np.arange(mesh.node_count))
        c, s = math.cos(k * theta), math.sin(k * theta)
        rotated = xy @ np.array([[c, s], [-s, c]])
        np.testing.assert_allclose(xy[perm], rotated, atol=1e-12)
    refl = reflection_permutation(mesh)
    np.testing.assert_allclose(xy[refl], xy * np.array([1.0, -1.0]), atol=1e-12)
    assert np.array_equal(refl[refl], np.arange(mesh.node_count))
    with pytest.raises(ValueError):
        rotation_permutation(mesh, mesh.n)


def test_interior_permutation_stays_interior():
    mesh = build_full_mesh(5, 4)
    perm = interior_permutation(mesh, rotation_permutation(mesh, 2))
    assert np.array_equal(np.sort(perm), np.arange(mesh.dof))


def test_extension_is_rotation_invariant():
    mesh = build_full_mesh(5, 4)
    rng = np.random.default_rng(3)
    values = rng.normal(size=slice_node_count(4))
    full = extend_slice_to_full(mesh, values)
    assert full.shape == (mesh.node_count,)
    for k in range(mesh.n):
        assert np.array_equal(full[rotation_permutation(mesh, k)], full)
    with pytest.raises(ValueError):
        extend_slice_to_full(mesh, values[:-1])


def test_coordinates_enclose_float_positions():
    mesh = build_full_mesh(5, 3)
    x, y = node_coordinates(mesh)
    xy = oracle_coordinates(mesh)
    assert np.all(np.abs(x.mid() - xy[:, 0]) < 1e-14)
    assert np.all(np.abs(y.mid() - xy[:, 1]) < 1e-14)
    radius = np.hypot(x.mid(), y.mid())
    # boundary nodes lie on the polygon, inside the unit circle
    assert np.all(radius[mesh.boundary_mask] <= 1.0 + 1e-14)
    assert np.all(radius[mesh.boundary_mask] >= math.cos(math.pi / 5) - 1e-14)


def test_export_csv(tmp_path):
    mesh = build_full_mesh(5, 2)
    nodes_path, tris_path = export_csv(mesh, tmp_path / "pentagon.csv")
    with nodes_path.open() as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == mesh.node_count
    assert sum(int(r["boundary"]) for r in rows) == mesh.n * mesh.m
    with tris_path.open() as fh:
        assert len(fh.read().splitlines()) >= mesh.triangles.shape[0]
