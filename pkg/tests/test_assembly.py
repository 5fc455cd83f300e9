"""
Tests for core.assembly against the coordinate-based oracle in conftest.
"""
import math

import numpy as np
import pytest
import scipy.linalg as sla

from core.assembly import (
    assemble_rhs_material,
    assemble_slice_system,
    assemble_square_system,
    assemble_system,
    element_gradients,
    rhs_operators,
)
from core.constants import enclose_theta
from core.interval import Interval, IntervalVector
from core.mesh import build_full_mesh
from tests.conftest import oracle_assemble, oracle_eigs, oracle_element, oracle_pairing, oracle_rhs


def mid(A) -> np.ndarray:
    return A.mid_matrix().toarray()


@pytest.mark.parametrize("n,m", [(5, 2), (5, 3), (6, 4), (7, 5)])
def test_pencil_matches_oracle(n, m):
    mesh = build_full_mesh(n, m)
    system = assemble_system(mesh)
    oracle = oracle_assemble(mesh)
    np.testing.assert_allclose(mid(system.K0), oracle["K0"], atol=1e-12)
    np.testing.assert_allclose(mid(system.M0), oracle["M0"], atol=1e-12)
    # intervals stay narrow
    assert system.K0.rad_matrix().max() < 1e-13
    assert system.dof == mesh.dof


def test_full_stiffness_annihilates_constants():
    mesh = build_full_mesh(5, 3)
    system = assemble_system(mesh)
    assert system.K.matvec(np.ones(mesh.node_count)).contains(np.zeros(mesh.node_count))
    total = system.M.quadratic_form(np.ones(mesh.node_count))
    # ∫ 1 = polygon area (n/2)·sin θ
    assert total.mid == pytest.approx(2.5 * math.sin(2 * math.pi / 5), abs=1e-13)


def test_mass_lower_bound(pentagon_small):
    system = pentagon_small["system"]
    smallest = np.linalg.eigvalsh(pentagon_small["oracle"]["M0"])[0]
    assert 0.0 < system.mass_lower <= smallest


def test_slice_pencil_shares_first_eigenvalue(pentagon_small):
    mesh = pentagon_small["mesh"]
    slice_system = assemble_slice_system(mesh)
    assert slice_system.dof == mesh.m * (mesh.m + 1) // 2
    values = sla.eigh(mid(slice_system.K), mid(slice_system.M), eigvals_only=True)
    full, _ = oracle_eigs(pentagon_small["oracle"], 1)
    assert values[0] == pytest.approx(full[0], rel=1e-10)
    padded = slice_system.to_lattice(np.ones(slice_system.dof))
    assert padded.shape[0] == (mesh.m + 1) * (mesh.m + 2) // 2
    assert padded.sum() == slice_system.dof


def test_partial_blocks_match_oracle(pentagon_small):
    blocks, oracle = pentagon_small["blocks"], pentagon_small["oracle"]
    n = pentagon_small["mesh"].n
    plus, minus = oracle["pairs"][0], oracle["pairs"][n - 1]
    np.testing.assert_allclose(mid(blocks.Kxx), plus["xx"] + minus["xx"], atol=1e-12)
    np.testing.assert_allclose(mid(blocks.Kyy), plus["yy"] - minus["yy"], atol=1e-12)
    np.testing.assert_allclose(mid(blocks.Kxy_plus), plus["xy"] + plus["yx"], atol=1e-12)
    np.testing.assert_allclose(mid(blocks.Kxy_minus), minus["xy"] + minus["yx"], atol=1e-12)
    for key, matrix in blocks.per_slice(2).items():
        np.testing.assert_allclose(mid(matrix), oracle["pairs"][2][key], atol=1e-12)


def test_pairing_matches_oracle(pentagon_small):
    blocks, oracle = pentagon_small["blocks"], pentagon_small["oracle"]
    rng = np.random.default_rng(11)
    dof = pentagon_small["mesh"].dof
    u, U = rng.normal(size=dof), rng.normal(size=dof)
    for j in range(pentagon_small["mesh"].n):
        box = blocks.pairing(j, u, U)
        expected = oracle_pairing(oracle, j, u, U)
        for a in range(2):
            for b in range(2):
                assert abs(box[a][b].mid - expected[a, b]) < 1e-11
        # |u|²_{H¹(T_j)} = tr ∫ ∇u ∇u
        seminorm = math.sqrt(oracle_pairing(oracle, j, u, u).trace())
        assert seminorm <= blocks.seminorm_upper(j, u) + 1e-12
    assert blocks.slice_stiffness_bound > 0.0


def test_material_rhs_matches_oracle(pentagon_small):
    system, blocks, oracle = pentagon_small["system"], pentagon_small["blocks"], pentagon_small["oracle"]
    values, vectors = oracle_eigs(oracle, 1)
    u, lam = vectors[:, 0], float(values[0])
    f1, f2 = assemble_rhs_material(system, blocks, u, Interval(lam, lam))
    g1, g2 = oracle_rhs(oracle, 5, u, lam)
    np.testing.assert_allclose(f1.mid(), g1, atol=1e-10)
    np.testing.assert_allclose(f2.mid(), g2, atol=1e-10)
    F1, F2 = rhs_operators(system, blocks, Interval(lam, lam))
    assert F1.matvec(u).overlaps(f1) and F2.matvec(u).overlaps(f2)
    boxed = IntervalVector.from_midrad(u, 1e-12)
    h1, _ = assemble_rhs_material(system, blocks, boxed, Interval(lam, lam))
    assert h1.contains(f1.mid())
    with pytest.raises(ValueError):
        assemble_rhs_material(system, blocks, u[:-1], Interval(lam, lam))


def test_square_system():
    square = assemble_square_system(6)
    assert square.dof == 25
    lam = sla.eigh(mid(square.K0), mid(square.M0), eigvals_only=True)
    # P1 eigenvalues approach 2π² from above
    assert 2 * math.pi**2 < lam[0] < 2 * math.pi**2 * 1.2
    with pytest.raises(ValueError):
        assemble_square_system(1)


def test_system_rejects_mismatched_trig():
    with pytest.raises(ValueError):
        assemble_system(build_full_mesh(5, 2), enclose_theta(6))


@pytest.mark.parametrize("n", [5, 6, 7])
def test_reference_gradients_match_oracle(n):
    grads = element_gradients(enclose_theta(n))
    theta = 2 * math.pi / n
    p = np.array([[0.0, 0.0], [1.0, 0.0], [math.cos(theta), math.sin(theta)]])
    _, _, expected = oracle_element(p)
    for (gx, gy), (ex, ey) in zip(grads, expected):
        assert gx.contains(float(ex)) or abs(gx.mid - ex) < 1e-14
        assert gy.contains(float(ey)) or abs(gy.mid - ey) < 1e-14
    # barycentric gradients sum to zero
    assert sum((g[0] for g in grads), Interval(0.0, 0.0)).contains(0.0)
    assert sum((g[1] for g in grads), Interval(0.0, 0.0)).contains(0.0)
