"""
Shared fixtures and an independent coordinate-based P1 assembler used as a floating oracle.
"""
import math

import numpy as np
import pytest
import scipy.linalg as sla

from core.assembly import assemble_partials, assemble_system
from core.mesh import build_full_mesh


def oracle_coordinates(mesh) -> np.ndarray:
    """Float node coordinates from the owner coordinates (slice, r, c)."""
    n, m = mesh.n, mesh.m
    j, r, c = mesh.nodes.T
    a0 = 2 * math.pi * j / n
    a1 = 2 * math.pi * (j + 1) / n
    x = ((r - c) * np.cos(a0) + c * np.cos(a1)) / m
    y = ((r - c) * np.sin(a0) + c * np.sin(a1)) / m
    return np.column_stack([x, y])


def oracle_element(p: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """P1 stiffness, mass and barycentric gradients of one triangle from its coordinates."""
    B = np.column_stack([p[1] - p[0], p[2] - p[0]])
    area = abs(np.linalg.det(B)) / 2
    grads = np.array([[-1.0, -1.0], [1.0, 0.0], [0.0, 1.0]]) @ np.linalg.inv(B)
    K = area * grads @ grads.T
    M = area / 12 * (np.ones((3, 3)) + np.eye(3))
    return K, M, grads


def oracle_assemble(mesh) -> dict[str, np.ndarray]:
    """
    Dense K₀, M₀ and the per-slice pairing matrices ∫_{T_j} ∂_a ψ_p ∂_b ψ_q on interior rows.
    """
    xy = oracle_coordinates(mesh)
    N = mesh.node_count
    K = np.zeros((N, N))
    M = np.zeros((N, N))
    pairs = [{key: np.zeros((N, N)) for key in ("xx", "xy", "yx", "yy")} for _ in range(mesh.n)]
    for t, tri in enumerate(mesh.triangles):
        Ke, Me, grads = oracle_element(xy[tri])
        area = Me[0, 0] * 6
        K[np.ix_(tri, tri)] += Ke
        M[np.ix_(tri, tri)] += Me
        j = int(mesh.slice_label[t])
        for key in pairs[j]:
            a, b = "xy".index(key[0]), "xy".index(key[1])
            pairs[j][key][np.ix_(tri, tri)] += area * np.outer(grads[:, a], grads[:, b])
    inner = mesh.interior_nodes
    sub = np.ix_(inner, inner)
    return {
        "K0": K[sub],
        "M0": M[sub],
        "pairs": [{key: P[sub] for key, P in slice_pairs.items()} for slice_pairs in pairs],
        "coordinates": xy,
    }


def oracle_pairing(oracle: dict, j: int, u: np.ndarray, U: np.ndarray) -> np.ndarray:
    """2x2 float matrix ∫_{T_j} ∂_a u ∂_b U."""
    P = oracle["pairs"][j]
    return np.array([[u @ P["xx"] @ U, u @ P["xy"] @ U], [u @ P["yx"] @ U, u @ P["yy"] @ U]])


def oracle_eigs(oracle: dict, count: int = 3) -> tuple[np.ndarray, np.ndarray]:
    """Dense generalized eigenpairs, M-normalized, first eigenvector positive."""
    values, vectors = sla.eigh(oracle["K0"], oracle["M0"])
    vectors = vectors[:, :count]
    if vectors[:, 0].sum() < 0:
        vectors[:, 0] = -vectors[:, 0]
    return values[:count], vectors


def oracle_rhs(oracle: dict, n: int, u: np.ndarray, lam: float) -> tuple[np.ndarray, np.ndarray]:
    """
    f₁, f₂ from the slice pairings of the two slices adjacent to the vertex (1, 0).

    f₁ = 2K_xx u − cot θ (K_xy⁺ − K_xy⁻) u − (2λ/n) M u, f₂ = −2 cot θ K_yy u + (K_xy⁺ + K_xy⁻) u,
    with K_xx, K_yy summed over T₊ = T₀ and T₋ = T_{n−1}, the T₋ part of K_yy negated.
    """
    cot = 1.0 / math.tan(2 * math.pi / n)
    plus, minus = oracle["pairs"][0], oracle["pairs"][n - 1]
    Kxx = plus["xx"] + minus["xx"]
    Kyy = plus["yy"] - minus["yy"]
    Kxy_plus = plus["xy"] + plus["yx"]
    Kxy_minus = minus["xy"] + minus["yx"]
    f1 = 2 * Kxx @ u - cot * (Kxy_plus - Kxy_minus) @ u - (2 * lam / n) * oracle["M0"] @ u
    f2 = -2 * cot * Kyy @ u + (Kxy_plus + Kxy_minus) @ u
    return f1, f2


def oracle_kkt(oracle: dict, u: np.ndarray, lam: float, f: np.ndarray) -> np.ndarray:
    """Solution of (K₀ − λM₀)U = f, uᵀM₀U = 0 from the dense bordered system."""
    K0, M0 = oracle["K0"], oracle["M0"]
    b = M0 @ u
    N = K0.shape[0]
    A = np.zeros((N + 1, N + 1))
    A[:N, :N] = K0 - lam * M0
    A[:N, N] = b
    A[N, :N] = b
    return np.linalg.solve(A, np.concatenate([f, [0.0]]))[:N]


def oracle_hessian(oracle: dict, n: int) -> np.ndarray:
    """
    Float Hessian eigenvalues μ_0..μ_{2n−1} from the dense eigenpair, the dense bordered solves
    and the per-slice pairings, k = 0 contributing two zeros.
    """
    theta = 2 * math.pi / n
    sin_t, cot = math.sin(theta), 1.0 / math.tan(theta)
    values, vectors = oracle_eigs(oracle, 1)
    u, lam = vectors[:, 0], float(values[0])
    f1, f2 = oracle_rhs(oracle, n, u, lam)
    U1, U2 = oracle_kkt(oracle, u, lam, f1), oracle_kkt(oracle, u, lam, f2)
    P1 = [oracle_pairing(oracle, j, u, U1) for j in range(n)]
    P2 = [oracle_pairing(oracle, j, u, U2) for j in range(n)]
    energy = oracle_pairing(oracle, 0, u, u)
    area2 = n * sin_t
    mu = [0.0, 0.0]
    for k in range(1, n):
        A = B = C = 0.0
        for j in range(n):
            c_next, s_next = math.cos((j + 1) * k * theta), math.sin((j + 1) * k * theta)
            c_here, s_here = math.cos(j * k * theta), math.sin(j * k * theta)
            s, c = math.sin((2 * j + 1) * theta), math.cos((2 * j + 1) * theta)
            Q = np.array([[-s, c], [c, s]])
            Qp = np.array([[-c, -s], [-s, c]])
            A += (c_next + c_here) * np.trace(P1[j]) + (c_next - c_here) / sin_t * float((Q * P1[j]).sum())
            B += cot * (c_next - c_here) * np.trace(P2[j]) + (c_next - c_here) / sin_t * float((Qp * P2[j]).sum())
            C += cot * (s_next - s_here) * np.trace(P1[j]) + (s_next - s_here) / sin_t * float((Qp * P1[j]).sum())
        weight = (1 - math.cos(k * theta)) * 2 * n / sin_t
        alpha = weight * energy[0, 0] - area2 * A
        beta = weight * energy[1, 1] - area2 * B
        gamma = -area2 * C
        mu.extend(np.linalg.eigvalsh(np.array([[alpha, gamma], [gamma, beta]])))
    return np.array(mu)


@pytest.fixture(scope="session")
def pentagon_small():
    """n=5, m=4 mesh with its interval system, partial blocks and the floating oracle."""
    mesh = build_full_mesh(5, 4)
    return {
        "mesh": mesh,
        "system": assemble_system(mesh),
        "blocks": assemble_partials(mesh),
        "oracle": oracle_assemble(mesh),
    }


@pytest.fixture
def stored_summary():
    """Summary of a synthetic certified n=5 run; no eigenvalue solve needed."""
    from core import apriori
    from core.certify import HessianSpectrum, PolygonCertifier
    from core.interval import Interval
    from core.vlinalg import EigenEnclosure

    zero = Interval(0.0, 0.0)
    lam1, lam2 = Interval(7.85, 7.85), Interval(19.9, 19.9)
    budget = apriori.build_budget(5, 250, lam1, lam2)
    budget.mu_errors = {k: Interval(0.0, 0.25) for k in range(5)}
    spectrum = HessianSpectrum(n=5, A=[], B=[], C=[], D=[], alpha=[], beta=[], gamma=[], mu=[zero, zero] + [Interval(1.0, 1.1)] * 8)
    report = PolygonCertifier(5, 4).finalize((EigenEnclosure(value=lam1), EigenEnclosure(value=lam2)), spectrum, budget)
    return report.to_summary()
