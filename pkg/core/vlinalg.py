"""
Validated linear algebra for the pencil (K₀, M₀).

Floating solvers (ARPACK, CG) only produce candidates. Every number that leaves this module as an
enclosure is backed by a residual bound, a Krawczyk inclusion, the saddle-point estimate or an
a-posteriori Cholesky backward error bound.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Optional, Union

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
from scipy.sparse.csgraph import reverse_cuthill_mckee
from scipy.sparse.linalg import ArpackNoConvergence, LinearOperator, cg, eigsh

from core.errors import CertificationError, SolverError
from core.interval import (
    INF,
    UNIT_ROUNDOFF,
    Interval,
    IntervalVector,
    SparseIntervalMatrix,
    add_up,
    div_up,
    gamma,
    midrad_matmul,
    mul_up,
    sqrt_down,
    sqrt_up,
    v_add_down,
    v_add_up,
)
from core.log import get_logger, kv

logger = get_logger("vlinalg")

Matrix = Union[SparseIntervalMatrix, sp.spmatrix, np.ndarray]
DENSE_LIMIT = 400
GOLDEN = (Interval.point(5.0).sqrt() + 1) / 2  # 2/(√5 − 1)


@dataclass
class EigenEnclosure:
    """
    Enclosure of a generalized eigenvalue, optionally with an eigenvector box.

    ``center`` is the float candidate. ``m_radius`` and ``l2_radius`` bound the M-norm and 2-norm
    distance from ``center`` to the M-normalized true eigenvector, when known.
    """

    value: Interval
    vector: Optional[IntervalVector] = None
    simple: bool = False
    method: Literal["residual", "krawczyk"] = "residual"
    center: Optional[np.ndarray] = None
    l2_radius: float = INF
    m_radius: float = INF
    residual_mnorm2: float = INF  # upper bound of rᵀM⁻¹r
    mass_norm2: Optional[Interval] = None  # x̃ᵀMx̃
    sweeps: int = 0


@dataclass
class SaddleSolution:
    """Enclosure of the exact discrete solution U* of the bordered system."""

    solution: IntervalVector
    residual_norm: float
    error_bound: float
    center: np.ndarray
    l2_radius: float
    gamma: float = 1.0
    w: float = 0.0


def _midpoint(A: Matrix) -> sp.csr_matrix:
    if isinstance(A, SparseIntervalMatrix):
        return A.mid_matrix()
    return sp.csr_matrix(A)


def mass_lower_bound(M: SparseIntervalMatrix) -> float:
    """Lower bound of λ_min(M) for a P1 mass matrix: ½·min M_ii."""
    return 0.5 * float(M.diagonal().lo.min())


def norm2_lower(v: IntervalVector) -> float:
    """Lower bound of inf ‖x‖₂ over x ∈ v."""
    mig = np.where(v.lo > 0.0, v.lo, np.where(v.hi < 0.0, -v.hi, 0.0))
    if not mig.any():
        return 0.0
    squares = mig * mig * (1.0 - 2.0 * UNIT_ROUNDOFF)
    total = np.nextafter(math.fsum(squares), -INF) * (1.0 - 2.0 * UNIT_ROUNDOFF)
    return sqrt_down(max(float(total), 0.0))


# ---------------------------------------------------------------------------
# floating candidates
# ---------------------------------------------------------------------------


def fp_eigs(K0: Matrix, M0: Matrix, count: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """
    Approximate the smallest generalized eigenpairs of (K₀, M₀) from the midpoint matrices.

    Args:
        K0: Stiffness matrix (interval or float).
        M0: Mass matrix (interval or float).
        count (int): Number of eigenpairs.

    Returns:
        tuple[np.ndarray, np.ndarray]: Ascending eigenvalues and M-normalized eigenvectors (columns).
    """
    K = _midpoint(K0)
    M = _midpoint(M0)
    size = K.shape[0]
    if count < 1 or count > size:
        raise ValueError(f"Unknown eigenpair count {count!r}, must be in [1, {size}]")
    if size <= max(DENSE_LIMIT, count + 2):
        values, vectors = sla.eigh(K.toarray(), M.toarray(), subset_by_index=[0, count - 1])
    else:
        try:
            values, vectors = eigsh(K.tocsc(), k=count, M=M.tocsc(), sigma=0.0, which="LM", tol=0.0)
        except ArpackNoConvergence as exc:
            raise SolverError(f"ARPACK did not converge for {count} eigenpairs", iterations=len(exc.eigenvalues)) from exc
        order = np.argsort(values)
        values, vectors = values[order], vectors[:, order]
    for k in range(vectors.shape[1]):
        col = vectors[:, k]
        vectors[:, k] = col / math.sqrt(float(col @ (M @ col)))
        if vectors[np.argmax(np.abs(vectors[:, k])), k] < 0:
            vectors[:, k] = -vectors[:, k]
    logger.debug("fp_eigs %s", kv(size=size, count=count, lam_min=float(values[0])))
    return np.asarray(values, dtype=float), vectors


def cg_solve(
    A: Matrix,
    rhs: np.ndarray,
    tol: float = 1e-12,
    maxiter: Optional[int] = None,
    b: Optional[np.ndarray] = None,
    w: float = 0.0,
) -> np.ndarray:
    """
    Jacobi-scaled conjugate gradient on A + w·bbᵀ, started from the zero vector.

    Args:
        A: Symmetric matrix (midpoint is used for interval input).
        rhs (np.ndarray): Right-hand side.
        tol (float): Relative residual tolerance.
        maxiter (int, optional): Iteration cap, 10·N by default.
        b (np.ndarray, optional): Rank-one border vector.
        w (float): Border weight.

    Returns:
        np.ndarray: Approximate solution.
    """
    Am = _midpoint(A)
    size = Am.shape[0]
    rhs = np.asarray(rhs, dtype=float)
    if rhs.shape[0] != size:
        raise ValueError(f"Unknown right-hand side length {rhs.shape[0]!r}, must be {size}")
    if not rhs.any():
        return np.zeros(size)
    border = np.zeros(size) if b is None else np.asarray(b, dtype=float)
    diag = Am.diagonal() + w * border * border
    if (diag <= 0.0).any():
        raise SolverError("Jacobi scaling needs a positive diagonal")

    op = LinearOperator((size, size), matvec=lambda x: Am @ x + w * border * (border @ x), dtype=float)
    jacobi = LinearOperator((size, size), matvec=lambda x: x / diag, dtype=float)
    iterations = 0

    def count(_):
        nonlocal iterations
        iterations += 1

    x, info = cg(op, rhs, x0=np.zeros(size), rtol=tol, atol=0.0, maxiter=maxiter or 10 * size, M=jacobi, callback=count)
    residual = float(np.linalg.norm(op @ x - rhs) / np.linalg.norm(rhs))
    logger.debug("cg %s", kv(size=size, iterations=iterations, residual=residual))
    if info != 0:
        raise SolverError(f"CG stopped with info={info}", iterations=iterations, residual=residual)
    return x


# ---------------------------------------------------------------------------
# residual bounds
# ---------------------------------------------------------------------------


def residual_enclosure(
    K0: SparseIntervalMatrix,
    M0: SparseIntervalMatrix,
    x: np.ndarray,
    lam: float,
    mass_lower: Optional[float] = None,
) -> EigenEnclosure:
    """
    Enclose a generalized eigenvalue near λ̃ from the residual r = K₀x̃ − λ̃M₀x̃.

    The radius is ρ = sqrt(rᵀM⁻¹r / x̃ᵀMx̃) with rᵀM⁻¹r ≤ |r|₂²/λ_min(M).

    Args:
        K0 (SparseIntervalMatrix): Stiffness enclosure.
        M0 (SparseIntervalMatrix): Mass enclosure.
        x (np.ndarray): Approximate eigenvector.
        lam (float): Approximate eigenvalue.
        mass_lower (float, optional): Lower bound of λ_min(M₀); ½·min M_ii if omitted.

    Returns:
        EigenEnclosure: Interval containing at least one eigenvalue.
    """
    x = np.asarray(x, dtype=float)
    lam = float(lam)
    if mass_lower is None:
        mass_lower = mass_lower_bound(M0)
    if not mass_lower > 0.0:
        raise CertificationError("Mass matrix lower bound is not positive", stage="eigs")
    r = K0.combine(M0, -lam).matvec(x)
    r2 = r.norm2_upper()
    r2 = mul_up(r2, r2)
    xmx = M0.quadratic_form(x)
    if not xmx.lo > 0.0:
        raise CertificationError("x̃ᵀM x̃ enclosure touches 0", stage="eigs")
    rmr = div_up(r2, mass_lower)
    rho = sqrt_up(div_up(rmr, xmx.lo))
    value = Interval.point(lam) + Interval(-rho, rho)
    logger.debug("residual_enclosure %s", kv(lam=lam, rho=rho, rmr=rmr))
    return EigenEnclosure(value=value, center=x, residual_mnorm2=rmr, mass_norm2=xmx)


def eigvec_error_bound(enc: EigenEnclosure, gap: float) -> float:
    """
    Upper bound of |x̃ − x*|_M for the M-normalized eigenvector x* of the only eigenvalue within ``gap``.

    |x̃ − x*|²_M ≤ q + max{(|x̃|_M − 1)², (1 − sqrt(x̃ᵀMx̃ − q))²} with q = rᵀM⁻¹r/a².

    Args:
        enc (EigenEnclosure): Residual enclosure of the candidate.
        gap (float): Separation a of λ̃ from every other eigenvalue.

    Returns:
        float: The M-norm bound.
    """
    if enc.mass_norm2 is None or not math.isfinite(enc.residual_mnorm2):
        raise ValueError("Unknown enclosure, must come from residual_enclosure")
    if not gap > 0.0 or enc.value.rad > gap:
        raise CertificationError(f"Gap {gap!r} does not dominate the residual radius {enc.value.rad!r}", stage="eigs")
    q = div_up(enc.residual_mnorm2, Interval.point(gap).square().lo)
    radicand = float(np.nextafter(enc.mass_norm2.lo - q, -INF))
    if radicand < 0.0:
        raise CertificationError("Negative radicand in the eigenvector bound: residual too large for the gap", stage="eigs")
    alpha_lo = sqrt_down(radicand)
    norm_hi = sqrt_up(enc.mass_norm2.hi)
    first = (Interval.point(norm_hi) - 1).mag
    second = max(1.0 - alpha_lo, 0.0)
    worst = max(first, float(np.nextafter(second, INF)))
    total = add_up(q, mul_up(worst, worst))
    return sqrt_up(total)


# ---------------------------------------------------------------------------
# Krawczyk inclusion
# ---------------------------------------------------------------------------


def krawczyk_eigenpair(
    K: SparseIntervalMatrix,
    M: SparseIntervalMatrix,
    lam: float,
    x: np.ndarray,
    max_sweeps: int = 20,
) -> Optional[EigenEnclosure]:
    """
    Verify an approximate eigenpair with a Krawczyk-type inclusion.

    The component v of largest magnitude is fixed; y ↦ Z + (I − RC)y + R·(M·yy)·y_v is shown to map
    an epsilon-inflated box into its interior, with C = K − λ̃M whose column v is −Mx̃ and
    R ≈ C⁻¹ from a dense LU factorization.

    Args:
        K (SparseIntervalMatrix): Stiffness enclosure.
        M (SparseIntervalMatrix): Mass enclosure.
        lam (float): Approximate eigenvalue.
        x (np.ndarray): Approximate eigenvector.
        max_sweeps (int): Upper limit of inflation sweeps.

    Returns:
        EigenEnclosure | None: Enclosure with x*_v = x̃_v, or None if the inclusion was not reached.
    """
    x = np.asarray(x, dtype=float)
    size = x.shape[0]
    lam = float(lam)
    v = int(np.argmax(np.abs(x)))

    A = K.combine(M, -lam)
    r = A.matvec(x)
    Mx = M.matvec(x)
    keep = A.cols != v
    C = SparseIntervalMatrix.from_triplets(
        np.concatenate([A.rows[keep], np.arange(size)]),
        np.concatenate([A.cols[keep], np.full(size, v)]),
        np.concatenate([A.lo_data[keep], -Mx.hi]),
        np.concatenate([A.hi_data[keep], -Mx.lo]),
        (size, size),
    )
    try:
        R = sla.lu_solve(sla.lu_factor(C.mid_matrix().toarray()), np.eye(size))
    except (sla.LinAlgError, ValueError) as exc:
        logger.warning("Krawczyk preconditioner failed: %s", exc)
        return None
    if not np.isfinite(R).all():
        logger.warning("Krawczyk preconditioner is not finite")
        return None
    zero_rad = sp.csr_matrix((size, size))

    z_lo, z_hi = midrad_matmul(R, zero_rad, r.mid(), r.rad(), size)
    Z = IntervalVector(-z_hi, -z_lo)

    # I − R·C, formed as (Cᵀ Rᵀ)ᵀ so the sparse factor leads
    col_nnz = int(np.bincount(C.cols, minlength=size).max())
    p_lo, p_hi = midrad_matmul(C.mid_matrix().T.tocsr(), C.rad_matrix().T.tocsr(), R.T, np.zeros((size, size)), col_nnz)
    eye = np.eye(size)
    G = IntervalVector(v_add_down(eye, -p_hi.T).reshape(-1), v_add_up(eye, -p_lo.T).reshape(-1))
    G_mid = G.mid().reshape(size, size)
    G_rad = G.rad().reshape(size, size)

    mag_zv = max(abs(Z.lo[v]), abs(Z.hi[v]))
    sweeps = min(15 * (int(mag_zv > 0.1) + 1), max_sweeps)
    tiny = np.finfo(float).tiny
    Y = Z
    for sweep in range(1, sweeps + 1):
        eps = 0.1 * Y.mag() + tiny
        X = IntervalVector(v_add_down(Y.lo, -eps), v_add_up(Y.hi, eps))
        XX = IntervalVector(X.lo.copy(), X.hi.copy())
        XX.lo[v] = XX.hi[v] = 0.0
        gx_lo, gx_hi = midrad_matmul(G_mid, G_rad, X.mid(), X.rad(), size)
        MXX = M.matvec(XX) * X[v]
        rm_lo, rm_hi = midrad_matmul(R, zero_rad, MXX.mid(), MXX.rad(), size)
        Y = Z + IntervalVector(gx_lo, gx_hi) + IntervalVector(rm_lo, rm_hi)
        if not (np.isfinite(Y.lo).all() and np.isfinite(Y.hi).all()):
            break
        if (X.lo < Y.lo).all() and (Y.hi < X.hi).all():
            value = Interval.point(lam) + Y[v]
            Yx = IntervalVector(Y.lo.copy(), Y.hi.copy())
            Yx.lo[v] = Yx.hi[v] = 0.0
            vector = Yx + x
            logger.debug("krawczyk %s", kv(size=size, sweeps=sweep, lam_rad=value.rad))
            return EigenEnclosure(
                value=value,
                vector=vector,
                simple=True,
                method="krawczyk",
                center=x,
                l2_radius=Yx.norm2_upper(),
                sweeps=sweep,
            )
    logger.warning("Krawczyk inclusion not reached within %d sweeps (size %d)", sweeps, size)
    return None


# ---------------------------------------------------------------------------
# bordered (saddle point) systems
# ---------------------------------------------------------------------------


def saddle_enclosure(
    K0: SparseIntervalMatrix,
    M0: SparseIntervalMatrix,
    u1: EigenEnclosure,
    lam1: Interval,
    lam2: Interval,
    f: IntervalVector,
    U_float: np.ndarray,
    gamma0: float = 4.0,
    f_radius: float = 0.0,
) -> SaddleSolution:
    """
    Bound the distance of a float solution U to the exact solution of (K₀ − λ₁M₀)U = f, bᵀU = 0.

    With b = γM₀u₁, γ = γ₀/‖M₀ũ₁‖₂ and w = (λ₂ − λ₁)/γ²:
    ‖U* − U‖₂ ≤ (2/(√5−1))·max{1/(λ₂−λ₁), ‖K₀ − λ₁M₀‖_∞/‖b‖₂² + w}·‖(AU − f, bᵀU)‖₂.

    Args:
        K0, M0 (SparseIntervalMatrix): Interior pencil.
        u1 (EigenEnclosure): First eigenvector with ``center``, ``m_radius`` and ``l2_radius``.
        lam1, lam2 (Interval): Enclosures of λ₁,h and λ₂,h.
        f (IntervalVector): Right-hand side enclosure.
        U_float (np.ndarray): Candidate solution.
        gamma0 (float): Border scaling γ₀.
        f_radius (float): Extra 2-norm uncertainty of f outside its box.

    Returns:
        SaddleSolution: Ball and box enclosures of U*.
    """
    U = np.asarray(U_float, dtype=float)
    if len(f) != U.shape[0] or U.shape[0] != K0.shape[0]:
        raise ValueError(f"Unknown system sizes f={len(f)!r}, U={U.shape[0]!r}, must be {K0.shape[0]}")
    if u1.center is None or not math.isfinite(u1.m_radius):
        raise ValueError("Unknown eigenvector enclosure, must carry center and m_radius")
    gap_lo = (lam2 - lam1).lo
    if not gap_lo > 0.0:
        raise CertificationError("λ₂ − λ₁ enclosure is not positive", stage="saddle")
    u = u1.center

    M_u = M0.matvec(u)
    m_u_norm = M_u.norm2_upper()
    gam = gamma0 / m_u_norm
    m_norm_inf = M0.norm_inf_upper()
    mu_lower = norm2_lower(M_u) - mul_up(m_norm_inf, u1.l2_radius)
    mu_lower = float(np.nextafter(mu_lower, -INF))
    if not mu_lower > 0.0:
        raise CertificationError("‖M₀u₁‖₂ lower bound is not positive", stage="saddle")
    b_norm2 = (Interval.point(gam) * mu_lower).square().lo
    w = (Interval.point(gap_lo) / Interval.point(gam).square()).lo

    A = K0.combine(M0, -lam1)
    main = (A.matvec(U) - f).norm2_upper()
    main = add_up(main, f_radius)
    # |bᵀU| ≤ γ(|ũᵀM₀U| + ε_M·|U|_M)
    uMU = M0.quadratic_form(u, U).mag
    U_m = sqrt_up(max(M0.quadratic_form(U).hi, 0.0))
    border = (Interval.point(gam) * (Interval.point(uMU) + Interval.point(u1.m_radius) * U_m)).hi
    residual = sqrt_up(add_up(mul_up(main, main), mul_up(border, border)))

    inv_bound = (1 / Interval.point(gap_lo)).hi
    ratio = (Interval.point(A.norm_inf_upper()) / Interval(b_norm2, b_norm2) + w).hi
    kappa = (GOLDEN * max(inv_bound, ratio)).hi
    error = mul_up(kappa, residual)

    f_dot = f.dot(u)
    slack = mul_up(f.norm2_upper(), u1.l2_radius) + mul_up(f_radius, add_up(np.linalg.norm(u), u1.l2_radius))
    if not (f_dot.lo - slack <= 0.0 <= f_dot.hi + slack):
        logger.warning("fᵀu₁ enclosure %s excludes 0; the bound still covers the bordered solution", f_dot)
    logger.debug(
        "saddle %s",
        kv(gamma=gam, w=w, gap_lo=gap_lo, residual=residual, kappa=kappa, error=error),
    )
    return SaddleSolution(
        solution=IntervalVector.from_midrad(U, error),
        residual_norm=residual,
        error_bound=error,
        center=U,
        l2_radius=error,
        gamma=gam,
        w=w,
    )


def solve_bordered(
    K0: SparseIntervalMatrix,
    M0: SparseIntervalMatrix,
    u: np.ndarray,
    lam1: float,
    gap: float,
    rhs: np.ndarray,
    gamma0: float = 4.0,
    tol: float = 1e-12,
) -> np.ndarray:
    """Float solution of (K₀ − λ̃₁M₀ + w·bbᵀ)U = f with b = γM₀ũ, the CG system behind saddle_enclosure."""
    A = K0.mid_matrix() - lam1 * M0.mid_matrix()
    b = M0.mid_matrix() @ u
    gam = gamma0 / float(np.linalg.norm(b))
    b = gam * b
    return cg_solve(A, rhs, tol=tol, b=b, w=gap / (gam * gam))


# ---------------------------------------------------------------------------
# positive definiteness
# ---------------------------------------------------------------------------


def _banded_upper(A: sp.csr_matrix, bandwidth: int) -> np.ndarray:
    coo = sp.triu(A).tocoo()
    ab = np.zeros((bandwidth + 1, A.shape[0]))
    ab[bandwidth + coo.row - coo.col, coo.col] = coo.data
    return ab


def _abs_product_rowsum(cb: np.ndarray, bandwidth: int) -> float:
    """Upper bound of ‖|Rᵀ||R|‖_∞ for R stored in upper banded form."""
    size = cb.shape[1]
    t = np.zeros(size)
    for d in range(bandwidth + 1):
        t[: size - d] += np.abs(cb[bandwidth - d, d:])
    y = np.zeros(size)
    for d in range(bandwidth + 1):
        y[d:] += np.abs(cb[bandwidth - d, d:]) * t[: size - d]
    bound = float(y.max()) * (1.0 + gamma(2 * bandwidth + 4))
    return float(np.nextafter(bound, INF))


def _symmetric_center(A: SparseIntervalMatrix) -> tuple[np.ndarray, np.ndarray]:
    """Symmetrized midpoint values on A's pattern and the entrywise distance bound to A's endpoints."""
    mid = A.mid_matrix()
    mid_t = np.asarray(mid.T.tocsr()[A.rows, A.cols]).ravel()
    center = 0.5 * (mid.data + mid_t)
    deviation = np.maximum(v_add_up(A.hi_data, -center), v_add_up(center, -A.lo_data))
    return center, deviation


def cholesky_spd_check(A: SparseIntervalMatrix, tries: int = 4) -> bool:
    """
    Prove that every symmetric matrix in the enclosure A is positive definite.

    The midpoint is symmetrized and its distance to the endpoints goes into the radius, so a
    midpoint that is asymmetric in the last bits is accepted. Rows and columns are scaled by
    powers of two (exact) to a unit diagonal range and reordered by reverse Cuthill-McKee. A
    shifted floating Cholesky factorization C − sI = RᵀR is computed; its backward error
    γ_{b+2}‖|Rᵀ||R|‖_∞, the diagonal rounding and ‖rad‖_∞ are bounded, and the matrix is accepted
    when their sum stays below s. The first shift is small and grows to the measured bound.

    Args:
        A (SparseIntervalMatrix): Structurally symmetric interval matrix.
        tries (int): Number of shifts tried.

    Returns:
        bool: True if positive definiteness is proven; False means not proven.
    """
    if A.shape[0] != A.shape[1] or not A.is_structurally_symmetric():
        return False
    size = A.shape[0]
    if size == 0:
        return True
    # no symmetric member at all
    if (A.lo - A.hi.T > 0).nnz:
        return False
    if np.any(A.lo.diagonal() <= 0.0):
        return False
    center, deviation = _symmetric_center(A)
    indptr = A.lo.indptr
    sym = sp.csr_matrix((center, A.cols, indptr), shape=A.shape)
    _, exponent = np.frexp(np.sqrt(sym.diagonal()))
    D = sp.diags(np.ldexp(1.0, -exponent))
    C = (D @ sym @ D).tocsr()
    rad = (D @ sp.csr_matrix((deviation, A.cols, indptr), shape=A.shape) @ D).tocsr()
    rad_norm = float(np.nextafter(rad.sum(axis=1).max() * (1.0 + gamma(A.max_row_nnz + 1)), INF))

    perm = reverse_cuthill_mckee(C, symmetric_mode=True)
    B = C[perm][:, perm].tocsr()
    coo = B.tocoo()
    bandwidth = int(np.abs(coo.row - coo.col).max())
    diag = np.abs(B.diagonal())
    shift = max(2.0 * rad_norm, gamma(bandwidth + 2) * float(diag.max()), np.finfo(float).tiny)
    for attempt in range(tries):
        shifted = (B - shift * sp.identity(size, format="csr")).tocsr()
        try:
            cb = sla.cholesky_banded(_banded_upper(shifted, bandwidth), lower=False)
        except sla.LinAlgError:
            logger.debug("spd %s", kv(attempt=attempt, shift=shift, status="factorization failed"))
            return False
        diag_round = 2.0 * UNIT_ROUNDOFF * float(np.abs(shifted.diagonal()).max())
        backward = mul_up(gamma(bandwidth + 2), _abs_product_rowsum(cb, bandwidth))
        bound = add_up(add_up(backward, diag_round), rad_norm)
        logger.debug("spd %s", kv(attempt=attempt, shift=shift, bound=bound, bandwidth=bandwidth))
        if shift > bound:
            return True
        shift = 2.0 * max(shift, bound)
    return False
