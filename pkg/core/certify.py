"""
End-to-end certification that the regular n-gon is a strict local minimizer of λ₁·|P| among
polygons with n vertices.

The stages run in order:

1. certify λ₁,h (simple, positive eigenvector) and λ₂,h below the j₂,₁² threshold;
2. solve the two material-derivative systems in floating point and enclose their exact solutions;
3. evaluate the 2n Hessian eigenvalues from per-slice derivative pairings;
4. widen them by the a-priori budget and count the positive ones.
"""
from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Callable, Iterable, Optional, TypeVar

import numpy as np
from rich.console import Console

from core import apriori
from core.assembly import (
    AssembledSystem,
    PartialBlocks,
    SliceSystem,
    assemble_partials,
    assemble_rhs_material,
    assemble_slice_system,
    assemble_system,
)
from core.constants import ThetaEnclosure, bessel_j2_no_zero_below, enclose_theta, j21_squared, sincos_pi
from core.errors import CertificationError, InconsistencyError, IntervalDomainError
from core.interval import INF, Interval, IntervalVector, div_up, sqrt_down, sqrt_up
from core.log import get_logger, kv
from core.mesh import SymmetricMesh, build_full_mesh, interior_permutation, reflection_permutation
from core.models import (
    BudgetRecord,
    CertificationSummary,
    EigenSummary,
    HessianRow,
    IntervalRecord,
    ScanRow,
    Verdict,
)
from core.vlinalg import (
    EigenEnclosure,
    SaddleSolution,
    cholesky_spd_check,
    eigvec_error_bound,
    fp_eigs,
    krawczyk_eigenpair,
    residual_enclosure,
    saddle_enclosure,
    solve_bordered,
)

T = TypeVar("T")
Pairing = list[list[Interval]]

MIN_N, MAX_N = 5, 10
SLICE_SPD_MARGIN = 1e-4  # relative shift below the slice candidate for the SPD identification
ZERO = Interval(0.0, 0.0)


@lru_cache(maxsize=1)
def eigen_threshold() -> Interval:
    """j₂,₁², certified to be the square of the first positive zero of J₂."""
    if not bessel_j2_no_zero_below():
        raise CertificationError("J2 could not be shown zero free on (0, 5]", stage="eigs")
    return j21_squared()


@dataclass
class MaterialDerivatives:
    """Enclosures of the two discrete material derivatives and their right-hand sides."""

    U1: SaddleSolution
    U2: SaddleSolution
    f1: IntervalVector
    f2: IntervalVector
    orthogonal: bool = True
    symmetric: bool = True


@dataclass
class HessianSpectrum:
    """Per-k coefficients and the 2n Hessian eigenvalues, μ_{2k} ≤ μ_{2k+1}."""

    n: int
    A: list[Interval]
    B: list[Interval]
    C: list[Interval]
    D: list[Interval]
    alpha: list[Interval]
    beta: list[Interval]
    gamma: list[Interval]
    mu: list[Interval]

    def pair(self, k: int) -> tuple[Interval, Interval]:
        return self.mu[2 * k], self.mu[2 * k + 1]


@dataclass
class CertificationReport:
    """Outcome of one (n, m) run."""

    n: int
    m: int
    dof: int
    lam1: EigenEnclosure
    lam2: EigenEnclosure
    spectrum: HessianSpectrum
    budget: apriori.ErrorBudget
    final: list[Interval]
    positive_count: int
    verdict: Verdict
    u1_positive: bool = False
    material: Optional[MaterialDerivatives] = field(default=None, repr=False)

    @property
    def required_positive(self) -> int:
        return 2 * self.n - 4

    @property
    def smallest_nonzero(self) -> Interval:
        """The final interval with the smallest lower endpoint among k ≠ 0."""
        return min(self.final[2:], key=lambda x: x.lo)

    @property
    def fem_radius(self) -> float:
        """Largest radius of the floating-to-interval Hessian eigenvalue enclosures."""
        return max(mu.rad for mu in self.spectrum.mu[2:])

    def to_summary(self) -> CertificationSummary:
        rows = []
        for k in range(self.n):
            for index in (2 * k, 2 * k + 1):
                rows.append(
                    HessianRow(
                        k=k,
                        index=index,
                        mu=IntervalRecord.from_interval(self.spectrum.mu[index]),
                        error=self.budget.mu_errors.get(k, ZERO).hi,
                        final=IntervalRecord.from_interval(self.final[index]),
                    )
                )
        return CertificationSummary(
            n=self.n,
            m=self.m,
            dof=self.dof,
            lam1=EigenSummary.from_enclosure(self.lam1, self.budget.lam1_err, self.budget.lam1),
            lam2=EigenSummary.from_enclosure(self.lam2, self.budget.lam2_err, self.budget.lam2),
            threshold=IntervalRecord.from_interval(eigen_threshold()),
            u1_positive=self.u1_positive,
            rows=rows,
            budget=BudgetRecord(entries=self.budget.to_record()),
            positive_count=self.positive_count,
            required_positive=self.required_positive,
            verdict=self.verdict,
        )


# ---------------------------------------------------------------------------
# small 2x2 helpers
# ---------------------------------------------------------------------------


def _trace(P: Pairing) -> Interval:
    return P[0][0] + P[1][1]


def _inner(Q: Pairing, P: Pairing) -> Interval:
    return Q[0][0] * P[0][0] + Q[0][1] * P[0][1] + Q[1][0] * P[1][0] + Q[1][1] * P[1][1]


def _intersect_pairings(box: Pairing, ball: Pairing) -> Pairing:
    out = [[ZERO, ZERO], [ZERO, ZERO]]
    for a in range(2):
        for b in range(2):
            try:
                out[a][b] = box[a][b].intersect(ball[a][b])
            except IntervalDomainError as exc:
                raise InconsistencyError(f"Box and ball pairings are disjoint at ({a}, {b})", stage="hessian") from exc
    return out


def fourier_coefficients(n: int, k: int, trig: ThetaEnclosure, P1: list[Pairing], P2: list[Pairing]) -> dict[str, Interval]:
    """
    A_k, B_k, C_k, D_k from the per-slice pairings P_j[a][b] = ∫_{T_j} ∂_a u₁ ∂_b U.

    With Q_j = [[−s, c], [c, s]] and Q'_j = [[−c, −s], [−s, c]] for (s, c) = (sin, cos)((2j+1)θ):

    * A_k = Σ (cos(j+1)kθ + cos jkθ) tr P¹_j + Σ (cos(j+1)kθ − cos jkθ)/sinθ ⟨Q_j, P¹_j⟩
    * B_k = cotθ Σ (cos(j+1)kθ − cos jkθ) tr P²_j + Σ (cos(j+1)kθ − cos jkθ)/sinθ ⟨Q'_j, P²_j⟩
    * C_k = cotθ Σ (sin(j+1)kθ − sin jkθ) tr P¹_j + Σ (sin(j+1)kθ − sin jkθ)/sinθ ⟨Q'_j, P¹_j⟩
    * D_k = Σ (sin(j+1)kθ + sin jkθ) tr P²_j + Σ (sin(j+1)kθ − sin jkθ)/sinθ ⟨Q_j, P²_j⟩
    """
    cot, sin_t = trig.cot_t, trig.sin_t
    A = B = C = D = ZERO
    for j in range(n):
        s_next, c_next = sincos_pi(2 * (j + 1) * k, n)
        s_here, c_here = sincos_pi(2 * j * k, n)
        s, c = sincos_pi(2 * (2 * j + 1), n)
        Q = [[-s, c], [c, s]]
        Qp = [[-c, -s], [-s, c]]
        cos_diff = (c_next - c_here) / sin_t
        sin_diff = (s_next - s_here) / sin_t
        tr1, tr2 = _trace(P1[j]), _trace(P2[j])
        A = A + (c_next + c_here) * tr1 + cos_diff * _inner(Q, P1[j])
        B = B + cot * (c_next - c_here) * tr2 + cos_diff * _inner(Qp, P2[j])
        C = C + cot * (s_next - s_here) * tr1 + sin_diff * _inner(Qp, P1[j])
        D = D + (s_next + s_here) * tr2 + sin_diff * _inner(Q, P2[j])
    return {"A": A, "B": B, "C": C, "D": D}


def hessian_pair(alpha: Interval, beta: Interval, gamma: Interval) -> tuple[Interval, Interval]:
    """Eigenvalues ½(α + β ∓ √((α − β)² + 4γ²)) of [[α, γ], [γ, β]]."""
    root = ((alpha - beta).square() + gamma.square() * 4).sqrt()
    total = alpha + beta
    return (total - root) / 2, (total + root) / 2


# ---------------------------------------------------------------------------
# pipeline
# ---------------------------------------------------------------------------


class PolygonCertifier:
    """Runs the certification pipeline for the regular n-gon on the mesh with m subdivisions per ray."""

    def __init__(
        self,
        n: int,
        m: int,
        gamma0: float = 4.0,
        krawczyk_max_dim: int = 2500,
        threads: int = 1,
        log_level: int = logging.INFO,
        console: Optional[Console] = None,
        interp_constant: Optional[Interval] = None,
    ) -> None:
        """
        Args:
            n (int): Number of polygon vertices, 5 to 10.
            m (int): Subdivisions per ray, at least 2.
            gamma0 (float): Border scaling of the saddle-point systems, in [1, 10].
            krawczyk_max_dim (int): Largest slice pencil verified with the Krawczyk inclusion.
            threads (int): Worker threads for the per-slice and per-k maps.
            log_level (int): Logging level for the logger.
            console (Console, optional): Console the logger renders to.
            interp_constant (Interval, optional): Certified C₁, preferred over the table when tighter.
        """
        self.console = console or Console(stderr=True)
        self.logger = get_logger("PolygonCertifier", log_level)
        if not MIN_N <= n <= MAX_N:
            self._invalid(f"Unknown polygon size n={n!r}, must be in [{MIN_N}, {MAX_N}]")
        if m < 2:
            self._invalid(f"Unknown subdivision count m={m!r}, must be >= 2")
        if not 1.0 <= gamma0 <= 10.0:
            self._invalid(f"Unknown border scaling gamma0={gamma0!r}, must be in [1, 10]")
        if threads < 1:
            self._invalid(f"Unknown thread count {threads!r}, must be >= 1")
        self.n = n
        self.m = m
        self.gamma0 = gamma0
        self.krawczyk_max_dim = krawczyk_max_dim
        self.threads = threads
        self.interp_constant = interp_constant
        self.trig = enclose_theta(n)
        self.u1_positive = False

    def _invalid(self, message: str) -> None:
        self.logger.error(message)
        raise ValueError(message)

    def _map(self, fn: Callable[[int], T], items: Iterable[int]) -> list[T]:
        """Ordered map, threaded when more than one worker is configured."""
        items = list(items)
        if self.threads == 1:
            return [fn(i) for i in items]
        with ThreadPoolExecutor(max_workers=self.threads) as pool:
            return list(pool.map(fn, items))

    # lazily built data -----------------------------------------------------

    @cached_property
    def mesh(self) -> SymmetricMesh:
        return build_full_mesh(self.n, self.m)

    @cached_property
    def system(self) -> AssembledSystem:
        system = assemble_system(self.mesh, self.trig)
        self.logger.info(f"Assembled n={self.n} m={self.m}: {system.dof} interior dofs")
        return system

    @cached_property
    def slice_system(self) -> SliceSystem:
        return assemble_slice_system(self.mesh, self.trig)

    @cached_property
    def blocks(self) -> PartialBlocks:
        return assemble_partials(self.mesh, self.trig)

    @property
    def C1(self) -> Interval:
        return apriori.interp_constant_table(self.n, self.interp_constant)

    # stage 1 -------------------------------------------------------------------

    def _first_eigenvalue_on_slice(self) -> Interval:
        """
        Enclosure containing λ₁,h, from the slice pencil whose smallest eigenvalue is λ₁,h.

        A Krawczyk inclusion with a positive eigenvector identifies the smallest eigenvalue. Otherwise
        a residual enclosure [a, b] is combined with an SPD proof of K − σM, σ < a, so that
        λ₁,h ∈ (σ, b].
        """
        ss = self.slice_system
        values, vectors = fp_eigs(ss.K, ss.M, count=1)
        lam, x = float(values[0]), vectors[:, 0]
        if ss.dof <= self.krawczyk_max_dim:
            enc = krawczyk_eigenpair(ss.K, ss.M, lam, x)
            if enc is not None and enc.vector.is_positive():
                self.u1_positive = True
                self.logger.info(f"Slice Krawczyk: λ1,h in {enc.value} with a positive eigenvector ({enc.sweeps} sweeps)")
                return enc.value
            self.logger.warning("Slice Krawczyk inclusion failed, falling back to residual and SPD")
        res = residual_enclosure(ss.K, ss.M, x, lam, ss.mass_lower)
        sigma = float(np.nextafter(min(res.value.lo, lam * (1.0 - SLICE_SPD_MARGIN)), -INF))
        if not cholesky_spd_check(ss.K.combine(ss.M, Interval.point(-sigma))):
            self.logger.error("Could not prove that the slice pencil has no eigenvalue below its candidate")
            raise CertificationError("First eigenvalue could not be identified", stage="eigs")
        return Interval(sigma, res.value.hi)

    def certify_eigs(self) -> tuple[EigenEnclosure, EigenEnclosure]:
        """
        Certify λ₁,h with an eigenvector ball and λ₂,h, both below j₂,₁² after the a-priori error.

        Any discrete eigenvalue below j₂,₁² ≤ λ₄ ≤ λ₄,h is one of λ₁,h ≤ λ₂,h = λ₃,h, the last two
        coinciding by rotational symmetry. An enclosure above the one of λ₁,h therefore holds λ₂,h.

        Raises:
            CertificationError: If an enclosure, the separation, the threshold or the positivity of u₁,h
                cannot be proven.
        """
        sys = self.system
        values, vectors = fp_eigs(sys.K0, sys.M0, count=2)
        first = residual_enclosure(sys.K0, sys.M0, vectors[:, 0], values[0], sys.mass_lower)
        second = residual_enclosure(sys.K0, sys.M0, vectors[:, 1], values[1], sys.mass_lower)
        on_slice = self._first_eigenvalue_on_slice()
        if not (first.value.hi < second.value.lo and on_slice.hi < second.value.lo):
            self.logger.error(f"λ2,h enclosure {second.value} is not separated from λ1,h {first.value}")
            raise CertificationError("First and second eigenvalues are not separated", stage="eigs")
        try:
            value1 = first.value.intersect(on_slice)
        except IntervalDomainError as exc:
            raise InconsistencyError(f"Slice and full enclosures of λ1,h are disjoint: {on_slice} vs {first.value}", stage="eigs") from exc

        threshold = eigen_threshold()
        h = self.mesh.h
        for enc in (first, second):
            err, _ = apriori.eig_error(enc.value, self.C1, h)
            if not (enc.value + err).hi < threshold.lo:
                self.logger.error(f"Eigenvalue enclosure {enc.value} plus error {err.hi:.3e} reaches j21^2 = {threshold}")
                raise CertificationError("Eigenvalue enclosure reaches the j21^2 threshold", stage="eigs")

        gap = float(np.nextafter((second.value - values[0]).lo, -INF))
        m_radius = eigvec_error_bound(first, gap)
        l2_radius = div_up(m_radius, sqrt_down(sys.mass_lower))
        center = first.center
        lam1 = EigenEnclosure(
            value=value1,
            vector=IntervalVector.from_midrad(center, l2_radius),
            simple=True,
            method="krawczyk" if self.u1_positive else "residual",
            center=center,
            l2_radius=l2_radius,
            m_radius=m_radius,
            residual_mnorm2=first.residual_mnorm2,
            mass_norm2=first.mass_norm2,
        )
        self.u1_positive = self.u1_positive or lam1.vector.is_positive()
        if not self.u1_positive:
            self.logger.error(f"No strictly positive enclosure of u1,h (ball radius {l2_radius:.3e})")
            raise CertificationError("First eigenvector enclosure is not strictly positive", stage="eigs")
        self.logger.info(f"λ1,h in {lam1.value}, λ2,h in {second.value}, eigenvector radius {l2_radius:.3e}")
        self.logger.debug(kv(stage="eigs", gap=gap, m_radius=m_radius, threshold=threshold.lo))
        return lam1, second

    # stage 2 -------------------------------------------------------------------

    def solve_material(self, eigs: tuple[EigenEnclosure, EigenEnclosure]) -> MaterialDerivatives:
        """Enclose the two discrete material derivatives U¹, U² of the vertex (1, 0)."""
        lam1, lam2 = eigs
        sys = self.system
        f1, f2 = assemble_rhs_material(sys, self.blocks, lam1.vector, lam1.value)
        gap = (lam2.value - lam1.value).lo
        solutions = []
        for name, f in (("U1", f1), ("U2", f2)):
            U_float = solve_bordered(sys.K0, sys.M0, lam1.center, lam1.value.mid, gap, f.mid(), self.gamma0)
            solution = saddle_enclosure(sys.K0, sys.M0, lam1, lam1.value, lam2.value, f, U_float, self.gamma0)
            self.logger.info(f"{name}: saddle error bound {solution.error_bound:.3e}, residual {solution.residual_norm:.3e}")
            solutions.append(solution)
        U1, U2 = solutions

        orthogonal = True
        for name, U in (("U1", U1), ("U2", U2)):
            product = sys.M0.quadratic_form(lam1.vector, U.solution)
            if not product.contains(0.0):
                orthogonal = False
                self.logger.warning(f"u1^T M0 {name} enclosure {product} excludes 0")

        perm = interior_permutation(self.mesh, reflection_permutation(self.mesh))
        reflected1 = U1.solution.take(np.argsort(perm))
        reflected2 = U2.solution.take(np.argsort(perm))
        symmetric = reflected1.overlaps(U1.solution) and reflected2.overlaps(-U2.solution)
        if not symmetric:
            self.logger.warning("Material derivative enclosures violate the reflection symmetry")
        return MaterialDerivatives(U1=U1, U2=U2, f1=f1, f2=f2, orthogonal=orthogonal, symmetric=symmetric)

    # stage 3 -------------------------------------------------------------------

    def _slice_pairing(self, j: int, lam1: EigenEnclosure, U: Optional[SaddleSolution]) -> Pairing:
        """∫_{T_j} ∂_a u₁ ∂_b U (or ∂_a u₁ ∂_b u₁ when U is None), box form ∩ ball form."""
        blocks = self.blocks
        u_c, u_r = lam1.center, lam1.l2_radius
        if U is None:
            V_box, V_c, V_r = lam1.vector, u_c, u_r
        else:
            V_box, V_c, V_r = U.solution, U.center, U.l2_radius
        box = blocks.pairing(j, lam1.vector, V_box)
        center = blocks.pairing(j, u_c, V_c)
        s = Interval.point(sqrt_up(blocks.slice_stiffness_bound))
        u_semi = Interval.point(blocks.seminorm_upper(j, u_c))
        V_semi = Interval.point(blocks.seminorm_upper(j, V_c))
        pert = (s * u_r * V_semi + u_semi * s * V_r + s.square() * u_r * V_r).hi
        ball = [[center[a][b] + Interval(-pert, pert) for b in range(2)] for a in range(2)]
        return _intersect_pairings(box, ball)

    def hessian_spectrum(self, eigs: tuple[EigenEnclosure, EigenEnclosure], mats: MaterialDerivatives) -> HessianSpectrum:
        """
        Interval Hessian eigenvalues μ_{2k}, μ_{2k+1} for k = 0..n−1.

        α_k = (2n(1−cos kθ)/sinθ)∫_{T₀}(∂_x u₁)² − 2|P|A_k, β_k likewise with ∂_y and B_k, and
        γ_k = −2|P|C_k = 2|P|D_k, both forms intersected. k = 0 gives two exact zeros.

        Raises:
            InconsistencyError: If the two γ_k forms are disjoint.
        """
        lam1, _ = eigs
        n, trig = self.n, self.trig
        P1 = self._map(lambda j: self._slice_pairing(j, lam1, mats.U1), range(n))
        P2 = self._map(lambda j: self._slice_pairing(j, lam1, mats.U2), range(n))
        energy = self._slice_pairing(0, lam1, None)
        area2 = apriori.polygon_area(n) * 2

        def per_k(k: int) -> tuple[dict[str, Interval], Interval, Interval, Interval]:
            coef = fourier_coefficients(n, k, trig, P1, P2)
            if k == 0:
                return coef, ZERO, ZERO, ZERO
            weight = (1 - sincos_pi(2 * k, n)[1]) * (2 * n) / trig.sin_t
            alpha = weight * energy[0][0] - area2 * coef["A"]
            beta = weight * energy[1][1] - area2 * coef["B"]
            from_c, from_d = -(area2 * coef["C"]), area2 * coef["D"]
            try:
                gamma = from_c.intersect(from_d)
            except IntervalDomainError as exc:
                self.logger.error(f"γ_{k} forms are disjoint: {from_c} vs {from_d}")
                raise InconsistencyError(f"Disjoint γ_{k} enclosures {from_c} and {from_d}", stage="hessian") from exc
            return coef, alpha, beta, gamma

        results = self._map(per_k, range(n))
        spectrum = HessianSpectrum(n=n, A=[], B=[], C=[], D=[], alpha=[], beta=[], gamma=[], mu=[])
        for k, (coef, alpha, beta, gamma) in enumerate(results):
            for key in "ABCD":
                getattr(spectrum, key).append(coef[key])
            spectrum.alpha.append(alpha)
            spectrum.beta.append(beta)
            spectrum.gamma.append(gamma)
            spectrum.mu.extend([ZERO, ZERO] if k == 0 else hessian_pair(alpha, beta, gamma))
        for k in range(1, n):
            mirror = n - k
            if not all(a.overlaps(b) for a, b in zip(spectrum.pair(k), spectrum.pair(mirror))):
                self.logger.warning(f"Hessian pairs k={k} and k={mirror} do not overlap")
        self.logger.info("Hessian eigenvalues: " + ", ".join(str(mu) for mu in spectrum.mu))
        return spectrum

    # stage 4 -------------------------------------------------------------------

    def error_budget(self, eigs: tuple[EigenEnclosure, EigenEnclosure], mats: Optional[MaterialDerivatives] = None) -> apriori.ErrorBudget:
        """A-priori budget with per-k Hessian eigenvalue errors."""
        lam1, lam2 = eigs
        budget = apriori.build_budget(self.n, self.m, lam1.value, lam2.value, self.C1)
        apriori.attach_material_bounds(budget)
        uh_grad = None
        if mats is not None:
            K0 = self.system.K0
            uh_grad = {
                name: Interval(0.0, sqrt_up(max(K0.quadratic_form(U.solution).hi, 0.0)))
                for name, U in (("U1", mats.U1), ("U2", mats.U2))
            }
        apriori.hessian_error_table(budget, uh_grad)
        self.logger.info(f"A-priori Hessian error budget {budget.total_error:.4e}")
        return budget

    def finalize(
        self,
        eigs: tuple[EigenEnclosure, EigenEnclosure],
        spectrum: HessianSpectrum,
        budget: apriori.ErrorBudget,
        mats: Optional[MaterialDerivatives] = None,
    ) -> CertificationReport:
        """
        Widen μ_j by the budget of its k, count strictly positive lower endpoints and set the verdict.

        The k = 0 pair is zero analytically and stays [0, 0].
        """
        final = []
        for k in range(self.n):
            for mu in spectrum.pair(k):
                if k == 0:
                    final.append(ZERO)
                    continue
                err = budget.mu_errors.get(k, Interval(0.0, INF)).hi
                final.append(mu + Interval(-err, err))
        positive = sum(1 for x in final if x.lo > 0.0)
        verdict = Verdict.CERTIFIED if positive >= 2 * self.n - 4 else Verdict.NOT_CERTIFIED
        report = CertificationReport(
            n=self.n,
            m=self.m,
            dof=self.mesh.node_count,
            lam1=eigs[0],
            lam2=eigs[1],
            spectrum=spectrum,
            budget=budget,
            final=final,
            positive_count=positive,
            verdict=verdict,
            u1_positive=self.u1_positive,
            material=mats,
        )
        log = self.logger.info if verdict is Verdict.CERTIFIED else self.logger.warning
        log(f"Number of positive eigenvalues = {positive} (need {2 * self.n - 4}): {verdict.value}")
        return report

    def run(self) -> CertificationReport:
        """All four stages."""
        eigs = self.certify_eigs()
        mats = self.solve_material(eigs)
        spectrum = self.hessian_spectrum(eigs, mats)
        budget = self.error_budget(eigs, mats)
        return self.finalize(eigs, spectrum, budget, mats)


# ---------------------------------------------------------------------------
# module-level wrappers
# ---------------------------------------------------------------------------


def certify_eigs(n: int, m: int, **options) -> tuple[EigenEnclosure, EigenEnclosure]:
    return PolygonCertifier(n, m, **options).certify_eigs()


def solve_material(n: int, m: int, eigs: tuple[EigenEnclosure, EigenEnclosure], **options) -> MaterialDerivatives:
    return PolygonCertifier(n, m, **options).solve_material(eigs)


def hessian_spectrum(n: int, m: int, eigs: tuple[EigenEnclosure, EigenEnclosure], mats: MaterialDerivatives, **options) -> HessianSpectrum:
    return PolygonCertifier(n, m, **options).hessian_spectrum(eigs, mats)


def finalize(
    n: int,
    m: int,
    eigs: tuple[EigenEnclosure, EigenEnclosure],
    spectrum: HessianSpectrum,
    budget: apriori.ErrorBudget,
    **options,
) -> CertificationReport:
    return PolygonCertifier(n, m, **options).finalize(eigs, spectrum, budget)


def scan(n: int, m_values: Iterable[int], threads: int = 1, **options) -> list[ScanRow]:
    """
    Run the pipeline over several m and tabulate the smallest nonzero final interval.

    Failures are recorded per row and do not stop the scan.
    """
    logger = get_logger("scan")

    def one(m: int) -> ScanRow:
        try:
            report = PolygonCertifier(n, m, **options).run()
        except (CertificationError, ValueError, RuntimeError) as exc:
            stage = getattr(exc, "stage", None) or type(exc).__name__
            logger.warning(f"m={m}: {exc}")
            return ScanRow(m=m, mu_min_lo=math.nan, mu_min_hi=math.nan, budget=math.nan, fem_radius=math.nan, status=f"failed:{stage}")
        smallest = report.smallest_nonzero
        return ScanRow(
            m=m,
            mu_min_lo=smallest.lo,
            mu_min_hi=smallest.hi,
            budget=report.budget.total_error,
            fem_radius=report.fem_radius,
            status=report.verdict.value,
        )

    m_values = list(m_values)
    if threads == 1:
        return [one(m) for m in m_values]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(one, m_values))
