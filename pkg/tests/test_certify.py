"""
Tests for core.certify: pipeline stages on small meshes, the verdict logic and the full-size runs.
"""
import math

import numpy as np
import pytest
from mpmath import mp

from core import apriori
from core.certify import (
    HessianSpectrum,
    PolygonCertifier,
    eigen_threshold,
    fourier_coefficients,
    hessian_pair,
    scan,
)
from core.constants import enclose_theta
from core.errors import CertificationError
from core.interval import Interval, IntervalVector, div_up, sqrt_down
from core.mesh import build_full_mesh
from core.models import CertificationSummary, Verdict
from core.vlinalg import EigenEnclosure, eigvec_error_bound, fp_eigs, residual_enclosure
from tests.conftest import oracle_assemble, oracle_eigs, oracle_hessian, oracle_kkt, oracle_pairing, oracle_rhs

ZERO = Interval(0.0, 0.0)


def unchecked_eigs(certifier: PolygonCertifier) -> tuple[EigenEnclosure, EigenEnclosure]:
    """Eigen enclosures as certify_eigs builds them, without the j21² threshold (coarse meshes fail it)."""
    sys = certifier.system
    values, vectors = fp_eigs(sys.K0, sys.M0, count=2)
    first = residual_enclosure(sys.K0, sys.M0, vectors[:, 0], values[0], sys.mass_lower)
    second = residual_enclosure(sys.K0, sys.M0, vectors[:, 1], values[1], sys.mass_lower)
    m_radius = eigvec_error_bound(first, (second.value - values[0]).lo)
    l2_radius = div_up(m_radius, sqrt_down(sys.mass_lower))
    lam1 = EigenEnclosure(
        value=first.value,
        vector=IntervalVector.from_midrad(first.center, l2_radius),
        simple=True,
        center=first.center,
        l2_radius=l2_radius,
        m_radius=m_radius,
        residual_mnorm2=first.residual_mnorm2,
        mass_norm2=first.mass_norm2,
    )
    return lam1, second


def point_pairing(matrix: np.ndarray) -> list[list[Interval]]:
    return [[Interval.point(float(matrix[a, b])) for b in range(2)] for a in range(2)]


@pytest.fixture(scope="module")
def small_run():
    certifier = PolygonCertifier(5, 4)
    eigs = unchecked_eigs(certifier)
    mats = certifier.solve_material(eigs)
    spectrum = certifier.hessian_spectrum(eigs, mats)
    return certifier, eigs, mats, spectrum


def test_material_derivatives_match_dense_solve(small_run, pentagon_small):
    _, eigs, mats, _ = small_run
    oracle = pentagon_small["oracle"]
    values, vectors = oracle_eigs(oracle, 1)
    u, lam = vectors[:, 0], float(values[0])
    assert eigs[0].value.contains(lam)
    f1, f2 = oracle_rhs(oracle, 5, u, lam)
    for solution, f in ((mats.U1, f1), (mats.U2, f2)):
        exact = oracle_kkt(oracle, u, lam, f)
        assert np.abs(solution.center - exact).max() <= solution.error_bound + 1e-8
    assert mats.orthogonal
    assert mats.symmetric


def test_fourier_coefficients_match_dense_pairings(small_run, pentagon_small):
    _, _, mats, spectrum = small_run
    oracle = pentagon_small["oracle"]
    values, vectors = oracle_eigs(oracle, 1)
    u, lam = vectors[:, 0], float(values[0])
    f1, f2 = oracle_rhs(oracle, 5, u, lam)
    U1, U2 = oracle_kkt(oracle, u, lam, f1), oracle_kkt(oracle, u, lam, f2)
    P1 = [point_pairing(oracle_pairing(oracle, j, u, U1)) for j in range(5)]
    P2 = [point_pairing(oracle_pairing(oracle, j, u, U2)) for j in range(5)]
    trig = enclose_theta(5)
    for k in range(5):
        expected = fourier_coefficients(5, k, trig, P1, P2)
        for key in "ABCD":
            assert getattr(spectrum, key)[k].mid == pytest.approx(expected[key].mid, abs=1e-6)


@pytest.mark.parametrize("n,m", [(5, m) for m in range(2, 9)] + [(6, 4)])
def test_hessian_spectrum_matches_float_oracle(n, m):
    certifier = PolygonCertifier(n, m)
    eigs = unchecked_eigs(certifier)
    spectrum = certifier.hessian_spectrum(eigs, certifier.solve_material(eigs))
    expected = oracle_hessian(oracle_assemble(build_full_mesh(n, m)), n)
    scale = float(np.abs(expected).max())
    tol = 1e-8 * scale
    for mu, value in zip(spectrum.mu, expected):
        assert mu.lo - tol <= value <= mu.hi + tol
        assert mu.mid == pytest.approx(value, abs=tol + mu.rad)


def test_hessian_spectrum_structure(small_run):
    _, _, _, spectrum = small_run
    assert len(spectrum.mu) == 10
    assert spectrum.pair(0) == (ZERO, ZERO)
    # μ for k and n − k coincide
    for k in (1, 2):
        for a, b in zip(spectrum.pair(k), spectrum.pair(5 - k)):
            assert a.overlaps(b)
    for k in range(1, 5):
        low, high = spectrum.pair(k)
        assert low.lo <= high.hi
        # γ_k = −2|P|C_k = 2|P|D_k
        assert (-spectrum.C[k]).overlaps(spectrum.D[k])


def test_zero_mode_coefficients():
    rng = np.random.default_rng(2)
    P = [point_pairing(rng.normal(size=(2, 2))) for _ in range(5)]
    coef = fourier_coefficients(5, 0, enclose_theta(5), P, P)
    for key in "BCD":
        assert coef[key].contains(0.0)
    trace = sum(2 * (p[0][0].lo + p[1][1].lo) for p in P)
    assert coef["A"].mid == pytest.approx(trace, abs=1e-12)


def test_hessian_pair():
    low, high = hessian_pair(Interval(1.0, 1.0), Interval(3.0, 3.0), ZERO)
    assert low.contains(1.0) and high.contains(3.0)
    low, high = hessian_pair(Interval(2.0, 2.0), Interval(2.0, 2.0), Interval(1.0, 1.0))
    assert low.contains(1.0) and high.contains(3.0)


def test_coarse_mesh_fails_threshold():
    # the a-priori eigenvalue error at h = 1/2 reaches j21²
    with pytest.raises(CertificationError) as info:
        PolygonCertifier(5, 2).certify_eigs()
    assert info.value.stage == "eigs"


def test_first_eigenvalue_from_residual_and_spd():
    residual = PolygonCertifier(5, 32, krawczyk_max_dim=0)
    lam1, lam2 = residual.certify_eigs()
    assert lam1.method == "residual"
    assert residual.u1_positive
    assert lam1.value.hi < lam2.value.lo
    krawczyk = PolygonCertifier(5, 32)
    lam1_k, _ = krawczyk.certify_eigs()
    assert lam1_k.method == "krawczyk"
    assert lam1.value.overlaps(lam1_k.value)


def test_eigs_abort_without_positive_eigenvector(monkeypatch):
    monkeypatch.setattr(IntervalVector, "is_positive", lambda self: False)
    certifier = PolygonCertifier(5, 32, krawczyk_max_dim=0)
    with pytest.raises(CertificationError) as info:
        certifier.certify_eigs()
    assert info.value.stage == "eigs"
    assert not certifier.u1_positive


def test_threshold_is_j21_squared():
    mp.dps = 30
    threshold = eigen_threshold()
    assert threshold.lo <= float(mp.besseljzero(2, 1) ** 2) <= threshold.hi


@pytest.mark.parametrize(
    "kwargs",
    [dict(n=4, m=10), dict(n=11, m=10), dict(n=5, m=1), dict(n=5, m=10, gamma0=0.5), dict(n=5, m=10, threads=0)],
)
def test_invalid_parameters(kwargs):
    with pytest.raises(ValueError):
        PolygonCertifier(**kwargs)


def synthetic_spectrum(value: Interval) -> HessianSpectrum:
    return HessianSpectrum(n=5, A=[], B=[], C=[], D=[], alpha=[], beta=[], gamma=[], mu=[ZERO, ZERO] + [value] * 8)


@pytest.mark.parametrize("error,verdict,positive", [(0.5, Verdict.CERTIFIED, 8), (2.0, Verdict.NOT_CERTIFIED, 0)])
def test_finalize_counts_positive_intervals(error, verdict, positive):
    certifier = PolygonCertifier(5, 4)
    lam1, lam2 = Interval(7.85, 7.85), Interval(19.9, 19.9)
    budget = apriori.build_budget(5, 250, lam1, lam2)
    budget.mu_errors = {k: Interval(0.0, error) for k in range(5)}
    eigs = (EigenEnclosure(value=lam1), EigenEnclosure(value=lam2))
    report = certifier.finalize(eigs, synthetic_spectrum(Interval(1.0, 1.1)), budget)
    assert report.positive_count == positive
    assert report.verdict is verdict
    assert report.required_positive == 6
    assert report.final[:2] == [ZERO, ZERO]
    assert report.dof == 1 + 5 * 4 * 5 // 2
    assert report.smallest_nonzero.lo == pytest.approx(1.0 - error)

    summary = report.to_summary()
    payload = summary.model_dump(mode="json", by_alias=True)
    assert payload["schema"] == 1
    assert payload["verdict"] == verdict.value
    assert len(payload["rows"]) == 10
    assert payload["positive_count"] == positive
    assert CertificationSummary.model_validate(payload).verdict is verdict


def test_missing_budget_entry_is_never_positive():
    certifier = PolygonCertifier(5, 4)
    budget = apriori.build_budget(5, 250, Interval(7.85, 7.85), Interval(19.9, 19.9))
    budget.mu_errors = {}
    eigs = (EigenEnclosure(value=Interval(7.85, 7.85)), EigenEnclosure(value=Interval(19.9, 19.9)))
    report = certifier.finalize(eigs, synthetic_spectrum(Interval(1.0, 1.1)), budget)
    assert report.positive_count == 0
    assert report.verdict is Verdict.NOT_CERTIFIED


def test_scan_records_failures():
    rows = scan(5, [2])
    assert len(rows) == 1
    assert rows[0].m == 2
    assert rows[0].status == "failed:eigs"
    assert math.isnan(rows[0].mu_min_lo)


@pytest.mark.slow
def test_pipeline_runs_on_moderate_mesh():
    report = PolygonCertifier(5, 40).run()
    assert report.u1_positive
    assert report.lam1.value.hi < report.lam2.value.lo
    assert report.budget.total_error > 0.0


@pytest.mark.extended
@pytest.mark.parametrize("n,m", [(5, 250), (6, 380)])
def test_regular_polygon_is_certified(n, m):
    report = PolygonCertifier(n, m, threads=4).run()
    assert report.verdict is Verdict.CERTIFIED
    assert report.positive_count >= 2 * n - 4
    if n == 5:
        assert report.dof == 156876
