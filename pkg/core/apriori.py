"""
Explicit a-priori error bounds, evaluated in interval arithmetic.

Every public function returns nonnegative enclosures whose upper endpoints are the bounds used
downstream. Bounds are carried as ``[0, hi]`` intervals so that products and sums of them stay
monotone in their inputs.

The chain is:

* interpolation constant C₁ (closed form or Morley-certified table);
* eigenvalue error and continuous enclosures of λ₁, λ₂;
* eigenfunction errors ‖∇(u₁−u₁,h)‖ and ‖u₁−u₁,h‖, tightened by the energy relation;
* the H² bound of the symmetrized singular ray solution and the ray constants C(q);
* solution errors of the singular material-derivative problems;
* the three-term error of every Hessian entry a(Uᵃ, Uᵇ).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from core.constants import enclose_theta, sincos_pi
from core.errors import CertificationError
from core.interval import Interval, iv_sqrt, upper
from core.log import get_logger, kv

logger = get_logger("apriori")

INTERP_PREFACTOR = Fraction("0.493")

# Morley-certified upper bounds of C(T) on the slice triangle with unit legs and apex 2π/n.
INTERP_CONSTANTS = {
    5: Fraction("0.3697"),
    6: Fraction("0.3200"),
    7: Fraction("0.3146"),
    8: Fraction("0.3107"),
    9: Fraction("0.3104"),
    10: Fraction("0.3128"),
}

BOOTSTRAP_PASSES = 2

ZERO = Interval(0.0, 0.0)


def _ub(x: "Interval | float") -> Interval:
    """Nonnegative upper-bound form ``[0, hi]``."""
    return Interval(0.0, max(upper(x), 0.0))


def _ub_min(*values: "Interval | float") -> Interval:
    return Interval(0.0, max(min(upper(v) for v in values), 0.0))


def _lower_sqrt(x: Interval) -> Interval:
    """Point enclosure of a lower bound of √x, for use as a divisor."""
    if x.lo <= 0.0:
        raise CertificationError(f"Cannot take a positive lower square root of {x}", stage="apriori")
    return Interval.point(iv_sqrt(Interval.point(x.lo)).lo)


# ---------------------------------------------------------------------------
# interpolation constants
# ---------------------------------------------------------------------------


def slice_triangle_lengths(n: int) -> tuple[Interval, Interval, Interval]:
    """Edge lengths (1, 1, 2 sin(π/n)) of the slice triangle with unit legs."""
    sin_half, _ = sincos_pi(1, n)
    one = Interval(1.0, 1.0)
    return one, one, sin_half * 2


def interp_constant_formula(lengths: Sequence["Interval | float"]) -> Interval:
    """
    Closed-form upper bound of C(T)/h for the P1 interpolation error on one triangle.

    With s ≤ L ≤ ℓ the sorted edge lengths, α = s/L and τ the angle between the two shorter edges,

        C(T) = 0.493·L·(1+α²+√(1+2α²cos2τ+α⁴)) / √(2(1+α²−√(1+2α²cos2τ+α⁴)))

    and h = L is the median edge, so the result is scale free.

    Args:
        lengths (Sequence): The three edge lengths, as floats or enclosures.

    Returns:
        Interval: Enclosure of C(T)/h.
    """
    if len(lengths) != 3:
        raise ValueError(f"Unknown triangle with {len(lengths)!r} edges, must have 3")
    edges = sorted((Interval.hull(x) for x in lengths), key=lambda x: x.mid)
    s, L, ell = edges
    if s.lo <= 0.0 or not (ell.hi < (s + L).lo):
        raise ValueError(f"Unknown triangle with edges {[str(e) for e in edges]}, must be non-degenerate")
    alpha = s / L
    cos_tau = (s.square() + L.square() - ell.square()) / (s * L * 2)
    cos_2tau = cos_tau.square() * 2 - 1
    a2 = alpha.square()
    radicand = a2 * cos_2tau * 2 + 1 + a2.square()
    root = iv_sqrt(Interval(max(radicand.lo, 0.0), radicand.hi))
    gap = a2 + 1 - root
    if gap.lo <= 0.0:
        raise ValueError("Unknown triangle shape, the interpolation formula degenerates")
    return Interval.from_fraction(INTERP_PREFACTOR) * (a2 + 1 + root) / iv_sqrt(gap * 2)


def interp_constant_table(n: int, certified: Optional[Interval] = None) -> Interval:
    """
    Certified interpolation constant C₁ for the n-gon slice triangle.

    Args:
        n (int): Number of polygon vertices.
        certified (Interval, optional): A freshly Morley-certified bound; preferred when tighter.

    Returns:
        Interval: ``[0, bound]``.
    """
    candidates = []
    if certified is not None:
        candidates.append(upper(certified))
    if n in INTERP_CONSTANTS:
        candidates.append(Interval.from_fraction(INTERP_CONSTANTS[n]).hi)
    if not candidates:
        raise ValueError(f"Unknown polygon size n={n!r}, must be in {sorted(INTERP_CONSTANTS)} or come with a certified bound")
    return Interval(0.0, min(candidates))


# ---------------------------------------------------------------------------
# eigenvalues and eigenfunctions
# ---------------------------------------------------------------------------


def eig_error(lam_kh: Interval, C1: "Interval | float", h: "Interval | float") -> tuple[Interval, Interval]:
    """
    Bound |λ_k − λ_k,h| ≤ λ_k,h³C₁²h²/(1+C₁²h²λ_k,h²) and the continuous enclosure it implies.

    The bound increases with λ_k,h, so it is evaluated at the upper endpoint. Since λ_k,h ≥ λ_k
    the continuous eigenvalue lies in [λ_k,h − bound, λ_k,h].

    Returns:
        tuple[Interval, Interval]: (bound, continuous enclosure).
    """
    lam = Interval.point(lam_kh.hi)
    ch2 = (_ub(C1) * _ub(h)).square()
    bound = _ub(lam * lam.square() * ch2 / (ch2 * lam.square() + 1))
    enclosure = Interval((Interval.point(lam_kh.lo) - bound.hi).lo, lam_kh.hi)
    return bound, enclosure


@dataclass(frozen=True)
class EigenfunctionErrors:
    """Bounds on ‖∇(u₁−u₁,h)‖ and ‖u₁−u₁,h‖ with the eigenvalue error they were derived from."""

    lam_err: Interval
    gradu_err: Interval
    L2u_err: Interval


def eigfun_errors(lam1h: Interval, lam2h: Interval, lam1_err: Interval, C1: Interval, h: Interval) -> EigenfunctionErrors:
    """
    Eigenfunction error chain through the Galerkin projection p_h of u₁.

    * ‖∇(u₁−p_h)‖ ≤ C₁λ₁h and ‖u₁−p_h‖ ≤ C₁²λ₁h².
    * p_h = a·u₁,h + p̄_h with p̄_h ⊥ u₁,h, and
      ‖∇p̄_h‖ ≤ √λ₂,h/(λ₂,h−λ₁,h)·(|λ₁−λ₁,h| + λ₁,h‖u₁−p_h‖), ‖p̄_h‖ ≤ ‖∇p̄_h‖/√λ₂,h.
    * |a−1| ≤ ‖p̄_h‖² + ‖u₁−p_h‖(2+‖u₁−p_h‖).

    Uses λ₁ ≤ λ₁,h.

    Raises:
        CertificationError: If λ₂,h − λ₁,h is not certified positive.
    """
    gap = lam2h - lam1h
    if gap.lo <= 0.0:
        raise CertificationError(f"Discrete spectral gap {gap} is not certified positive", stage="apriori")
    lam1 = _ub(lam1h)
    g_p = _ub(C1 * lam1 * h)
    l_p = _ub(C1 * g_p * h)
    g_bar = _ub(iv_sqrt(lam2h) / gap * (_ub(lam1_err) + lam1 * l_p))
    l_bar = _ub(g_bar / iv_sqrt(lam2h))
    deviation = _ub(l_bar.square() + l_p * (l_p + 2))
    gradu = _ub(g_p + deviation * iv_sqrt(lam1) + g_bar)
    L2u = _ub(l_p + deviation + l_bar)
    logger.debug(kv(stage="eigfun", g_p=g_p.hi, l_p=l_p.hi, g_bar=g_bar.hi, gradu=gradu.hi, L2u=L2u.hi))
    return EigenfunctionErrors(lam_err=_ub(lam1_err), gradu_err=gradu, L2u_err=L2u)


def relation_bootstrap(
    errors: EigenfunctionErrors,
    lam1: Interval,
    lam1h: Interval,
    lam2h: Interval,
    C1: Interval,
    h: Interval,
    passes: int = BOOTSTRAP_PASSES,
) -> EigenfunctionErrors:
    """
    Tighten the eigen-errors with ‖∇(u₁−u₁,h)‖² − λ₁‖u₁−u₁,h‖² = λ₁,h − λ₁.

    Each pass replaces

    * G by min(G, √(E + λ₁,h·L²)),
    * E by min(E, G²),
    * L by min(L, G/√λ₁),

    then reruns the projection chain with the new E and keeps the smaller bounds. No bound
    increases from one pass to the next.

    Args:
        errors (EigenfunctionErrors): Starting bounds (E, G, L).
        lam1 (Interval): Continuous enclosure of λ₁.
    """
    sqrt_lam1 = _lower_sqrt(lam1)
    current = errors
    for index in range(passes):
        E, G, L = current.lam_err, current.gradu_err, current.L2u_err
        G = _ub_min(G, iv_sqrt(E + _ub(lam1h) * L.square()))
        E = _ub_min(E, G.square())
        L = _ub_min(L, G / sqrt_lam1)
        chained = eigfun_errors(lam1h, lam2h, E, C1, h)
        current = EigenfunctionErrors(
            lam_err=E,
            gradu_err=_ub_min(G, chained.gradu_err),
            L2u_err=_ub_min(L, chained.L2u_err),
        )
        logger.debug(kv(stage="bootstrap", index=index, lam_err=E.hi, gradu=current.gradu_err.hi, L2u=current.L2u_err.hi))
    return current


# ---------------------------------------------------------------------------
# singular ray solutions
# ---------------------------------------------------------------------------


def extension_constant(n: int) -> Interval:
    """C₅ = 4 and C_n = √(4 + 24cos²(2π/n)) for n ≥ 6."""
    if n < 5:
        raise ValueError(f"Unknown polygon size n={n!r}, must be >= 5")
    if n == 5:
        return Interval(4.0, 4.0)
    _, cos_t = sincos_pi(2, n)
    return iv_sqrt(cos_t.square() * 24 + 4)


def ray_trace_bound(lam1: Interval) -> Interval:
    """
    Bound on ‖∂_r u₁‖_{L²(S)} along one ray.

    Uses ‖w‖²_{L²(S)} ≤ ‖w‖(‖w‖ + 2‖∇w‖) for w = ∂_r u₁ with ‖w‖ ≤ ‖∇u₁‖ = √λ₁ and
    ‖∇w‖ ≤ ‖D²u₁‖ = λ₁.
    """
    lam = _ub(lam1)
    root = iv_sqrt(lam)
    return _ub(iv_sqrt(root * (root + lam * 2)))


def d2_singular_bound(lam1: Interval, lam2: Interval, Cn: Interval) -> Interval:
    """
    Upper bound X of ‖D²Ū‖ on the half polygon, Ū the symmetrized singular solution on S₀.

    X solves X² + C ≤ B + A√(X² + C), hence X² ≤ ((A + √(A² + 4B))/2)² − C, with

    * A = (C_n²/2)·√((λ₁² + λ₁)/2),
    * C ≥ ‖∇Ū‖², from ‖∇Ū‖ ≤ λ₂/(λ₂−λ₁)·‖∂_r u₁‖_{L²(S)},
    * B = λ₁²‖Ū‖² + c₀²/2 + C with ‖Ū‖ ≤ ‖∇Ū‖/√λ₂ and c₀ < λ₁/4.

    The same float C enters B and is subtracted at the end.

    Raises:
        CertificationError: If the gap is not positive or the radicand is negative.
    """
    gap = lam2 - lam1
    if gap.lo <= 0.0:
        raise CertificationError(f"Continuous spectral gap {gap} is not certified positive", stage="apriori")
    lam = _ub(lam1)
    A = _ub(Cn.square() / 2 * iv_sqrt((lam.square() + lam) / 2))
    trace = ray_trace_bound(lam1)
    grad = _ub(lam2 / gap * trace)
    l2 = _ub(grad / _lower_sqrt(lam2))
    C = Interval.point(grad.square().hi)
    c0 = lam / 4
    B = _ub(lam.square() * l2.square() + c0.square() / 2 + C)
    Y = (A + iv_sqrt(A.square() + B * 4)) / 2
    x2 = Y.square() - C
    if x2.hi < 0.0:
        logger.error(f"Negative radicand {x2} in the singular H2 bound")
        raise CertificationError(f"Negative radicand {x2} in the singular H2 bound", stage="apriori")
    X = _ub(iv_sqrt(Interval(max(x2.lo, 0.0), x2.hi)))
    logger.debug(kv(stage="d2_singular", A=A.hi, B=B.hi, C=C.hi, X=X.hi))
    return X


def c_of_q(q: Sequence["Interval | float"], C1: Interval, D2: Interval) -> Interval:
    """
    C(q) = Σ|q_i|·C₁·√2·D2 for a ray distribution Σ q_i ∫_{S_i} ∂_r u₁ v.

    Raises:
        ValueError: If the enclosure of Σq_i excludes 0.
    """
    if not q:
        return ZERO
    boxes = [Interval.hull(x) for x in q]
    total = sum(boxes, ZERO)
    if not total.contains(0.0):
        raise ValueError(f"Unknown ray coefficients with sum {total}, must sum to 0")
    weight = sum((_ub(abs(x)) for x in boxes), ZERO)
    return _ub(weight * C1 * iv_sqrt(Interval(2.0, 2.0)) * D2)


# ---------------------------------------------------------------------------
# singular problems
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SingularProblem:
    """
    Data bounds of −ΔU − λ₁U = f_reg + Σ q_i ∂_r u₁|_{S_i}, U ⊥ u₁.

    ``f_err`` bounds ‖f − f_h‖ in the dual of the H¹₀ seminorm.
    """

    name: str
    f_reg: Interval
    q: tuple[Interval, ...]
    f_err: Interval


@dataclass(frozen=True)
class SingularBounds:
    """Constituent bounds of the solution error of one singular problem."""

    name: str
    Cq: Interval
    U_grad: Interval
    U_L2: Interval
    interp_grad: Interval
    interp_L2: Interval
    V_grad: Interval
    V_L2: Interval
    norm_grad: Interval
    norm_L2: Interval
    disc_grad: Interval
    disc_L2: Interval
    grad_err: Interval
    L2_err: Interval

    @property
    def tilde_grad(self) -> Interval:
        return _ub(self.V_grad + self.norm_grad)

    @property
    def tilde_L2(self) -> Interval:
        return _ub(self.V_L2 + self.norm_L2)


@dataclass
class ErrorBudget:
    """
    Every a-priori constant and bound of one (n, m) run.

    All interval fields are ``[0, hi]`` upper bounds except the λ enclosures.
    """

    n: int
    m: int
    C1: Interval
    h: Interval
    lam1h: Interval
    lam2h: Interval
    lam1: Interval
    lam2: Interval
    lam1_err: Interval
    lam2_err: Interval
    gradu_err: Interval
    L2u_err: Interval
    Cn: Interval
    trace_bound: Interval
    D2_US0: Interval
    Cq_map: dict[str, Interval] = field(default_factory=dict)
    material: dict[str, SingularBounds] = field(default_factory=dict)
    hess_term_errors: dict[int, dict[str, Interval]] = field(default_factory=dict)
    mu_errors: dict[int, Interval] = field(default_factory=dict)

    def to_record(self) -> dict[str, dict[str, float]]:
        """JSON-ready mapping of descriptive keys to ``{"lo", "hi"}`` records."""
        entries: dict[str, Interval] = {
            "interpolation_constant": self.C1,
            "mesh_size": self.h,
            "first_discrete_eigenvalue": self.lam1h,
            "second_discrete_eigenvalue": self.lam2h,
            "first_eigenvalue": self.lam1,
            "second_eigenvalue": self.lam2,
            "eigenvalue_error": self.lam1_err,
            "second_eigenvalue_error": self.lam2_err,
            "eigenfunction_gradient_error": self.gradu_err,
            "eigenfunction_l2_error": self.L2u_err,
            "extension_constant": self.Cn,
            "ray_trace_bound": self.trace_bound,
            "singular_h2_bound": self.D2_US0,
        }
        for name, value in self.Cq_map.items():
            entries[f"ray_constant_{name}"] = value
        for name, bounds in self.material.items():
            entries[f"solution_gradient_error_{name}"] = bounds.grad_err
            entries[f"solution_l2_error_{name}"] = bounds.L2_err
        for k in sorted(self.hess_term_errors):
            for key, value in self.hess_term_errors[k].items():
                entries[f"hessian_{key}_k{k}"] = value
        for k in sorted(self.mu_errors):
            entries[f"hessian_eigenvalue_error_k{k}"] = self.mu_errors[k]
        return {key: {"lo": value.lo, "hi": value.hi} for key, value in entries.items()}

    @property
    def total_error(self) -> float:
        """Largest Hessian eigenvalue error over all k."""
        return max((e.hi for e in self.mu_errors.values()), default=0.0)


def _problem_norms(problem: SingularProblem, budget: ErrorBudget) -> tuple[Interval, Interval, Interval]:
    """(‖f‖ dual, ‖∇U‖, ‖U‖) from the continuous Poincaré inequality on u₁⊥."""
    sqrt_lam1 = _lower_sqrt(budget.lam1)
    ray_weight = sum((_ub(abs(x)) for x in problem.q), ZERO)
    f_dual = _ub(problem.f_reg / sqrt_lam1 + ray_weight * budget.trace_bound)
    gap = budget.lam2 - budget.lam1
    U_grad = _ub(budget.lam2 / gap * f_dual)
    U_L2 = _ub(U_grad / _lower_sqrt(budget.lam2))
    return f_dual, U_grad, U_L2


def singular_solution_error(problem: SingularProblem, budget: ErrorBudget) -> SingularBounds:
    """
    Gradient and L² error between a singular problem's solution U and its discrete U_h.

    Three blocks add up:

    * interpolation: ‖∇(U−V)‖ ≤ C₁h‖λ₁U + f_reg‖ + C(q)h, and ‖U−V‖ ≤ C₁h·‖∇(U−V)‖, with V the
      Galerkin projection of U;
    * normalization: ‖Ṽ−V‖ ≤ ‖U−V‖ + ‖V‖·‖u₁−u₁,h‖ and ‖∇(Ṽ−V)‖ ≤ √λ₁,h·‖Ṽ−V‖;
    * discrete: ‖∇(Ṽ−U_h)‖ ≤ √λ₂,h/(λ₂,h−λ₁,h)·(|λ₁−λ₁,h|‖U‖ + λ₁,h‖U−V‖ + √(1+λ₂,h)‖f−f_h‖).

    ‖V‖ is the smaller of ‖U‖ + ‖U−V‖ and ‖∇V‖/√λ₁.

    Raises:
        CertificationError: If λ₂,h − λ₁,h is not certified positive.
    """
    gap_h = budget.lam2h - budget.lam1h
    if gap_h.lo <= 0.0:
        raise CertificationError(f"Discrete spectral gap {gap_h} is not certified positive", stage="apriori")
    Cq = c_of_q(problem.q, budget.C1, budget.D2_US0)
    _, U_grad, U_L2 = _problem_norms(problem, budget)
    C1h = _ub(budget.C1 * budget.h)
    lam1 = _ub(budget.lam1)
    lam1h = _ub(budget.lam1h)

    interp_grad = _ub(C1h * (lam1 * U_L2 + problem.f_reg) + Cq * budget.h)
    interp_L2 = _ub(C1h * interp_grad)
    V_grad = U_grad
    V_L2 = _ub_min(U_L2 + interp_L2, V_grad / _lower_sqrt(budget.lam1))
    norm_L2 = _ub(interp_L2 + V_L2 * budget.L2u_err)
    norm_grad = _ub(iv_sqrt(lam1h) * norm_L2)
    bracket = _ub(budget.lam1_err * U_L2 + lam1h * interp_L2 + iv_sqrt(_ub(budget.lam2h) + 1) * problem.f_err)
    disc_grad = _ub(iv_sqrt(budget.lam2h) / gap_h * bracket)
    disc_L2 = _ub(bracket / gap_h)
    bounds = SingularBounds(
        name=problem.name,
        Cq=Cq,
        U_grad=U_grad,
        U_L2=U_L2,
        interp_grad=interp_grad,
        interp_L2=interp_L2,
        V_grad=V_grad,
        V_L2=V_L2,
        norm_grad=norm_grad,
        norm_L2=norm_L2,
        disc_grad=disc_grad,
        disc_L2=disc_L2,
        grad_err=_ub(interp_grad + norm_grad + disc_grad),
        L2_err=_ub(C1h * interp_grad + norm_L2 + disc_L2),
    )
    logger.debug(kv(stage="singular", name=problem.name, Cq=Cq.hi, grad=bounds.grad_err.hi, L2=bounds.L2_err.hi))
    return bounds


def material_problems(budget: ErrorBudget) -> tuple[SingularProblem, SingularProblem]:
    """
    Data bounds of the two material-derivative problems for moving the vertex (1, 0).

    * ‖f_reg‖ uses |∇φ| = 1/sinθ on the two slices at the vertex and ‖D²u₁‖ = λ₁.
    * The rays carry (−cotθ, −cotθ, 2cotθ) on (S₁, S_{n−1}, S₀) and (−1, +1) on (S₁, S_{n−1}).
    * ‖f − f_h‖ pairs the Frobenius norm of the gradient-form coefficients with
      ‖∇(u₁−u₁,h)‖, plus the mass term through |λ₁−λ₁,h| and ‖u₁−u₁,h‖.
    """
    trig = enclose_theta(budget.n)
    cot = trig.cot_t
    lam1 = _ub(budget.lam1)
    sqrt_lam1 = _lower_sqrt(budget.lam1)
    mass_coef = Interval.from_fraction(Fraction(2, budget.n))
    beta1 = iv_sqrt(cot.square() * 2 + 4)
    beta2 = iv_sqrt(cot.square() * 4 + 2)
    mass_err = _ub(mass_coef * (budget.lam1_err + _ub(budget.lam1h) * budget.L2u_err) / sqrt_lam1)
    u1 = SingularProblem(
        name="U1",
        f_reg=_ub(lam1 * 2 / trig.sin_t + lam1 * mass_coef),
        q=(-cot, -cot, cot * 2),
        f_err=_ub(beta1 * budget.gradu_err + mass_err),
    )
    u2 = SingularProblem(
        name="U2",
        f_reg=_ub(lam1 * 2 / trig.sin_t),
        q=(Interval(-1.0, -1.0), Interval(1.0, 1.0)),
        f_err=_ub(beta2 * budget.gradu_err),
    )
    return u1, u2


def _cos_k(n: int, multiple: int) -> Interval:
    return sincos_pi(2 * multiple, n)[1]


def _sin_k(n: int, multiple: int) -> Interval:
    return sincos_pi(2 * multiple, n)[0]


def w_problems(k: int, budget: ErrorBudget) -> dict[str, SingularProblem]:
    """
    Data bounds of the dual problems W whose pairing with U¹, U² gives A_k, B_k and C_k.

    With a_j the mass coefficient and c_j the second-derivative coefficient of slice j,
    ‖f_reg‖ ≤ max|a_j|·λ₁ + √2·max|c_j|/sinθ·λ₁, the √2 being the Frobenius norm of the
    rotated second-derivative stencil. The ray part is kept for A_k and dropped by parity for
    B_k and C_k.
    """
    n = budget.n
    trig = enclose_theta(n)
    cot = trig.cot_t
    lam1 = _ub(budget.lam1)
    sqrt2 = iv_sqrt(Interval(2.0, 2.0))
    sqrt_lam1 = _lower_sqrt(budget.lam1)
    one_minus = 1 - _cos_k(n, k)

    cos_sum = [_cos_k(n, (j + 1) * k) + _cos_k(n, j * k) for j in range(n)]
    cos_diff = [_cos_k(n, (j + 1) * k) - _cos_k(n, j * k) for j in range(n)]
    sin_diff = [_sin_k(n, (j + 1) * k) - _sin_k(n, j * k) for j in range(n)]

    def largest(values: list[Interval]) -> Interval:
        return Interval(0.0, max(v.mag for v in values))

    def problem(name: str, mass: Interval, second: Interval, q: tuple[Interval, ...]) -> SingularProblem:
        f_reg = _ub(mass * lam1 + sqrt2 * second / trig.sin_t * lam1)
        mass_err = _ub(mass * (budget.lam1_err + _ub(budget.lam1h) * budget.L2u_err) / sqrt_lam1)
        f_err = _ub(mass_err + second / trig.sin_t * budget.gradu_err)
        return SingularProblem(name=name, f_reg=f_reg, q=q, f_err=f_err)

    rays_A = tuple(-(cot * 2 * _cos_k(n, j * k) * one_minus) for j in range(n))
    return {
        "A": problem(f"W_A{k}", largest(cos_sum), largest(cos_diff), rays_A),
        "B": problem(f"W_B{k}", _ub(abs(cot)) * largest(cos_diff), largest(cos_diff), ()),
        "C": problem(f"W_C{k}", _ub(abs(cot)) * largest(sin_diff), largest(sin_diff), ()),
    }


# ---------------------------------------------------------------------------
# Hessian entries
# ---------------------------------------------------------------------------


def entry_error(
    a: SingularBounds,
    b: SingularBounds,
    lam1: Interval,
    lam1_err: Interval,
    uh_grad_b: Optional[Interval] = None,
) -> Interval:
    """
    Bound |a(Uᵃ, Uᵇ) − a_h(U_hᵃ, U_hᵇ)| as the sum of three terms.

    * interpolation: ‖∇(Uᵃ−Vᵃ)‖·‖∇(Uᵇ−Vᵇ)‖;
    * normalization: ‖∇Vᵃ‖‖∇(Vᵇ−Ṽᵇ)‖ + ‖∇Ṽᵇ‖‖∇(Vᵃ−Ṽᵃ)‖ + |λ₁−λ₁,h|‖Ṽᵃ‖‖Ṽᵇ‖
      + λ₁‖Ṽᵇ‖‖Vᵃ−Ṽᵃ‖ + λ₁‖Vᵃ‖‖Vᵇ−Ṽᵇ‖;
    * discrete: ‖∇Ṽᵃ‖‖∇(Ṽᵇ−U_hᵇ)‖ + ‖∇U_hᵇ‖‖∇(Ṽᵃ−U_hᵃ)‖.

    ``uh_grad_b`` is a computed ‖∇U_hᵇ‖; without it ‖∇Ṽᵇ‖ + ‖∇(Ṽᵇ−U_hᵇ)‖ is used.
    """
    lam = _ub(lam1)
    first = a.interp_grad * b.interp_grad
    second = (
        a.V_grad * b.norm_grad
        + b.tilde_grad * a.norm_grad
        + _ub(lam1_err) * a.tilde_L2 * b.tilde_L2
        + lam * b.tilde_L2 * a.norm_L2
        + lam * a.V_L2 * b.norm_L2
    )
    uh_b = _ub(uh_grad_b) if uh_grad_b is not None else _ub(b.tilde_grad + b.disc_grad)
    third = a.tilde_grad * b.disc_grad + uh_b * a.disc_grad
    return _ub(first + second + third)


def hessian_entry_errors(k: int, budget: ErrorBudget, uh_grad: Optional[dict[str, Interval]] = None) -> dict[str, Interval]:
    """
    Error bounds of A_k, B_k and C_k, written pairings of a dual solution W with U¹ or U².

    Args:
        k (int): Fourier index, 0 ≤ k < n.
        budget (ErrorBudget): Budget with the material-derivative bounds ``"U1"`` and ``"U2"``.
        uh_grad (dict, optional): Computed ‖∇U_h‖ of ``"U1"`` and ``"U2"``.

    Returns:
        dict[str, Interval]: Bounds keyed ``"A"``, ``"B"``, ``"C"``; also stored in the budget.
    """
    if not 0 <= k < budget.n:
        raise ValueError(f"Unknown Fourier index k={k!r}, must be in [0, {budget.n})")
    if "U1" not in budget.material or "U2" not in budget.material:
        raise ValueError("Unknown material-derivative bounds, run attach_material_bounds first")
    uh_grad = uh_grad or {}
    pairs = {"A": "U1", "B": "U2", "C": "U1"}
    duals = w_problems(k, budget)
    out = {}
    for key, material in pairs.items():
        w = singular_solution_error(duals[key], budget)
        out[key] = entry_error(w, budget.material[material], budget.lam1, budget.lam1_err, uh_grad.get(material))
    budget.hess_term_errors[k] = out
    logger.debug(kv(stage="hessian_entries", k=k, A=out["A"].hi, B=out["B"].hi, C=out["C"].hi))
    return out


def polygon_area(n: int) -> Interval:
    """|P_n| = ½·n·sin(2π/n) for the polygon inscribed in the unit circle."""
    return enclose_theta(n).sin_t * n / 2


def slice_energy_error(budget: ErrorBudget) -> Interval:
    """Bound on |∫_{T₀}(∂u₁)² − ∫_{T₀}(∂u₁,h)²| for one directional derivative."""
    G = budget.gradu_err
    return _ub(G * (iv_sqrt(_ub(budget.lam1h) / budget.n) * 2 + G))


def spectrum_error(k: int, budget: ErrorBudget, terms: dict[str, Interval]) -> Interval:
    """
    Bound on |μ − μ_h| for the pair of Hessian eigenvalues with index k.

    α, β and γ are perturbed by
    E_α = (2n(1−cos kθ)/sinθ)·E_T + 2|P|E_A, E_β likewise with E_B, E_γ = 2|P|E_C, and μ are
    the eigenvalues of [[α, γ], [γ, β]], so |δμ| ≤ √(E_α² + E_β² + 2E_γ²).
    """
    n = budget.n
    trig = enclose_theta(n)
    area2 = polygon_area(n) * 2
    coef = _ub((1 - _cos_k(n, k)) * (2 * n) / trig.sin_t)
    e_t = slice_energy_error(budget)
    e_alpha = _ub(coef * e_t + area2 * terms["A"])
    e_beta = _ub(coef * e_t + area2 * terms["B"])
    e_gamma = _ub(area2 * terms["C"])
    total = _ub(iv_sqrt(e_alpha.square() + e_beta.square() + e_gamma.square() * 2))
    budget.mu_errors[k] = total
    return total


# ---------------------------------------------------------------------------
# budget assembly
# ---------------------------------------------------------------------------


def build_budget(n: int, m: int, lam1h: Interval, lam2h: Interval, C1: Optional[Interval] = None) -> ErrorBudget:
    """
    Evaluate every constant of the a-priori chain for a certified discrete pair (λ₁,h, λ₂,h).

    Args:
        n (int): Number of polygon vertices.
        m (int): Subdivisions per ray; h = 1/m.
        lam1h (Interval): Certified enclosure of λ₁,h.
        lam2h (Interval): Certified enclosure of λ₂,h.
        C1 (Interval, optional): Interpolation constant; the table value by default.

    Returns:
        ErrorBudget: Budget without material or Hessian entries.
    """
    if m < 1:
        raise ValueError(f"Unknown subdivision count m={m!r}, must be >= 1")
    C1 = _ub(C1) if C1 is not None else interp_constant_table(n)
    h = Interval.from_fraction(Fraction(1, m))
    lam1_err, lam1 = eig_error(lam1h, C1, h)
    lam2_err, lam2 = eig_error(lam2h, C1, h)
    if lam1.lo <= 0.0:
        raise CertificationError(f"Continuous eigenvalue enclosure {lam1} is not positive", stage="apriori")
    errors = eigfun_errors(lam1h, lam2h, lam1_err, C1, h)
    errors = relation_bootstrap(errors, lam1, lam1h, lam2h, C1, h)
    # E may only shrink, so the enclosure of λ₁ tightens with it
    lam1 = Interval(max(lam1.lo, (Interval.point(lam1h.lo) - errors.lam_err.hi).lo), lam1.hi)
    Cn = extension_constant(n)
    trace = ray_trace_bound(lam1)
    D2 = d2_singular_bound(lam1, lam2, Cn)
    budget = ErrorBudget(
        n=n,
        m=m,
        C1=C1,
        h=h,
        lam1h=lam1h,
        lam2h=lam2h,
        lam1=lam1,
        lam2=lam2,
        lam1_err=errors.lam_err,
        lam2_err=lam2_err,
        gradu_err=errors.gradu_err,
        L2u_err=errors.L2u_err,
        Cn=Cn,
        trace_bound=trace,
        D2_US0=D2,
    )
    for problem in material_problems(budget):
        budget.Cq_map[problem.name] = c_of_q(problem.q, C1, D2)
    logger.debug(kv(stage="budget", n=n, m=m, C1=C1.hi, lam1_err=errors.lam_err.hi, gradu=errors.gradu_err.hi, D2=D2.hi))
    return budget


def attach_material_bounds(budget: ErrorBudget) -> dict[str, SingularBounds]:
    """Compute and store the solution-error bounds of the two material-derivative problems."""
    for problem in material_problems(budget):
        budget.material[problem.name] = singular_solution_error(problem, budget)
    return budget.material


def hessian_error_table(budget: ErrorBudget, uh_grad: Optional[dict[str, Interval]] = None) -> dict[int, Interval]:
    """Entry and eigenvalue error bounds for every k; k = 0 is included for the record only."""
    if not budget.material:
        attach_material_bounds(budget)
    for k in range(budget.n):
        terms = hessian_entry_errors(k, budget, uh_grad)
        spectrum_error(k, budget, terms)
    return dict(budget.mu_errors)
