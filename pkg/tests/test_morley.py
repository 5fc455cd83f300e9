"""
Tests for core.morley: Morley assembly on the refined triangle and the interpolation-constant bound.
"""
import pytest

from core.apriori import INTERP_CONSTANTS
from core.errors import CertificationError
from core.interval import Interval
from core.morley import (
    MorleyCertifier,
    certify_interp_constant,
    flip_orientation,
    morley_assemble,
    morley_element,
    morley_interpolate,
    p1_element,
)

A, B = 0.3, 0.9


def square_x(x, y):
    return x * x


def grad_square_x(x, y):
    return 2 * x, 0.0


def forms(system, dofs):
    K = system.Kxx_morley.mid_matrix()
    M = system.Mxx_morley.mid_matrix()
    return float(dofs @ (K @ dofs)), float(dofs @ (M @ dofs))


@pytest.mark.parametrize("m", [1, 3, 6])
def test_quadratics_are_reproduced(m):
    system = morley_assemble(A, B, m)
    hessian, gradient = forms(system, morley_interpolate(square_x, grad_square_x, system))
    # ∫|D²x²|² = 4·area and ∫|∇x²|² = 4∫x² over (0,0), (1,0), (a,b)
    assert hessian == pytest.approx(2 * B, abs=1e-10)
    assert gradient == pytest.approx(2 * B * (1 + A + A * A) / 6, abs=1e-10)


def test_orientation_is_a_gauge():
    system = morley_assemble(A, B, 4)
    flipped = flip_orientation(system)
    assert flipped.orientation == -1
    xy = lambda x, y: x * y  # noqa: E731
    grad_xy = lambda x, y: (y, x)  # noqa: E731
    original = forms(system, morley_interpolate(xy, grad_xy, system))
    mirrored = forms(flipped, morley_interpolate(xy, grad_xy, flipped))
    assert original == pytest.approx(mirrored, abs=1e-12)
    # ∫|D²(xy)|² = 2·area
    assert original[0] == pytest.approx(B, abs=1e-10)


def test_dirichlet_vertices_are_removed():
    system = morley_assemble(A, B, 5)
    assert system.vertex_count == 21
    assert system.dof == system.vertex_count + system.edges.shape[0]
    assert system.Kxx0.shape == (system.dof - 3, system.dof - 3)
    assert system.Mxx0.shape == system.Kxx0.shape
    assert len(system.dirichlet_vertices) == 3


def test_element_matrices_are_symmetric():
    points = [(Interval(0.0, 0.0), Interval(0.0, 0.0)), (Interval(1.0, 1.0), Interval(0.0, 0.0)), (Interval(A, A), Interval(B, B))]
    element = morley_element(points)
    for lo, hi in element.values():
        assert (lo == lo.T).all() and (hi == hi.T).all()
        assert (lo <= hi).all()
    K, M, area = p1_element(points)
    assert area.contains(B / 2)
    with pytest.raises(ValueError):
        p1_element(points[::-1])


def test_degenerate_inputs_are_rejected():
    with pytest.raises(ValueError):
        morley_assemble(0.5, 0.0, 4)
    with pytest.raises(ValueError):
        morley_assemble(0.5, 0.5, 0)
    with pytest.raises(ValueError):
        morley_assemble(0.5, 0.5, 4, orientation=2)
    with pytest.raises(ValueError):
        MorleyCertifier(m=1)
    with pytest.raises(ValueError):
        MorleyCertifier(eps=0.0)


def test_certified_bound_for_equilateral_slice():
    bound = MorleyCertifier(m=8).certify_polygon(6)
    assert bound.lo == 0.0
    # the sharp constant of the equilateral triangle is just below the tabulated 0.32
    assert 0.3 < bound.hi < 0.5


def test_certification_fails_for_huge_margin():
    with pytest.raises(CertificationError):
        certify_interp_constant(A, B, 4, eps=1e6)


@pytest.mark.extended
@pytest.mark.parametrize("n", sorted(INTERP_CONSTANTS))
def test_table_of_interpolation_constants(n):
    bound = MorleyCertifier(m=32).certify_polygon(n)
    assert bound.hi <= float(INTERP_CONSTANTS[n]) + 5e-4


@pytest.mark.slow
def test_pentagon_slice_bound_with_default_margin():
    bound = MorleyCertifier(m=16).certify_polygon(5)
    assert 0.3 < bound.hi < 0.45
