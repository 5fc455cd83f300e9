"""
Tests for core.apriori: the a-priori error chain and its convergence orders.
"""
from fractions import Fraction

import pytest
from mpmath import mp, mpf

from core.apriori import (
    INTERP_CONSTANTS,
    attach_material_bounds,
    build_budget,
    c_of_q,
    d2_singular_bound,
    eig_error,
    eigfun_errors,
    extension_constant,
    hessian_entry_errors,
    hessian_error_table,
    interp_constant_formula,
    interp_constant_table,
    polygon_area,
    relation_bootstrap,
    slice_triangle_lengths,
)
from core.errors import CertificationError
from core.interval import Interval

# representative discrete eigenvalues of the unit-circumradius pentagon
LAM1 = Interval(7.85, 7.85)
LAM2 = Interval(19.9, 19.9)


def h_of(m: int) -> Interval:
    return Interval.from_fraction(Fraction(1, m))


def test_eigenvalue_error_is_second_order():
    C1 = interp_constant_table(5)
    coarse, _ = eig_error(LAM1, C1, h_of(1000))
    fine, _ = eig_error(LAM1, C1, h_of(2000))
    assert 3.6 <= coarse.hi / fine.hi <= 4.4


def test_eigenvalue_enclosure_sits_below_discrete_value():
    bound, enclosure = eig_error(Interval(7.85, 7.86), interp_constant_table(5), h_of(250))
    assert enclosure.hi == 7.86
    assert enclosure.lo <= 7.85 - bound.hi
    assert bound.lo == 0.0


def test_eigenfunction_errors_and_bootstrap():
    C1, h = interp_constant_table(5), h_of(500)
    err, lam1 = eig_error(LAM1, C1, h)
    errors = eigfun_errors(LAM1, LAM2, err, C1, h)
    tightened = relation_bootstrap(errors, lam1, LAM1, LAM2, C1, h)
    assert tightened.gradu_err.hi <= errors.gradu_err.hi
    assert tightened.L2u_err.hi <= errors.L2u_err.hi
    assert tightened.lam_err.hi <= errors.lam_err.hi
    assert 0.0 < tightened.L2u_err.hi < tightened.gradu_err.hi < 1.0
    with pytest.raises(CertificationError):
        eigfun_errors(LAM2, LAM1, err, C1, h)


def test_interpolation_constants():
    for n in INTERP_CONSTANTS:
        table = interp_constant_table(n)
        assert table.lo == 0.0
        assert table.contains(float(INTERP_CONSTANTS[n]))
        # the closed form is valid but weaker than the certified table
        assert interp_constant_formula(slice_triangle_lengths(n)).lo > table.hi
    assert interp_constant_table(5, certified=Interval(0.0, 0.3)).hi == 0.3
    assert interp_constant_table(11, certified=Interval(0.0, 0.5)).hi == 0.5
    with pytest.raises(ValueError):
        interp_constant_table(11)
    with pytest.raises(ValueError):
        interp_constant_formula([1.0, 1.0, 2.0])
    with pytest.raises(ValueError):
        interp_constant_formula([1.0, 1.0])


def test_extension_constants():
    assert extension_constant(5) == Interval(4.0, 4.0)
    # 4 + 24·cos²(π/3) = 10
    C6 = extension_constant(6)
    assert mpf(C6.lo) <= mp.sqrt(10) <= mpf(C6.hi)
    with pytest.raises(ValueError):
        extension_constant(4)


def test_polygon_area():
    mp.dps = 30
    area = polygon_area(6)
    assert mpf(area.lo) <= 3 * mp.sqrt(3) / 2 <= mpf(area.hi)


def test_ray_constants():
    C1, D2 = Interval(0.0, 0.4), Interval(0.0, 50.0)
    value = c_of_q([Interval(-1.0, -1.0), Interval(1.0, 1.0)], C1, D2)
    # 2·0.4·√2·50 ≈ 56.57
    assert value.hi > 56.5
    assert c_of_q([], C1, D2) == Interval(0.0, 0.0)
    with pytest.raises(ValueError):
        c_of_q([1.0, 1.0], C1, D2)


def test_singular_bound_needs_gap():
    with pytest.raises(CertificationError):
        d2_singular_bound(LAM2, LAM1, extension_constant(5))
    assert d2_singular_bound(LAM1, LAM2, extension_constant(5)).hi > 0.0


def test_budget_record():
    budget = build_budget(5, 250, LAM1, LAM2)
    record = budget.to_record()
    assert record["mesh_size"]["hi"] >= 1 / 250
    assert all(entry["lo"] <= entry["hi"] for entry in record.values())
    assert set(budget.Cq_map) == {"U1", "U2"}
    assert budget.lam1.hi <= LAM1.hi
    with pytest.raises(ValueError):
        hessian_entry_errors(1, budget)
    attach_material_bounds(budget)
    with pytest.raises(ValueError):
        hessian_entry_errors(5, budget)
    table = hessian_error_table(budget)
    assert sorted(table) == list(range(5))
    assert budget.total_error == max(value.hi for value in table.values())
    assert "hessian_eigenvalue_error_k1" in budget.to_record()
    with pytest.raises(ValueError):
        build_budget(5, 0, LAM1, LAM2)


def test_hessian_error_is_first_order():
    coarse = hessian_error_table(build_budget(5, 2000, LAM1, LAM2))
    fine = hessian_error_table(build_budget(5, 4000, LAM1, LAM2))
    for k in (1, 2):
        assert 1.8 <= coarse[k].hi / fine[k].hi <= 2.2
