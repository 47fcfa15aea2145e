import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jacobi_linfty.catalog import flowout_patch, legendrian_patch, poisson_as_jacobi
from jacobi_linfty.deformation import (
    MAX_ORDER,
    FormalSeries,
    GaugeFamily,
    NotCocycleError,
    cocycle_basis,
    delta_mc,
    delta_mc_via_pushforward,
    kuranishi,
    mc_of_series,
    mc_series,
    mc_via_pushforward,
    prolong_order_two,
    solve_m1,
    verify_formal_mc,
    verify_gauge,
)
from jacobi_linfty.operators import Patch, random_polynomial, random_structure
from jacobi_linfty.ring import Polynomial
from jacobi_linfty.vdata import NormalMultiSection, VData, derived_mk, is_coisotropic_section

from conftest import random_normal, random_patch


def vec(patch, comps):
    return NormalMultiSection.vector(patch, [patch.poly(c) for c in comps])


def test_mc_of_zero_section():
    V = legendrian_patch(1)
    assert mc_series(V, NormalMultiSection.zero(V.patch, 1)).is_zero()


def test_mc_with_one_fiber_direction(rng):
    patch = Patch(("x1", "x2"), ("y",))
    V = VData(random_structure(patch, rng))
    assert mc_series(V, random_normal(patch, 1, rng)).is_zero()


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10**6))
def test_mc_series_is_pushforward(seed):
    rng = random.Random(seed)
    patch = random_patch(rng)
    V = VData(random_structure(patch, rng))
    s = random_normal(patch, 1, rng)
    assert mc_series(V, s) == mc_via_pushforward(V, s)


def test_mc_decides_legendrian_sections(rng):
    V = legendrian_patch(1)
    patch = V.patch
    for _ in range(6):
        s = random_normal(patch, 1, rng)
        assert mc_series(V, s).is_zero() == is_coisotropic_section(V, s)
    # a 1-jet graph is Legendrian
    assert mc_series(V, vec(patch, ["x1^3", "3*x1^2"])).is_zero()


def test_delta_mc_basics(rng):
    V = flowout_patch(1)
    patch = V.patch
    lam = patch.poly("x1*u + u^2")
    zero = NormalMultiSection.zero(patch, 1)
    assert delta_mc(V, zero, lam) == derived_mk(V, [NormalMultiSection.function(patch, lam)])
    assert delta_mc(V, zero, patch.poly("p1^2*x1")).is_zero()


def test_delta_identity_on_coisotropic_sections(rng):
    V = legendrian_patch(1)
    patch = V.patch
    for comps in (["0", "0"], ["x1^2", "2*x1"], ["1 - x1^3", "-3*x1^2"]):
        s = vec(patch, comps)
        assert mc_series(V, s).is_zero()
        for _ in range(3):
            lam = random_polynomial(patch.variables, rng)
            assert delta_mc(V, s, lam) == delta_mc_via_pushforward(V, s, lam)


def test_kuranishi_examples():
    V = legendrian_patch(1)
    assert kuranishi(V, NormalMultiSection.zero(V.patch, 1)).is_zero()
    for s in cocycle_basis(V, 2):
        assert kuranishi(V, s).is_zero()
    with pytest.raises(NotCocycleError):
        kuranishi(flowout_patch(2), vec(flowout_patch(2).patch, ["x2", "0"]))


def test_flowout_kuranishi_closed(rng):
    V = flowout_patch(2)
    basis = cocycle_basis(V, 2)
    assert all(derived_mk(V, [s]).is_zero() for s in basis)
    for _ in range(4):
        s = NormalMultiSection.zero(V.patch, 1)
        for b in basis:
            s = s + b.scale(rng.randint(-2, 2))
        k = kuranishi(V, s)
        assert derived_mk(V, [k]).is_zero()


def test_solve_m1_returns_preimage():
    V = flowout_patch(2)
    patch = V.patch
    target = NormalMultiSection(patch, 2, {(0, 1): patch.poly("u^2 + x1")})
    x = solve_m1(V, target, 3)
    assert x is not None and derived_mk(V, [x]) == target


def test_formal_quadratic_case():
    # fiber-linear J: MC(eps s) holds iff m1 s = 0 and m2(s, s) = 0
    V = flowout_patch(2)
    patch = V.patch
    good = vec(patch, ["u", "0"])
    bad = vec(patch, ["u", "u^2"])
    assert verify_formal_mc(V, FormalSeries(patch, [good]), 4)
    res = verify_formal_mc(V, FormalSeries(patch, [bad]), 3)
    assert not res and res.first_failing_order == 2


def test_legendrian_unobstructed():
    V = legendrian_patch(1)
    patch = V.patch
    for s in cocycle_basis(V, 2):
        assert verify_formal_mc(V, FormalSeries(patch, [s]), 5)


def test_order_two_prolongation():
    V = flowout_patch(2)
    patch = V.patch
    s1 = vec(patch, ["u", "u^2"])
    assert not kuranishi(V, s1).is_zero()
    s2 = prolong_order_two(V, s1, 3)
    assert s2 is not None
    assert verify_formal_mc(V, FormalSeries(patch, [s1, s2]), 2)


def test_order_two_obstruction():
    patch = Patch(("x",), ("y1", "y2"))
    V = VData(poisson_as_jacobi(patch, {("y1", "y2"): "y1*y2"}).J)
    s1 = vec(patch, ["1", "1"])
    assert derived_mk(V, [s1]).is_zero()
    assert not kuranishi(V, s1).is_zero()
    assert prolong_order_two(V, s1, 3) is None
    res = verify_formal_mc(V, FormalSeries(patch, [s1]), 2)
    assert res.first_failing_order == 2


def test_series_order_limit():
    V = flowout_patch(1)
    with pytest.raises(ValueError):
        mc_of_series(V, FormalSeries(V.patch, [NormalMultiSection.zero(V.patch, 1)]), MAX_ORDER + 1)


def test_gauge_trivial():
    V = flowout_patch(1)
    patch = V.patch
    fam = GaugeFamily(FormalSeries(patch, [vec(patch, ["u"])]), [])
    assert verify_gauge(V, fam, 3)


def test_gauge_legendrian_hamiltonian_flow():
    # m_k = 0 for k > 1, so -s_t = t m_1(lam|_S) solves the flow equation exactly
    V = legendrian_patch(1)
    patch = V.patch
    lam1 = patch.poly("x1^3 + u*x1 + p1")
    m1 = derived_mk(V, [NormalMultiSection.function(patch, lam1.restrict_zero(patch.fiber_vars))])
    t = Polynomial.var("t", ("t",))
    s1 = m1.map(lambda p: -(p * t))
    fam = GaugeFamily(FormalSeries(patch, [s1]), [Polynomial.zero(), lam1])
    assert verify_gauge(V, fam, 3)
    bad = GaugeFamily(FormalSeries(patch, [s1.scale(2)]), [Polynomial.zero(), lam1])
    res = verify_gauge(V, bad, 3)
    assert not res and not res.equation_ok


def test_gauge_time_variable_clash():
    V = flowout_patch(1)
    with pytest.raises(ValueError):
        GaugeFamily(FormalSeries(V.patch, [NormalMultiSection.zero(V.patch, 1)]), [], time_var="u")
