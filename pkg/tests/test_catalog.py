import pytest

from jacobi_linfty.catalog import (
    CatalogError,
    darboux_contact,
    extended_pairing_matrix,
    fiber_degree,
    flowout_patch,
    legendrian_patch,
    poisson_as_jacobi,
)
from jacobi_linfty.deformation import mc_series
from jacobi_linfty.operators import Patch, hamiltonian, jacobi_check
from jacobi_linfty.poissonization import _det, check_poissonization, classical_jacobi_check
from jacobi_linfty.ring import Polynomial
from jacobi_linfty.vdata import NormalMultiSection, VData, derived_mk, generator_tuples, is_coisotropic_section


@pytest.mark.parametrize("n", [1, 2])
def test_darboux_is_contact(n):
    st = darboux_contact(n)
    assert jacobi_check(st.J).ok
    assert classical_jacobi_check(st.J).ok
    assert _det(extended_pairing_matrix(st.J)).is_constant()
    _, reeb = hamiltonian(st.J, Polynomial.constant(1, st.patch.variables))
    assert [str(c) for c in reeb] == ["1" if v == "u" else "0" for v in st.patch.variables]


def test_darboux_rejects_bad_n():
    with pytest.raises(ValueError):
        darboux_contact(0)


def test_darboux_bracket_of_coordinates():
    J = darboux_contact(1).J
    v = lambda s: J.patch.poly(s)
    assert J.bracket(v("1"), v("u")) == v("1")
    assert J.bracket(v("p1"), v("x1")) == v("-1")


def test_legendrian_is_fiberwise_linear():
    V = legendrian_patch(2)
    assert fiber_degree(V.J) <= 1


def test_legendrian_higher_brackets_vanish():
    V = legendrian_patch(1)
    patch = V.patch
    fns = [Polynomial.constant(1, patch.variables), Polynomial.var("x1", patch.variables),
           patch.poly("x1^2")]
    for args, _, _ in generator_tuples(patch, fns, 4):
        if len(args) >= 2:
            assert derived_mk(V, args).is_zero()
        else:
            m1 = derived_mk(V, args)
            if m1.degree >= 0:
                assert derived_mk(V, [m1]).is_zero()


def test_flowout_brackets():
    V = flowout_patch(1)
    patch = V.patch
    fns = [Polynomial.constant(1, patch.variables), patch.poly("u"), patch.poly("x1*u")]
    nonzero = set()
    for args, _, _ in generator_tuples(patch, fns, 4):
        if not derived_mk(V, args).is_zero():
            nonzero.add(len(args))
    assert nonzero == {1, 2}


def test_flowout_constant_sections():
    V = flowout_patch(2)
    s = NormalMultiSection.vector(V.patch, [V.patch.poly("3"), V.patch.poly("-1/2")])
    assert is_coisotropic_section(V, s)
    assert mc_series(V, s).is_zero()


def test_poisson_examples():
    P = Patch(("x",), ("y",))
    st = poisson_as_jacobi(P, {("x", "y"): 1})
    V = VData(st.J)
    assert is_coisotropic_section(V, NormalMultiSection.vector(P, [P.poly("x^2 + 1")]))
    assert jacobi_check(poisson_as_jacobi(P, {("x", "y"): "y"}).J).ok


def test_poisson_rejects_non_poisson():
    P = Patch(("a", "b", "c", "d"))
    with pytest.raises(CatalogError) as err:
        poisson_as_jacobi(P, {("a", "b"): "c", ("c", "d"): "a"})
    assert err.value.witness


def test_poisson_rejects_conflicting_entries():
    P = Patch(("x", "y"))
    with pytest.raises(CatalogError):
        poisson_as_jacobi(P, {("x", "y"): 1, ("y", "x"): 1})


@pytest.mark.parametrize("n", [1, 2])
def test_symplectization_of_darboux(n):
    rep = check_poissonization(darboux_contact(n).J)
    assert rep.homogeneous and rep.poisson
