import random
from itertools import permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jacobi_linfty.catalog import flowout_patch, legendrian_patch, poisson_as_jacobi
from jacobi_linfty.operators import JacobiStructure, MultiOperator, Patch, random_polynomial, random_structure, sj_bracket
from jacobi_linfty.ring import Polynomial
from jacobi_linfty.vdata import (
    NormalMultiSection,
    VData,
    generator_mk,
    derived_mk,
    generator_tuples,
    graded_symmetry_holds,
    include_I,
    is_coisotropic_section,
    is_coisotropic_submanifold,
    linf_relation,
    oracle_mk,
    project_P,
)

from conftest import random_normal, random_patch


def test_projection_kernel():
    patch = Patch(("x",), ("y1", "y2"))
    op = MultiOperator(patch, 2, {("x", "y1"): "y2 + 1", ("y1", "y2"): "y1*x"})
    assert project_P(op).is_zero()


def test_projection_of_legendrian_structure():
    assert project_P(legendrian_patch(1).J).is_zero()


def test_projection_inverts_inclusion(rng):
    for _ in range(10):
        patch = random_patch(rng)
        xi = random_normal(patch, rng.randint(0, patch.d), rng)
        assert project_P(include_I(xi)) == xi


def test_inclusion_of_vector():
    patch = Patch(("x",), ("y",))
    xi = NormalMultiSection.vector(patch, [patch.poly("x^2")])
    op = include_I(xi)
    assert op.X[(1,)] == patch.poly("x^2")
    f = patch.poly("x*y^2")
    assert op(f).coeff == patch.poly("x^2") * f.diff("y")
    assert include_I(NormalMultiSection.zero(patch, 1)).is_zero()


def test_lifts_commute(rng):
    for _ in range(10):
        patch = random_patch(rng)
        a = random_normal(patch, rng.randint(0, patch.d), rng)
        b = random_normal(patch, rng.randint(0, patch.d), rng)
        assert sj_bracket(include_I(a), include_I(b)).is_zero()


def test_normal_sections_reject_fiber_dependence():
    patch = Patch(("x",), ("y",))
    with pytest.raises(ValueError):
        NormalMultiSection.function(patch, patch.poly("y"))


def test_m2_on_functions_is_minus_restricted_bracket(rng):
    for _ in range(5):
        patch = random_patch(rng)
        V = VData(random_structure(patch, rng))
        f = random_polynomial(patch.base_vars, rng).with_variables(patch.variables)
        g = random_polynomial(patch.base_vars, rng).with_variables(patch.variables)
        got = derived_mk(V, [NormalMultiSection.function(patch, f), NormalMultiSection.function(patch, g)])
        assert got.tensor[()] == -V.J.bracket(f, g).restrict_zero(patch.fiber_vars)


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10**6))
def test_m2_graded_symmetry(seed):
    rng = random.Random(seed)
    patch = random_patch(rng)
    V = VData(random_structure(patch, rng))
    a = random_normal(patch, rng.randint(0, min(2, patch.d)), rng)
    b = random_normal(patch, rng.randint(0, min(2, patch.d)), rng)
    assert graded_symmetry_holds(V, [a, b], (1, 0))


def test_m3_graded_symmetry(rng):
    for _ in range(5):
        patch = random_patch(rng)
        V = VData(random_structure(patch, rng))
        args = [random_normal(patch, rng.randint(0, 1), rng) for _ in range(3)]
        for perm in permutations(range(3)):
            assert graded_symmetry_holds(V, args, perm)


def test_oracles_agree_with_derived_brackets(rng):
    for _ in range(3):
        patch = random_patch(rng)
        V = VData(random_structure(patch, rng))
        fns = [Polynomial.constant(1, patch.variables), Polynomial.var(patch.base_vars[0], patch.variables)]
        for args, deltas, functions in generator_tuples(patch, fns, 3):
            want = derived_mk(V, args)
            assert oracle_mk(V, args) == want
            assert generator_mk(V, deltas, functions) == want


def test_low_fiber_degree_kills_long_brackets():
    patch = Patch(("x",), ("y1", "y2"))
    J = JacobiStructure(patch, {("y1", "y2"): "x*y1 + y2", ("x", "y1"): "y2"}, {("y1",): "y1*x"})
    V = VData(J)
    d = [NormalMultiSection.generator(patch, a) for a in range(2)]
    assert oracle_mk(V, [d[0], d[1], d[0]]).is_zero()
    assert derived_mk(V, [d[0], d[1], d[0]]).is_zero()


def test_legendrian_arity_three_vanishes():
    V = legendrian_patch(1)
    patch = V.patch
    fns = [Polynomial.constant(1, patch.variables), Polynomial.var("x1", patch.variables)]
    for args, _, _ in generator_tuples(patch, fns, 3):
        if len(args) == 3:
            assert oracle_mk(V, args).is_zero()


def test_coisotropic_submanifold_examples():
    assert is_coisotropic_submanifold(legendrian_patch(1))
    assert is_coisotropic_submanifold(flowout_patch(1))
    patch = Patch(("x",), ("y1", "y2"))
    assert not is_coisotropic_submanifold(VData(JacobiStructure(patch, {("y1", "y2"): "x"})))


def test_coisotropic_sections(rng):
    V = legendrian_patch(1)
    assert is_coisotropic_section(V, NormalMultiSection.zero(V.patch, 1))
    patch = Patch(("x",), ("y",))
    W = VData(random_structure(patch, rng))
    W = VData(JacobiStructure(patch, W.J.X, W.J.G))
    s = NormalMultiSection.vector(patch, [patch.poly("x^2 - 1")])
    assert is_coisotropic_section(W, s)


def test_homotopy_jacobi_on_poisson_patch():
    patch = Patch(("x",), ("y1", "y2"))
    st_ = poisson_as_jacobi(patch, {("y1", "y2"): "y1*y2 + x*y1"})
    V = VData(st_.J)
    fns = [Polynomial.constant(1, patch.variables), Polynomial.var("x", patch.variables)]
    for args, _, _ in generator_tuples(patch, fns, 3):
        rel = linf_relation(V, args)
        assert rel is None or rel.is_zero()
