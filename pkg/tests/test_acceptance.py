"""Acceptance suite: ten exact checks, each printing one PASS/FAIL line.

Run with ``pytest -v tests/test_acceptance.py`` or directly as a script.
"""

import io
import random
import sys
import time
from fractions import Fraction
from pathlib import Path

import pytest

from jacobi_linfty.catalog import darboux_contact, flowout_patch, legendrian_patch, poisson_as_jacobi
from jacobi_linfty.cli import run as cli_run
from jacobi_linfty.deformation import (
    FormalSeries,
    cocycle_basis,
    delta_mc,
    delta_mc_via_pushforward,
    kuranishi,
    mc_series,
    mc_via_pushforward,
    prolong_order_two,
    verify_formal_mc,
)
from jacobi_linfty.operators import (
    Patch,
    apply,
    extract_components,
    jacobi_check,
    random_operator,
    random_polynomial,
    random_structure,
    sj_bracket,
)
from jacobi_linfty.poissonization import check_poissonization, classical_jacobi_check, sn_bracket, tilde_op
from jacobi_linfty.presymplectic import (
    PreSympData,
    cross_check,
    mat_equal,
    matrix_inverse,
    neumann_jets,
    thickening_poisson,
    wtilde_inverse_jets,
)
from jacobi_linfty.ring import Polynomial, parse
from jacobi_linfty.vdata import NormalMultiSection, VData, derived_mk, generator_tuples, linf_relation, oracle_mk

DATA = Path(__file__).parent / "data"


def _patch(rng, max_total=4):
    n = rng.randint(1, 2)
    d = rng.randint(1, max_total - n)
    return Patch(tuple(f"x{i + 1}" for i in range(n)), tuple(f"y{a + 1}" for a in range(d)))


def _normal(patch, degree, rng, max_deg=2):
    from itertools import combinations

    entries = {}
    for idx in combinations(range(patch.d), degree):
        if rng.random() < 0.7:
            entries[idx] = random_polynomial(patch.base_vars, rng, max_deg).with_variables(patch.variables)
    return NormalMultiSection(patch, degree, entries)


def _say(capsys, number, ok, title, seconds, detail=""):
    line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {title}  [{seconds:.1f}s]"
    if detail:
        line += f"  {detail}"
    if capsys is None:
        print(line)
    else:
        with capsys.disabled():
            print("\n" + line)


def _plus(x, y):
    # a bracket of two sections is returned as a zero arity-0 operator
    if x.is_zero():
        return y
    return x if y.is_zero() else x + y


def _same(x, y):
    return (x.is_zero() and y.is_zero()) or x == y


def criterion_1():
    """Graded antisymmetry and graded Jacobi for the operator bracket."""
    rng = random.Random(1)
    failures = []
    for trial in range(50):
        patch = _patch(rng)
        while True:
            ks = [rng.randint(0, 3) for _ in range(3)]
            if sum(ks) <= 5:
                break
        a, b, c = (random_operator(patch, k, rng, max_deg=2) for k in ks)
        sign = -1 if ((ks[0] - 1) * (ks[1] - 1)) % 2 else 1
        anti = _same(sj_bracket(a, b), sj_bracket(b, a).scale(-sign))
        lhs = sj_bracket(a, sj_bracket(b, c))
        rhs = _plus(sj_bracket(sj_bracket(a, b), c), sj_bracket(b, sj_bracket(a, c)).scale(sign))
        if not (anti and _same(lhs, rhs)):
            failures.append(trial)
    return not failures, f"50 triples, failing: {failures}" if failures else "50 triples"


def criterion_2():
    """Catalog structures satisfy the Jacobi identity in both readings."""
    structures = [darboux_contact(1).J, darboux_contact(2).J]
    P = Patch(("x",), ("y",))
    Q = Patch(("x", "y", "z"))
    structures.append(poisson_as_jacobi(P, {("x", "y"): 1}).J)
    structures.append(poisson_as_jacobi(P, {("x", "y"): "y"}).J)
    structures.append(poisson_as_jacobi(Q, {("x", "y"): "z", ("y", "z"): "x", ("z", "x"): "y"}).J)
    ok = True
    for J in structures:
        res = jacobi_check(J)
        ok &= res.ok and res.classical_ok and classical_jacobi_check(J).ok
    return ok, f"{len(structures)} structures"


def criterion_3():
    """Derived brackets equal the coordinate-formula oracle on generator tuples."""
    rng = random.Random(3)
    count = 0
    for _ in range(20):
        patch = _patch(rng)
        V = VData(random_structure(patch, rng))
        fns = [Polynomial.constant(1, patch.variables), random_polynomial(patch.base_vars, rng).with_variables(patch.variables)]
        for args, _, _ in generator_tuples(patch, fns, 4):
            count += 1
            if derived_mk(V, args) != oracle_mk(V, args):
                return False, f"mismatch after {count} tuples"
    return True, f"20 structures, {count} tuples"


def _nonzero_arities(V, fns, max_arity):
    out = {}
    for args, _, _ in generator_tuples(V.patch, fns, max_arity):
        val = derived_mk(V, args)
        if not val.is_zero():
            out.setdefault(len(args), (args, val))
    return out


def criterion_4():
    """Legendrian: m_k = 0 for k >= 2.  Flowout: m_k = 0 for k >= 3, m_2 != 0."""
    L = legendrian_patch(1)
    lp = L.patch
    nz_l = _nonzero_arities(L, [Polynomial.constant(1, lp.variables), lp.poly("x1"), lp.poly("x1^3")], 5)
    F = flowout_patch(1)
    fp = F.patch
    nz_f = _nonzero_arities(F, [Polynomial.constant(1, fp.variables), fp.poly("u"), fp.poly("x1*u^2")], 5)
    ok = set(nz_l) <= {1} and set(nz_f) <= {1, 2} and 2 in nz_f
    witness = nz_f.get(2)
    detail = f"flowout m_2 witness {witness[1]}" if witness else "no m_2 witness"
    return ok, detail


def criterion_5():
    """MC series equals the pushforward; the variation identity on coisotropic sections."""
    rng = random.Random(5)
    for _ in range(20):
        patch = _patch(rng)
        V = VData(random_structure(patch, rng))
        s = _normal(patch, 1, rng)
        if mc_series(V, s) != mc_via_pushforward(V, s):
            return False, "series/pushforward mismatch"
    L = legendrian_patch(1)
    lp = L.patch
    count = 0
    for _ in range(5):
        f = random_polynomial(("x1",), rng, max_deg=3).with_variables(lp.variables)
        s = NormalMultiSection.vector(lp, [f, f.diff("x1")])
        if not mc_series(L, s).is_zero():
            return False, "1-jet graph not coisotropic"
        for _ in range(3):
            lam = random_polynomial(lp.variables, rng)
            count += 1
            if delta_mc(L, s, lam) != delta_mc_via_pushforward(L, s, lam):
                return False, "variation identity fails"
    return True, f"20 pairs, {count} variations"


def criterion_6():
    """Homotopy Jacobi relations up to total arity 4 and m_1 o m_1 = 0."""
    rng = random.Random(6)
    count = 0
    for V in (legendrian_patch(1), flowout_patch(1), legendrian_patch(2), flowout_patch(2)):
        patch = V.patch
        base = patch.base_vars
        fns = [Polynomial.constant(1, patch.variables), Polynomial.var(base[-1], patch.variables),
               random_polynomial(base, rng, 2).with_variables(patch.variables)]
        for args, _, _ in generator_tuples(patch, fns, 4):
            count += 1
            rel = linf_relation(V, args)
            if rel is not None and not rel.is_zero():
                return False, f"relation fails on {args}"
        for deg in range(0, patch.d + 1):
            xi = _normal(patch, deg, rng)
            m1 = derived_mk(V, [xi])
            if not derived_mk(V, [m1]).is_zero():
                return False, "m_1 o m_1 != 0"
    return True, f"{count} relations"


def criterion_7():
    """Poissonization: homogeneity, Poisson iff Jacobi, bracket morphism."""
    rng = random.Random(7)
    structures = [darboux_contact(1).J, darboux_contact(2).J]
    structures += [random_structure(_patch(rng, 3), rng, max_deg=1, density=0.4) for _ in range(6)]
    for J in structures:
        rep = check_poissonization(J)
        if not rep.homogeneous or rep.poisson != rep.jacobi:
            return False, "homogeneity or Poisson/Jacobi equivalence fails"
    for _ in range(20):
        patch = _patch(rng, 3)
        a = random_operator(patch, rng.randint(0, 3), rng, max_deg=1)
        b = random_operator(patch, rng.randint(0, 3), rng, max_deg=1)
        if tilde_op(sj_bracket(a, b)) != sn_bracket(tilde_op(a), tilde_op(b)):
            return False, "morphism property fails"
    return True, f"{len(structures)} structures, 20 pairs"


def _linear(rng, names):
    text = str(rng.randint(-2, 2))
    for v in names:
        c = rng.randint(-2, 2)
        if c:
            text += f" + ({c})*{v}"
    return text


def criterion_8():
    """Closed-form brackets of the thickening equal derived brackets; inverse-jet identity."""
    rng = random.Random(8)
    done = 0
    tuples = 0
    while done < 5:
        n = 1 + done % 2
        names = [f"x{i + 1}" for i in range(n)] + ["u1", "u2"]
        w = _linear(rng, names)
        data = PreSympData(n, 2, [["0", w], [f"-({w})", "0"]],
                           [[_linear(rng, names) for _ in range(2)] for _ in range(n)],
                           reference_point={"x1": rng.randint(-2, 2), "u1": rng.randint(-2, 2)})
        try:
            W_inv, _ = matrix_inverse(data)
        except ZeroDivisionError:
            continue
        for m in range(4):
            a, b = wtilde_inverse_jets(data, m, W_inv), neumann_jets(data, m, W_inv)
            if not all(mat_equal(a[k], b[k]) for k in a):
                return False, f"inverse jets differ at order {m}"
        T = thickening_poisson(data, 4)
        ctx = data.base_vars
        fns = [Polynomial.constant(1, ctx), parse("x1*u2 + u1", ctx), parse(_linear(rng, names), ctx)]
        count, bad = cross_check(T, fns, 4)
        tuples += count
        if bad:
            return False, f"closed form mismatch {bad[0][:2]}"
        done += 1
    return True, f"5 instances, {tuples} tuples"


def criterion_9():
    """Kuranishi map on flowout cocycles and the order-two prolongation criterion."""
    rng = random.Random(9)
    V = flowout_patch(2)
    basis = cocycle_basis(V, 2)
    nonzero = 0
    for _ in range(10):
        s = NormalMultiSection.zero(V.patch, 1)
        for b in basis:
            s = s + b.scale(rng.randint(-2, 2))
        if not derived_mk(V, [s]).is_zero():
            return False, "constructed section is not a cocycle"
        k = kuranishi(V, s, check_closed=False)
        nonzero += not k.is_zero()
        if not derived_mk(V, [k]).is_zero():
            return False, "m_1(m_2(s, s)) != 0"
    fp = V.patch
    s1 = NormalMultiSection.vector(fp, [fp.poly("u"), fp.poly("u^2")])
    s2 = prolong_order_two(V, s1, 3)
    positive = (not kuranishi(V, s1).is_zero() and s2 is not None
                and verify_formal_mc(V, FormalSeries(fp, [s1, s2]), 2).ok)
    Q = Patch(("x",), ("y1", "y2"))
    W = VData(poisson_as_jacobi(Q, {("y1", "y2"): "y1*y2"}).J)
    t1 = NormalMultiSection.vector(Q, [Q.poly("1"), Q.poly("1")])
    res = verify_formal_mc(W, FormalSeries(Q, [t1]), 2)
    negative = (derived_mk(W, [t1]).is_zero() and prolong_order_two(W, t1, 3) is None
                and res.first_failing_order == 2)
    return positive and negative, f"10 cocycles ({nonzero} with nonzero m_2(s,s)), positive and negative prolongation"


def criterion_10():
    """Print/parse fixed point, extraction round trip, byte-identical reports."""
    rng = random.Random(10)
    for _ in range(50):
        vs = ("x", "y", "z")
        p = random_polynomial(vs, rng, 4, terms=5).scale(Fraction(rng.randint(-5, 5), rng.randint(1, 4)))
        q = parse(str(p), vs)
        if q != p or str(q) != str(p):
            return False, f"parse/print fixed point fails on {p}"
    for _ in range(10):
        patch = _patch(rng)
        k = rng.randint(0, 3)
        op = random_operator(patch, k, rng)
        if extract_components(lambda secs: apply(op, secs).coeff, patch, k) != op:
            return False, "extract o apply is not the identity"
    runs = []
    for _ in range(2):
        out = io.StringIO()
        cli_run(["poissonize", str(DATA / "darboux1.json"), "--seed", "11", "--samples", "3"], stdout=out)
        out2 = io.StringIO()
        cli_run(["ohpark", str(DATA / "presymp.json"), "--seed", "11", "--max-arity", "3"], stdout=out2)
        runs.append(out.getvalue() + out2.getvalue())
    if runs[0] != runs[1]:
        return False, "reports differ between runs"
    return True, "50 polynomials, 10 operators, 2 identical report runs"


CRITERIA = [
    (1, "bracket engine soundness", criterion_1),
    (2, "Jacobi examples", criterion_2),
    (3, "oracle equivalence", criterion_3),
    (4, "model examples", criterion_4),
    (5, "Maurer-Cartan series and its variation", criterion_5),
    (6, "L-infinity relations", criterion_6),
    (7, "Poissonization", criterion_7),
    (8, "thickening cross-check", criterion_8),
    (9, "Kuranishi coherence", criterion_9),
    (10, "determinism and round trips", criterion_10),
]


@pytest.mark.parametrize("number,title,check", CRITERIA, ids=[f"criterion_{n}" for n, _, _ in CRITERIA])
def test_acceptance(number, title, check, capsys):
    start = time.perf_counter()
    ok, detail = check()
    _say(capsys, number, ok, title, time.perf_counter() - start, detail)
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for number, title, check in CRITERIA:
        start = time.perf_counter()
        ok, detail = check()
        _say(None, number, ok, title, time.perf_counter() - start, detail)
        failed += not ok
    sys.exit(1 if failed else 0)
