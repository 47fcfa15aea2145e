"""Maurer-Cartan series, its variation, the Kuranishi map and formal / gauge checks.

Sign orientation: ``MC(-s) = sum_k m_k(-s, .., -s) / k!`` equals
``P(exp I(-s)_* J)``, the pushforward along ``y -> y - s(x)``.  A formal
deformation ``s(eps)`` is coisotropic iff ``MC(-s(eps)) = 0``; a family
``s_t(eps)`` is gauge equivalent under ``lambda_t`` iff ``xi_t = -s_t`` solves

    d/dt xi_t = sum_k m_{k+1}(xi_t, .., xi_t, lambda_t|_S) / k!.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial
from typing import Sequence

from gmpy2 import mpq

from .operators import MultiOperator, Patch, _as_poly, hamiltonian, pushforward_fiber_affine, sj_bracket
from .ring import Polynomial
from .vdata import NormalMultiSection, VData, as_normal, derived_mk, include_I, project_P

EPS = "_eps"
MAX_ORDER = 6


def _fiber_degree(V: VData) -> int:
    fib = V.patch.fiber_vars
    return max([v.degree(fib) for _, _, v in V.J.components()] or [0])


def series_length(V: VData) -> int:
    """Brackets beyond this many arguments vanish on fiber-independent inputs.

    Each bracket with a lifted argument either lowers the fiber degree of a
    coefficient or converts one of the at most two base slots of ``J``.
    """
    return _fiber_degree(V) + 3


def _zero_like(V: VData, degree: int) -> NormalMultiSection:
    return NormalMultiSection.zero(V.patch, max(degree, 0))


def _sum(terms: Sequence[NormalMultiSection], V: VData, degree: int) -> NormalMultiSection:
    total = _zero_like(V, degree)
    for t in terms:
        if not t.is_zero():
            total = total + t
    return total


def _truncated_chain(V: VData, head: MultiOperator, args: Sequence[NormalMultiSection], order: int | None):
    op = head
    out = []
    for a in args:
        op = sj_bracket(op, include_I(a))
        if order is not None:
            op = op.map_coefficients(lambda p: p.truncate((EPS,), order))
        out.append(op)
    return out


def mc_series(V: VData, s) -> NormalMultiSection:
    """``sum_{k>=0} m_k(-s, .., -s) / k!`` where ``m_0 = P(J)`` vanishes on coisotropic patches."""
    s = as_normal(V.patch, s, 1)
    xi = -s
    kmax = series_length(V)
    chain = _truncated_chain(V, V.J, [xi] * kmax, None)
    terms = [project_P(V.J)] + [project_P(op).scale(mpq(1, factorial(k + 1))) for k, op in enumerate(chain)]
    return _sum(terms, V, 2)


def mc_via_pushforward(V: VData, s) -> NormalMultiSection:
    s = as_normal(V.patch, s, 1)
    return project_P(pushforward_fiber_affine(V.J, s.components(), -1))


def _restrict_section(V: VData, lam) -> NormalMultiSection:
    f = _as_poly(lam).restrict_zero(V.patch.fiber_vars)
    return NormalMultiSection.function(V.patch, f)


def delta_mc(V: VData, s, lam) -> NormalMultiSection:
    """``sum_{k>=0} m_{k+1}(-s, .., -s, lam|_S) / k!``."""
    s = as_normal(V.patch, s, 1)
    xi = -s
    lam_S = _restrict_section(V, lam)
    kmax = series_length(V)
    chain = _truncated_chain(V, V.J, [xi] * kmax, None)
    terms = [derived_mk(V, [lam_S])]
    for k, op in enumerate(chain, start=1):
        terms.append(project_P(sj_bracket(op, include_I(lam_S))).scale(mpq(1, factorial(k))))
    return _sum(terms, V, 1)


def delta_mc_via_pushforward(V: VData, s, lam, restrict: bool = True) -> NormalMultiSection:
    """``-P(exp I(-s)_* Delta_lam)`` with ``Delta_lam = -[J, lam]``.

    By default ``lam`` is replaced by the fiber-constant extension of
    ``lam|_S``, which is the section the bracket series sees.
    """
    s = as_normal(V.patch, s, 1)
    lam = _as_poly(lam)
    if restrict:
        lam = lam.restrict_zero(V.patch.fiber_vars)
    delta, _ = hamiltonian(V.J, lam)
    return -project_P(pushforward_fiber_affine(delta, s.components(), -1))


class NotCocycleError(ValueError):
    def __init__(self, witness: NormalMultiSection):
        super().__init__(f"not a cocycle: m1(s) = {witness}")
        self.witness = witness


def kuranishi(V: VData, s, check_closed: bool = True) -> NormalMultiSection:
    """``m_2(s, s)`` for an ``m_1``-cocycle ``s``."""
    s = as_normal(V.patch, s, 1)
    d = derived_mk(V, [s])
    if not d.is_zero():
        raise NotCocycleError(d)
    kr = derived_mk(V, [s, s])
    if check_closed:
        dk = derived_mk(V, [kr])
        if not dk.is_zero():
            raise ArithmeticError(f"m1(m2(s,s)) = {dk}")
    return kr


# -- formal series ---------------------------------------------------------------------------


@dataclass
class FormalSeries:
    """``s(eps) = sum_{i=1}^N eps^i s_i`` with degree-1 coefficients."""

    patch: Patch
    coefficients: list
    time_var: str | None = None

    def __post_init__(self):
        self.coefficients = [as_normal(self.patch, c, 1) for c in self.coefficients]
        for c in self.coefficients:
            if c.degree != 1 or c.patch != self.patch:
                raise ValueError("series coefficients must be degree-1 sections on the same patch")

    @property
    def order(self) -> int:
        return len(self.coefficients)

    def combined(self) -> NormalMultiSection:
        """One normal section with ``_eps`` as an extra parameter variable."""
        total = NormalMultiSection.zero(self.patch, 1)
        for i, c in enumerate(self.coefficients, start=1):
            eps_i = Polynomial((EPS,), {(i,): 1})
            total = total + c.map(lambda p: p * eps_i)
        return total

    def map(self, f) -> "FormalSeries":
        return FormalSeries(self.patch, [c.map(f) for c in self.coefficients], self.time_var)


def eps_coefficient(p: Polynomial, i: int) -> Polynomial:
    q = p.coefficient((EPS,), (i,))
    keep = tuple(v for v in q.variables if v != EPS)
    return q.with_variables(keep)


def _eps_split(xi: NormalMultiSection, order: int) -> list:
    return [xi.map(lambda p: eps_coefficient(p, i)) for i in range(order + 1)]


def mc_of_series(V: VData, series: FormalSeries, N: int) -> list:
    """Coefficients ``[c_0, .., c_N]`` of ``MC(-s(eps))``."""
    if N > MAX_ORDER:
        raise ValueError(f"order above {MAX_ORDER} is not supported")
    xi = -series.combined()
    kmax = min(N, series_length(V))
    chain = _truncated_chain(V, V.J, [xi] * kmax, N)
    terms = [project_P(V.J)] + [project_P(op).scale(mpq(1, factorial(k + 1))) for k, op in enumerate(chain)]
    return _eps_split(_sum(terms, V, 2), N)


@dataclass
class FormalResult:
    ok: bool
    first_failing_order: int | None = None
    witness: NormalMultiSection | None = None

    def __bool__(self):
        return self.ok


def verify_formal_mc(V: VData, series: FormalSeries, N: int) -> FormalResult:
    coeffs = mc_of_series(V, series, N)
    for i, c in enumerate(coeffs):
        if not c.is_zero():
            return FormalResult(False, i, c)
    return FormalResult(True)


# -- gauge families -----------------------------------------------------------------------------


@dataclass
class GaugeFamily:
    """``s_t(eps)`` and ``lambda_t(eps) = sum_{i=0}^N eps^i lambda_i`` (polynomial in ``time_var``)."""

    s: FormalSeries
    lam: list
    time_var: str = "t"
    notes: list = field(default_factory=list)

    def __post_init__(self):
        patch = self.s.patch
        if self.time_var in patch.variables:
            raise ValueError("time variable clashes with a patch coordinate")
        self.lam = [_as_poly(x) for x in self.lam]

    def lam_combined(self) -> Polynomial:
        total = Polynomial.zero()
        for i, p in enumerate(self.lam):
            total = total + p * Polynomial((EPS,), {(i,): 1})
        return total


@dataclass
class GaugeResult:
    ok: bool
    equation_ok: bool
    samples_ok: bool
    mc_ok: bool
    failing: str | None = None

    def __bool__(self):
        return self.ok


def gauge_sides(V: VData, fam: GaugeFamily, N: int):
    """Both sides of the flow equation as eps-coefficient lists."""
    if N > MAX_ORDER:
        raise ValueError(f"order above {MAX_ORDER} is not supported")
    xi = -fam.s.combined()
    lhs = xi.map(lambda p: p.diff_if_present(fam.time_var))
    lam_S = _restrict_section(V, fam.lam_combined())
    kmax = series_length(V)
    chain = _truncated_chain(V, V.J, [xi] * min(N, kmax), N)
    terms = [project_P(sj_bracket(V.J, include_I(lam_S)))]
    # the curvature term P(J) does not depend on xi, so it drops out of d/dt
    for k, op in enumerate(chain, start=1):
        br = sj_bracket(op, include_I(lam_S)).map_coefficients(lambda p: p.truncate((EPS,), N))
        terms.append(project_P(br).scale(mpq(1, factorial(k))))
    rhs = _sum(terms, V, 1)
    return _eps_split(lhs, N), _eps_split(rhs, N)


def verify_gauge(V: VData, fam: GaugeFamily, N: int) -> GaugeResult:
    lhs, rhs = gauge_sides(V, fam, N)
    failing = None
    equation_ok = True
    for i, (a, b) in enumerate(zip(lhs, rhs)):
        if a != b:
            equation_ok = False
            failing = failing or f"flow equation fails at eps^{i}"
    tv = fam.time_var
    samples_ok = True
    mc_ok = True
    for j in range(N + 2):
        c = mpq(2 * j - N - 1, 3)
        for i, (a, b) in enumerate(zip(lhs, rhs)):
            if a.map(lambda p: p.evaluate({tv: c})) != b.map(lambda p: p.evaluate({tv: c})):
                samples_ok = False
                failing = failing or f"sampled flow equation fails at t={c}, eps^{i}"
        s_c = fam.s.map(lambda p: p.evaluate({tv: c}))
        res = verify_formal_mc(V, s_c, N)
        if not res.ok:
            mc_ok = False
            failing = failing or f"s_t is not Maurer-Cartan at t={c}, eps^{res.first_failing_order}"
    return GaugeResult(equation_ok and samples_ok and mc_ok, equation_ok, samples_ok, mc_ok, failing)


# -- cocycles and order-two prolongation on a polynomial ansatz ---------------------------------


def ansatz_basis(patch: Patch, degree: int, max_deg: int) -> list:
    """Normal multisections of ``degree`` with a single monomial entry of base degree ``<= max_deg``."""
    from itertools import combinations, product as iproduct

    base = patch.base_vars
    monos = [e for e in iproduct(range(max_deg + 1), repeat=len(base)) if sum(e) <= max_deg]
    out = []
    for idx in combinations(range(patch.d), degree):
        for e in monos:
            out.append(NormalMultiSection(patch, degree, {idx: Polynomial(base, {e: 1}).with_variables(patch.variables)}))
    return out


def _flatten(xs: Sequence[NormalMultiSection]):
    keys = sorted({(idx, mono) for x in xs for idx, p in x.items() for mono in p.terms}, key=repr)
    return keys


def _column(x: NormalMultiSection, keys) -> list:
    import sympy

    col = []
    for idx, mono in keys:
        c = x.tensor[idx].terms.get(mono, 0) if idx in dict(x.items()) else 0
        c = mpq(c)
        col.append(sympy.Rational(int(c.numerator), int(c.denominator)))
    return col


def _canonical_terms(x: NormalMultiSection) -> NormalMultiSection:
    return x.map(lambda p: p.with_variables(x.patch.variables))


def solve_m1(V: VData, target: NormalMultiSection, max_deg: int) -> NormalMultiSection | None:
    """Some ``x`` in the ansatz with ``m_1(x) = target``, or ``None`` if the ansatz has none."""
    import sympy

    target = _canonical_terms(target)
    if target.is_zero():
        return NormalMultiSection.zero(V.patch, target.degree - 1)
    basis = ansatz_basis(V.patch, target.degree - 1, max_deg)
    images = [_canonical_terms(derived_mk(V, [b])) for b in basis]
    keys = _flatten(images + [target])
    if all(im.is_zero() for im in images):
        return None
    A = sympy.Matrix([_column(im, keys) for im in images]).T
    b = sympy.Matrix(_column(target, keys))
    try:
        sol, params = A.gauss_jordan_solve(b)
    except ValueError:
        return None
    sol = sol.subs({t: 0 for t in params})
    out = NormalMultiSection.zero(V.patch, target.degree - 1)
    for c, e in zip(sol, basis):
        if c != 0:
            out = out + e.scale(mpq(int(c.p), int(c.q)))
    return out


def cocycle_basis(V: VData, max_deg: int, degree: int = 1) -> list:
    """A basis of ``ker m_1`` inside the ansatz of the given degree."""
    import sympy

    basis = ansatz_basis(V.patch, degree, max_deg)
    images = [_canonical_terms(derived_mk(V, [b])) for b in basis]
    keys = _flatten(images)
    if not keys:
        return basis
    A = sympy.Matrix([_column(im, keys) for im in images]).T
    out = []
    for v in A.nullspace():
        v = v * sympy.ilcm(*[x.q for x in v])
        s = NormalMultiSection.zero(V.patch, degree)
        for c, e in zip(v, basis):
            if c != 0:
                s = s + e.scale(int(c))
        out.append(s)
    return out


def prolong_order_two(V: VData, s1, max_deg: int) -> NormalMultiSection | None:
    """``s_2`` with ``m_1(s_2) = m_2(s_1, s_1) / 2`` inside the ansatz, or ``None``."""
    s1 = as_normal(V.patch, s1, 1)
    return solve_m1(V, kuranishi(V, s1).scale(mpq(1, 2)), max_deg)
