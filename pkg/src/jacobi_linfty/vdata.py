"""V-data of the zero section ``S = {y = 0}`` and its derived L-infinity brackets.

A normal multisection of degree ``p`` is ``xi^{a_1..a_p} delta_{a_1} ^ .. ^
delta_{a_p}`` (summed over all fiber index tuples) with coefficients in the base
variables; its shifted degree is ``p - 1``.  ``I`` lifts it to the operator with
the same pure-fiber ``X`` block, ``P`` keeps the pure-fiber ``X`` block of an
operator restricted to ``y = 0``, and

    m_k(xi_1, .., xi_k) = P [..[[J, I xi_1], I xi_2].., I xi_k].
"""

from __future__ import annotations

from itertools import combinations, combinations_with_replacement, product
from math import factorial
from typing import Iterable, Mapping, Sequence

from gmpy2 import mpq

from .operators import (
    JacobiStructure,
    MultiOperator,
    Patch,
    _as_poly,
    hamiltonian,
    pushforward_fiber_affine,
    sj_bracket,
)
from .ring import AntisymTensor, Polynomial


class NormalMultiSection:
    """Antisymmetric fiber-index tensor with base-only coefficients."""

    __slots__ = ("patch", "degree", "tensor")

    def __init__(self, patch: Patch, degree: int, entries: Mapping | AntisymTensor | None = None):
        self.patch = patch
        self.degree = degree
        if isinstance(entries, AntisymTensor):
            T = entries
        else:
            conv = {}
            for k, v in (entries or {}).items():
                if not isinstance(k, tuple):
                    k = (k,)
                k = tuple(patch.fiber_vars.index(i) if isinstance(i, str) else i for i in k)
                if isinstance(v, str):
                    v = patch.poly(v)
                elif not isinstance(v, Polynomial):
                    v = Polynomial.constant(v, patch.variables)
                conv[k] = v
            T = AntisymTensor(degree, patch.d, conv)
        if T.rank != degree or T.dim != patch.d:
            raise ValueError("tensor shape does not match degree / fiber dimension")
        fib = set(patch.fiber_vars)
        for v in T.entries.values():
            if fib & set(v.used_variables()):
                raise ValueError("normal multisection entries must not depend on fiber variables")
        self.tensor = T

    @classmethod
    def zero(cls, patch: Patch, degree: int) -> "NormalMultiSection":
        return cls(patch, degree)

    @classmethod
    def generator(cls, patch: Patch, a) -> "NormalMultiSection":
        """The constant section ``delta_a``."""
        return cls(patch, 1, {(a,): 1})

    @classmethod
    def function(cls, patch: Patch, f) -> "NormalMultiSection":
        return cls(patch, 0, {(): f})

    @classmethod
    def vector(cls, patch: Patch, components: Sequence) -> "NormalMultiSection":
        return cls(patch, 1, {(a,): c for a, c in enumerate(components)})

    @property
    def shifted_degree(self) -> int:
        return self.degree - 1

    def __getitem__(self, idx):
        return self.tensor[idx]

    def components(self) -> list:
        return [self.tensor[(a,)] for a in range(self.patch.d)]

    def is_zero(self) -> bool:
        return self.tensor.is_zero()

    def _compatible(self, other):
        if self.patch != other.patch or self.degree != other.degree:
            raise ValueError("normal multisections of different patch or degree")

    def __add__(self, other):
        self._compatible(other)
        return NormalMultiSection(self.patch, self.degree, self.tensor + other.tensor)

    def __neg__(self):
        return NormalMultiSection(self.patch, self.degree, -self.tensor)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "NormalMultiSection":
        return NormalMultiSection(self.patch, self.degree, self.tensor.scale(c))

    def map(self, f) -> "NormalMultiSection":
        return NormalMultiSection(self.patch, self.degree, self.tensor.map(f))

    def __eq__(self, other):
        if not isinstance(other, NormalMultiSection):
            return NotImplemented
        return self.patch == other.patch and self.degree == other.degree and self.tensor == other.tensor

    def __hash__(self):
        return hash((self.patch, self.degree, self.tensor))

    def items(self):
        return self.tensor.items()

    def label(self, idx) -> str:
        return "delta[" + ",".join(self.patch.fiber_vars[i] for i in idx) + "]"

    def __repr__(self):
        body = "; ".join(f"{self.label(k)} = {v}" for k, v in self.items())
        return f"NormalMultiSection(degree={self.degree}, {body or '0'})"


def as_normal(patch: Patch, obj, degree: int | None = None) -> NormalMultiSection:
    if isinstance(obj, NormalMultiSection):
        return obj
    if degree == 1 or (degree is None and isinstance(obj, (list, tuple))):
        return NormalMultiSection.vector(patch, obj)
    return NormalMultiSection.function(patch, obj)


class VData:
    """V-data for the zero section of the patch of ``J``."""

    def __init__(self, J: MultiOperator):
        if J.arity != 2:
            raise ValueError("V-data needs an arity-2 structure")
        self.J = J if isinstance(J, JacobiStructure) else JacobiStructure.from_operator(J)
        self.patch = J.patch
        self._chains: dict = {}

    def chain(self, args: Sequence[NormalMultiSection]) -> MultiOperator:
        """``[..[J, I xi_1].., I xi_k]`` with memoized prefixes."""
        key = tuple(args)
        if not key:
            return self.J
        hit = self._chains.get(key)
        if hit is None:
            hit = sj_bracket(self.chain(key[:-1]), include_I(key[-1]))
            self._chains[key] = hit
        return hit


# -- P and I -------------------------------------------------------------------------------


def project_P(op: MultiOperator) -> NormalMultiSection:
    patch = op.patch
    n = patch.n
    fib = patch.fiber_vars
    out = {}
    for idx, val in op.X.entries.items():
        if all(i >= n for i in idx):
            r = val.restrict_zero(fib)
            if r:
                out[tuple(i - n for i in idx)] = r
    return NormalMultiSection(patch, op.arity, AntisymTensor(op.arity, patch.d, out, _trusted=True))


def include_I(xi: NormalMultiSection) -> MultiOperator:
    patch = xi.patch
    n = patch.n
    X = {tuple(i + n for i in idx): val for idx, val in xi.tensor.entries.items()}
    return MultiOperator(patch, xi.degree, AntisymTensor(xi.degree, patch.dim, X, _trusted=True))


# -- derived brackets ----------------------------------------------------------------------


def derived_mk(V: VData, args: Sequence[NormalMultiSection]) -> NormalMultiSection:
    if not args:
        raise ValueError("m_k needs k >= 1 arguments")
    for a in args:
        if a.patch != V.patch:
            raise ValueError("patch mismatch")
    return project_P(V.chain(list(args)))


def koszul_sign(degrees: Sequence[int], perm: Sequence[int]) -> int:
    """Sign from reordering graded elements of the given (shifted) degrees into ``perm``."""
    sign = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j] and degrees[perm[i]] % 2 and degrees[perm[j]] % 2:
                sign = -sign
    return sign


def output_degree(args: Sequence[NormalMultiSection]) -> int:
    return sum(a.degree for a in args) - len(args) + 2


# -- coordinate-formula oracles --------------------------------------------------------------


def _D(patch: Patch, s: NormalMultiSection, F: Polynomial) -> Polynomial:
    acc = Polynomial.zero(patch.variables)
    for a, y in enumerate(patch.fiber_vars):
        c = s.tensor[(a,)]
        if c:
            dF = F.diff_if_present(y)
            if dF:
                acc = acc + c * dF
    return acc


def _D_chain(patch, ss, F):
    for s in reversed(ss):
        F = _D(patch, s, F)
    return F


def oracle_mk(V: VData, args: Sequence[NormalMultiSection]) -> NormalMultiSection:
    """Multibrackets of degree-0/1 arguments from the closed coordinate formulas.

    Arguments of degree 1 (even) are moved in front of the degree-0 sections
    (odd, relative order kept), which introduces no sign.
    """
    patch = V.patch
    J = V.J
    if not args:
        raise ValueError("m_k needs k >= 1 arguments")
    if any(a.degree not in (0, 1) for a in args):
        raise ValueError("coordinate formulas cover degree 0 and 1 arguments")
    ss = [a for a in args if a.degree == 1]
    lams = [a.tensor[()] for a in args if a.degree == 0]
    fib = patch.fiber_vars
    ys = [Polynomial.var(y, patch.variables) for y in fib]
    deg = output_degree(args)
    if deg < 0:
        return NormalMultiSection.zero(patch, 0)

    def restrict(F):
        return F.restrict_zero(fib)

    def br(f, g):
        return J.bracket(f, g)

    k_total = len(args)
    k = k_total - 1
    sgn = -1 if k % 2 else 1
    if len(lams) == 2:
        val = restrict(_D_chain(patch, ss, br(lams[0], lams[1]))).scale(sgn)
        return NormalMultiSection.function(patch, val)
    if len(lams) == 1:
        lam = lams[0]
        comps = {}
        for a, phi in enumerate(ys):
            val = _D_chain(patch, ss, br(lam, phi))
            for i in range(len(ss)):
                val = val - _D_chain(patch, ss[:i] + ss[i + 1:], br(lam, ss[i].tensor[(a,)]))
            val = restrict(val).scale(-sgn)
            if val:
                comps[(a,)] = val
        return NormalMultiSection(patch, 1, comps)
    comps = {}
    for c, e in combinations(range(len(ys)), 2):
        phi, psi = ys[c], ys[e]
        val = _D_chain(patch, ss, br(phi, psi))
        for i, j in combinations(range(len(ss)), 2):
            rest = [s for t, s in enumerate(ss) if t not in (i, j)]
            inner = br(ss[i].tensor[(c,)], ss[j].tensor[(e,)]) + br(ss[j].tensor[(c,)], ss[i].tensor[(e,)])
            val = val + _D_chain(patch, rest, inner)
        for i in range(len(ss)):
            rest = ss[:i] + ss[i + 1:]
            inner = br(ss[i].tensor[(c,)], psi) + br(phi, ss[i].tensor[(e,)])
            val = val - _D_chain(patch, rest, inner)
        val = restrict(val).scale(-sgn * mpq(1, 2))
        if val:
            comps[(c, e)] = val
    return NormalMultiSection(patch, 2, comps)


def _fiber_derivs(patch: Patch, F: Polynomial, fiber_indices: Iterable[int]) -> Polynomial:
    for a in fiber_indices:
        F = F.diff_if_present(patch.fiber_vars[a])
    return F


def generator_mk(V: VData, fiber_indices: Sequence[int], functions: Sequence) -> NormalMultiSection:
    """Generator formulas: ``m_{k+1}(delta_{a_1}, .., f, g)`` and the two other cases.

    ``fiber_indices`` lists the ``delta`` arguments (placed first) and
    ``functions`` the base functions (placed last, in order).
    """
    patch = V.patch
    J = V.J
    n = patch.n
    fib = patch.fiber_vars
    fs = [_as_poly(f) for f in functions]
    total = len(fiber_indices) + len(fs)
    k = total - 1
    sgn = -1 if k % 2 else 1
    if len(fs) >= 3:
        return NormalMultiSection.zero(patch, 0)
    if len(fs) == 2:
        f, g = fs
        base = range(n)
        vs = patch.variables
        inner = Polynomial.zero(vs)
        for i in base:
            for j in base:
                c = J.X[i, j]
                if c:
                    inner = inner + (c * f.diff_if_present(vs[i]) * g.diff_if_present(vs[j])).scale(2)
            c = J.G[(i,)]
            if c:
                inner = inner + c * (g * f.diff_if_present(vs[i]) - f * g.diff_if_present(vs[i]))
        val = _fiber_derivs(patch, inner, fiber_indices).restrict_zero(fib).scale(sgn)
        return NormalMultiSection.function(patch, val)
    if len(fs) == 1:
        f = fs[0]
        comps = {}
        for a in range(patch.d):
            inner = J.G[(n + a,)] * f
            for i in range(n):
                c = J.X[n + a, i]
                if c:
                    inner = inner + (c * f.diff_if_present(patch.variables[i])).scale(2)
            val = _fiber_derivs(patch, inner, fiber_indices).restrict_zero(fib).scale(sgn)
            if val:
                comps[(a,)] = val
        return NormalMultiSection(patch, 1, comps)
    comps = {}
    for a, b in combinations(range(patch.d), 2):
        val = _fiber_derivs(patch, J.X[n + a, n + b], fiber_indices).restrict_zero(fib).scale(-sgn)
        if val:
            comps[(a, b)] = val
    return NormalMultiSection(patch, 2, comps)


def generator_tuples(patch: Patch, functions: Sequence, max_arity: int):
    """Generator tuples up to ``max_arity``: a multiset of ``delta_a`` followed by
    at most two of the given functions.  Yields ``(args, fiber_indices, functions)``.
    """
    for k in range(1, max_arity + 1):
        for j in range(0, min(2, k) + 1):
            for deltas in combinations_with_replacement(range(patch.d), k - j):
                for fns in product(range(len(functions)), repeat=j):
                    args = [NormalMultiSection.generator(patch, a) for a in deltas]
                    args += [NormalMultiSection.function(patch, functions[i]) for i in fns]
                    yield args, list(deltas), [functions[i] for i in fns]


# -- coisotropy ----------------------------------------------------------------------------------


def is_coisotropic_submanifold(V: VData) -> bool:
    """``P(J) = 0``, cross-checked with tangency of Hamiltonian vector fields."""
    algebraic = project_P(V.J).is_zero()
    tangent = _tangency(V)
    if algebraic != tangent:
        raise RuntimeError("coisotropy criteria disagree")
    return algebraic


def _tangency(V: VData) -> bool:
    patch = V.patch
    n = patch.n
    fib = patch.fiber_vars
    probes = [Polynomial.constant(1, patch.variables)] + [Polynomial.var(x, patch.variables) for x in patch.base_vars]
    for a, y in enumerate(fib):
        for f in probes:
            lam = Polynomial.var(y, patch.variables) * f
            _, X = hamiltonian(V.J, lam)
            for b in range(patch.d):
                if X[n + b].restrict_zero(fib):
                    return False
    return True


def is_coisotropic_section(V: VData, s) -> bool:
    """The graph ``y = s(x)`` is coisotropic iff ``P(exp I(-s)_* J) = 0``."""
    s = as_normal(V.patch, s, 1)
    return project_P(pushforward_fiber_affine(V.J, s.components(), -1)).is_zero()


def graded_symmetry_holds(V: VData, args: Sequence[NormalMultiSection], perm: Sequence[int]) -> bool:
    lhs = derived_mk(V, [args[i] for i in perm])
    rhs = derived_mk(V, args)
    sign = koszul_sign([a.shifted_degree for a in args], perm)
    return lhs == (rhs if sign > 0 else -rhs)


def linf_relation(V: VData, args: Sequence[NormalMultiSection], mk=derived_mk) -> NormalMultiSection | None:
    """``sum_{i+j=n+1} sum_{unshuffles} eps m_j(m_i(..), ..)``; zero for an L-infinity algebra."""
    n = len(args)
    degs = [a.shifted_degree for a in args]
    total = None
    for i in range(1, n + 1):
        for first in combinations(range(n), i):
            rest = tuple(t for t in range(n) if t not in first)
            perm = first + rest
            eps = koszul_sign(degs, perm)
            inner = mk(V, [args[t] for t in first])
            if inner.degree < 0 or inner.is_zero():
                continue
            outer = mk(V, [inner] + [args[t] for t in rest])
            if outer.degree < 0 or outer.is_zero():
                continue
            term = outer if eps > 0 else -outer
            if total is None:
                total = term
            elif total.degree == term.degree:
                total = total + term
            else:
                raise AssertionError("inconsistent output degrees")
    return total


def factorial_mpq(k: int):
    return mpq(1, factorial(k))
