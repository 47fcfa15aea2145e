"""Multivector fields, the Schouten-Nijenhuis bracket, and the homogeneous
Poisson model of a Jacobi structure.

Multivectors are super-polynomials ``sum_I P^I zeta_I`` in odd variables
``zeta_i`` dual to the coordinates; ``P(dF_1..dF_k) = sum_{I increasing} P^I
det(d_{I_j} F_i)``.  The bracket is

    [P, Q] = sum_i (P d/dzeta_i <-)(d_i Q) - (-1)^{(p-1)(q-1)} (Q d/dzeta_i <-)(d_i P)

which restricts to the Lie bracket on vector fields and gives ``[X, f] = X(f)``.

The Poissonization lives on the patch extended by a homogeneity coordinate
``t`` (listed first); sections ``f mu`` correspond to the functions ``t f``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial
from typing import Mapping, Sequence

from gmpy2 import mpq

from .operators import CheckResult, MultiOperator, Patch, first_witness
from .ring import AntisymTensor, LaurentPolynomial, Polynomial, sort_with_sign

T_VAR = "t"


def _t_name(patch: Patch) -> str:
    name = T_VAR
    while name in patch.variables:
        name = name + "t"
    return name


class MultiVector:
    """Rank-``k`` multivector on the coordinate list ``coords``."""

    __slots__ = ("coords", "rank", "entries", "laurent_var")

    def __init__(self, coords: Sequence[str], rank: int, entries: Mapping | None = None,
                 laurent_var: str | None = None):
        self.coords = tuple(coords)
        self.rank = rank
        self.laurent_var = laurent_var
        T = AntisymTensor(rank, len(self.coords), {k: v for k, v in (entries or {}).items()})
        for v in T.entries.values():
            self._check_laurent(v)
        self.entries = T.entries

    def _check_laurent(self, v: Polynomial):
        for exp in v.terms:
            for name, e in zip(v.variables, exp):
                if e < 0 and name != self.laurent_var:
                    raise ValueError(f"negative power of {name!r} in a multivector entry")

    @classmethod
    def _trusted(cls, coords, rank, entries, laurent_var):
        obj = cls.__new__(cls)
        obj.coords, obj.rank, obj.entries, obj.laurent_var = coords, rank, entries, laurent_var
        return obj

    def __getitem__(self, idx) -> Polynomial:
        return AntisymTensor(self.rank, len(self.coords), self.entries, _trusted=True)[idx]

    def is_zero(self) -> bool:
        return not self.entries

    def _combine(self, other, sign):
        if self.coords != other.coords or self.rank != other.rank:
            raise ValueError("multivector shape mismatch")
        out = dict(self.entries)
        for k, v in other.entries.items():
            v = v if sign > 0 else -v
            out[k] = out[k] + v if k in out else v
        return MultiVector._trusted(self.coords, self.rank, {k: v for k, v in out.items() if v},
                                    self.laurent_var or other.laurent_var)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c) -> "MultiVector":
        out = {}
        for k, v in self.entries.items():
            w = v * c if isinstance(c, Polynomial) else v.scale(c)
            if w:
                out[k] = w
        return MultiVector._trusted(self.coords, self.rank, out, self.laurent_var)

    def __eq__(self, other):
        if not isinstance(other, MultiVector):
            return NotImplemented
        return self.coords == other.coords and self.rank == other.rank and (self - other).is_zero()

    def __hash__(self):
        return hash((self.coords, self.rank, frozenset(self.entries.items())))

    def items(self):
        return sorted(self.entries.items())

    def evaluate(self, functions: Sequence[Polynomial]) -> Polynomial:
        """``P(dF_1, ..., dF_k)``."""
        if len(functions) != self.rank:
            raise ValueError("wrong number of arguments")
        if self.rank == 0:
            return self.entries.get((), Polynomial.zero())
        grads = [[f.diff_if_present(c) for c in self.coords] for f in functions]
        acc = Polynomial.zero()
        for I, val in self.entries.items():
            acc = acc + val * _det([[g[i] for i in I] for g in grads])
        return acc

    def __repr__(self):
        body = "; ".join(f"[{','.join(self.coords[i] for i in k)}] = {v}" for k, v in self.items())
        return f"MultiVector(rank={self.rank}, {body or '0'})"


def _det(rows):
    if not rows:
        return Polynomial.constant(1)
    acc = Polynomial.zero()
    for j, e in enumerate(rows[0]):
        if not e:
            continue
        minor = _det([r[:j] + r[j + 1:] for r in rows[1:]])
        term = e * minor
        acc = acc + (term if j % 2 == 0 else -term)
    return acc


def _right_derivative(P: MultiVector, i: int) -> dict:
    out = {}
    for I, val in P.entries.items():
        if i in I:
            m = I.index(i)
            sign = -1 if (len(I) - 1 - m) % 2 else 1
            out[I[:m] + I[m + 1:]] = val if sign > 0 else -val
    return out


def _zeta_product(A: dict, B: dict) -> dict:
    out: dict = {}
    for I, a in A.items():
        for K, b in B.items():
            sign, key = sort_with_sign(I + K)
            if sign == 0:
                continue
            term = a * b
            if sign < 0:
                term = -term
            out[key] = out[key] + term if key in out else term
    return {k: v for k, v in out.items() if v}


def wedge(A: MultiVector, B: MultiVector) -> MultiVector:
    if A.coords != B.coords:
        raise ValueError("coordinate mismatch")
    return MultiVector._trusted(A.coords, A.rank + B.rank, _zeta_product(A.entries, B.entries),
                                A.laurent_var or B.laurent_var)


def sn_bracket(A: MultiVector, B: MultiVector) -> MultiVector:
    """Schouten-Nijenhuis bracket, rank ``p + q - 1``."""
    if A.coords != B.coords:
        raise ValueError("patch mismatch")
    p, q = A.rank, B.rank
    rank = p + q - 1
    lv = A.laurent_var or B.laurent_var
    if rank < 0:
        return MultiVector._trusted(A.coords, 0, {}, lv)
    total: dict = {}

    def accumulate(d, sign):
        for k, v in d.items():
            v = v if sign > 0 else -v
            total[k] = total[k] + v if k in total else v

    swap = -1 if ((p - 1) * (q - 1)) % 2 else 1
    for i, c in enumerate(A.coords):
        dB = {k: v.diff_if_present(c) for k, v in B.entries.items()}
        dB = {k: v for k, v in dB.items() if v}
        if dB:
            accumulate(_zeta_product(_right_derivative(A, i), dB), 1)
        dA = {k: v.diff_if_present(c) for k, v in A.entries.items()}
        dA = {k: v for k, v in dA.items() if v}
        if dA:
            accumulate(_zeta_product(_right_derivative(B, i), dA), -swap)
    return MultiVector._trusted(A.coords, rank, {k: v for k, v in total.items() if v}, lv)


def function(coords: Sequence[str], f: Polynomial, laurent_var: str | None = None) -> MultiVector:
    return MultiVector._trusted(tuple(coords), 0, {(): f} if f else {}, laurent_var)


# -- the homogeneous Poisson model ---------------------------------------------------------


def extended_coords(patch: Patch) -> tuple:
    return (_t_name(patch),) + patch.variables


def _laurent(p: Polynomial, tv: str, shift: int, coords) -> LaurentPolynomial:
    L = LaurentPolynomial.from_polynomial(p.with_variables(tuple(coords) + tuple(v for v in p.variables if v not in coords)), tv)
    return L.t_power(shift) if shift else L


def tilde_op(op: MultiOperator) -> MultiVector:
    """Homogeneous multivector with ``tilde(op)(t f_1, .., t f_k) = t op(f_1..f_k)``."""
    coords = extended_coords(op.patch)
    tv = coords[0]
    k = op.arity
    out = {}
    for I, val in op.X.entries.items():
        out[tuple(i + 1 for i in I)] = _laurent(val.scale(factorial(k)), tv, 1 - k, coords)
    if k >= 1:
        sign = -1 if (k - 1) % 2 else 1
        for J, val in op.G.entries.items():
            out[(0,) + tuple(i + 1 for i in J)] = _laurent(val.scale(sign * factorial(k - 1)), tv, 2 - k, coords)
    return MultiVector._trusted(coords, k, out, tv)


def poissonize(J: MultiOperator) -> MultiVector:
    """``Pi^{ab} = 2 J^{ab} / t`` and ``Pi^{t a} = -J^a`` on the extended patch."""
    if J.arity != 2:
        raise ValueError("poissonize expects a Jacobi structure")
    coords = extended_coords(J.patch)
    tv = coords[0]
    out = {}
    for (a, b), val in J.X.entries.items():
        out[(a + 1, b + 1)] = _laurent(val.scale(2), tv, -1, coords)
    for (a,), val in J.G.entries.items():
        out[(0, a + 1)] = _laurent(-val, tv, 0, coords)
    return MultiVector._trusted(coords, 2, out, tv)


def euler_field(patch: Patch) -> MultiVector:
    coords = extended_coords(patch)
    tv = coords[0]
    return MultiVector._trusted(coords, 1, {(0,): LaurentPolynomial.from_polynomial(Polynomial.var(tv, coords), tv)}, tv)


def homogeneous_function(patch: Patch, f: Polynomial) -> MultiVector:
    coords = extended_coords(patch)
    return function(coords, _laurent(f, coords[0], 1, coords), coords[0])


@dataclass
class PoissonizationReport:
    homogeneous: bool
    poisson: bool
    jacobi: bool
    witness: str | None


def check_poissonization(J: MultiOperator) -> PoissonizationReport:
    from .operators import jacobi_check

    Pi = poissonize(J)
    E = euler_field(J.patch)
    homog = sn_bracket(Pi, E) == Pi
    PP = sn_bracket(Pi, Pi)
    wit = None
    if not PP.is_zero():
        k, v = PP.items()[0]
        wit = f"[{','.join(PP.coords[i] for i in k)}] = {v}"
    return PoissonizationReport(homog, PP.is_zero(), jacobi_check(J, classical=False).ok, wit)


# -- the bivector / vector field reading ------------------------------------------------------

# Under the conventions above a Jacobi pair satisfies [Lambda, Lambda] = JAC_PAIR_CONSTANT Gamma ^ Lambda.
JAC_PAIR_CONSTANT = -2


def jacobi_pair(J: MultiOperator) -> tuple[MultiVector, MultiVector]:
    """``(Lambda, Gamma)`` with ``{f,g} = Lambda(df,dg) + f Gamma(g) - g Gamma(f)``.

    ``Lambda^{ab} = 2 J^{ab}`` and ``Gamma^a = -J^a``.
    """
    coords = J.patch.variables
    Lam = MultiVector._trusted(coords, 2, {k: v.scale(2) for k, v in J.X.entries.items()}, None)
    Gam = MultiVector._trusted(coords, 1, {k: -v for k, v in J.G.entries.items()}, None)
    return Lam, Gam


def classical_jacobi_check(J: MultiOperator) -> CheckResult:
    """``[Gamma, Lambda] = 0`` and ``[Lambda, Lambda] = c Gamma ^ Lambda``."""
    Lam, Gam = jacobi_pair(J)
    first = sn_bracket(Gam, Lam)
    second = sn_bracket(Lam, Lam) - wedge(Gam, Lam).scale(JAC_PAIR_CONSTANT)
    ok = first.is_zero() and second.is_zero()
    wit = None
    for name, mv in (("[Gamma,Lambda]", first), ("[Lambda,Lambda]-c*Gamma^Lambda", second)):
        if not mv.is_zero():
            k, v = mv.items()[0]
            wit = f"{name}[{','.join(mv.coords[i] for i in k)}] = {v}"
            break
    return CheckResult(ok, wit)


def bivector_to_jacobi(patch: Patch, Lam: MultiVector):
    from .operators import JacobiStructure

    return JacobiStructure(patch, {k: v.scale(mpq(1, 2)) for k, v in Lam.entries.items()}, {})


def is_poisson(Lam: MultiVector) -> CheckResult:
    LL = sn_bracket(Lam, Lam)
    wit = None
    if not LL.is_zero():
        k, v = LL.items()[0]
        wit = f"[{','.join(LL.coords[i] for i in k)}] = {v}"
    return CheckResult(LL.is_zero(), wit)


def coisotropy_transport(J: MultiOperator) -> bool:
    """Pure-normal components of the Poissonization vanish along ``y = 0``."""
    Pi = poissonize(J)
    n = J.patch.n
    fib = set(J.patch.fiber_vars)
    for idx, val in Pi.entries.items():
        if all(i - 1 >= n for i in idx) and val.restrict_zero(fib):
            return False
    return True


__all__ = [
    "MultiVector", "sn_bracket", "wedge", "function", "tilde_op", "poissonize", "euler_field",
    "homogeneous_function", "check_poissonization", "jacobi_pair", "classical_jacobi_check",
    "is_poisson", "coisotropy_transport", "first_witness",
]
