"""Example Jacobi structures, each validated when constructed."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from gmpy2 import mpq

from .operators import JacobiStructure, Patch, hamiltonian, jacobi_check
from .poissonization import MultiVector, _det, is_poisson, jacobi_pair
from .ring import Polynomial
from .vdata import VData, is_coisotropic_submanifold


class CatalogError(ValueError):
    def __init__(self, message: str, witness: str | None = None):
        super().__init__(message if witness is None else f"{message}: {witness}")
        self.witness = witness


@dataclass
class NamedStructure:
    name: str
    patch: Patch
    J: JacobiStructure
    notes: list = field(default_factory=list)


def contact_names(n: int) -> tuple[tuple, str, tuple]:
    xs = tuple(f"x{i}" for i in range(1, n + 1))
    ps = tuple(f"p{i}" for i in range(1, n + 1))
    return xs, "u", ps


def _contact_candidate(patch: Patch, n: int, sign: int) -> JacobiStructure:
    # Lambda = sign * sum_i d_{p_i} ^ (d_{x_i} + p_i d_u), stored as J^{ab} = Lambda^{ab} / 2.
    xs, u, ps = contact_names(n)
    half = mpq(sign, 2)
    biv = {}
    for x, p in zip(xs, ps):
        biv[(p, x)] = Polynomial.constant(half, patch.variables)
        biv[(p, u)] = Polynomial.var(p, patch.variables).scale(half)
    return JacobiStructure(patch, biv, {u: -1})


def extended_pairing_matrix(J: JacobiStructure) -> list:
    """Matrix of the bi-symbol extended by the id block: ``[[Lambda, Gamma], [-Gamma, 0]]``."""
    Lam, Gam = jacobi_pair(J)
    m = J.patch.dim
    rows = []
    for a in range(m):
        rows.append([Lam[a, b] for b in range(m)] + [Gam[(a,)]])
    rows.append([-Gam[(b,)] for b in range(m)] + [Polynomial.zero()])
    return rows


def darboux_contact(n: int, patch: Patch | None = None) -> NamedStructure:
    """Jacobi structure of the contact form ``du - p_i dx^i`` on ``(x^i, u, p_i)``.

    The Reeb field is ``d_u``; the bivector is ``-/+ d_{p_i} ^ (d_{x^i} + p_i d_u)``
    and the sign is the one for which ``[J, J] = 0``.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    xs, u, ps = contact_names(n)
    if patch is None:
        patch = Patch(xs + (u,) + ps, ())
    passing = []
    for sign in (1, -1):
        J = _contact_candidate(patch, n, sign)
        res = jacobi_check(J)
        if res.ok:
            passing.append((sign, J, res))
    if len(passing) != 1:
        raise CatalogError("expected exactly one admissible sign", str([s for s, _, _ in passing]))
    sign, J, res = passing[0]
    if not res.classical_ok:
        raise CatalogError("bivector/vector field identity fails")
    det = _det(extended_pairing_matrix(J))
    if not det.is_constant() or not det:
        raise CatalogError("extended bi-symbol pairing is degenerate", str(det))
    _, reeb = hamiltonian(J, Polynomial.constant(1, patch.variables))
    if any(reeb[i] != (1 if patch.variables[i] == u else 0) for i in range(patch.dim)):
        raise CatalogError("Reeb field is not d_u")
    notes = [f"bivector sign {sign:+d} selected by [J,J]=0", "bivector/vector field identity holds",
             f"extended pairing determinant {det}", "Reeb field d_u"]
    return NamedStructure(f"darboux_contact({n})", patch, J, notes)


def legendrian_patch(n: int) -> VData:
    """Zero section ``{u = p = 0}``: base ``x``, fibers ``(u, p)``."""
    xs, u, ps = contact_names(n)
    patch = Patch(xs, (u,) + ps)
    st = darboux_contact(n, patch)
    V = VData(st.J)
    if not is_coisotropic_submanifold(V):
        raise CatalogError("Legendrian zero section is not coisotropic")
    if fiber_degree(st.J) > 1:
        raise CatalogError("structure is not fiber-wise linear")
    return V


def flowout_patch(n: int) -> VData:
    """``{p = 0}``: base ``(x, u)``, fibers ``p``."""
    xs, u, ps = contact_names(n)
    patch = Patch(xs + (u,), ps)
    st = darboux_contact(n, patch)
    V = VData(st.J)
    if not is_coisotropic_submanifold(V):
        raise CatalogError("flowout is not coisotropic")
    return V


def fiber_degree(J) -> int:
    fib = J.patch.fiber_vars
    return max([v.degree(fib) for _, _, v in J.components()] or [-1])


def poisson_as_jacobi(patch: Patch, bivector: Mapping) -> NamedStructure:
    """Jacobi structure with ``Gamma = 0`` from bivector components ``Lambda^{ij}``
    (so that ``{f, g} = Lambda^{ij} d_i f d_j g`` summed over all ``i, j``)."""
    entries = {}
    for k, v in bivector.items():
        k = tuple(patch.index(i) if isinstance(i, str) else i for i in k)
        if isinstance(v, str):
            v = patch.poly(v)
        elif not isinstance(v, Polynomial):
            v = Polynomial.constant(v, patch.variables)
        if k[::-1] in entries and entries[k[::-1]] != -v:
            raise CatalogError("bivector components are not antisymmetric", str(k))
        entries[k] = v
    canon = {}
    for k, v in entries.items():
        if k[0] < k[1]:
            canon[k] = v
        elif k[::-1] not in entries:
            canon[k[::-1]] = -v
    Lam = MultiVector(patch.variables, 2, canon)
    J = JacobiStructure(patch, {k: v.scale(mpq(1, 2)) for k, v in canon.items()}, {})
    res = jacobi_check(J)
    sn = is_poisson(Lam)
    if res.ok != sn.ok:
        raise RuntimeError("Schouten-Jacobi and Schouten-Nijenhuis checks disagree")
    if not res.ok:
        raise CatalogError("bivector is not Poisson", res.witness or sn.witness)
    return NamedStructure("poisson", patch, J, ["[J,J]=0", "[Lambda,Lambda]=0"])


CATALOG = {
    "darboux_contact": darboux_contact,
    "legendrian_patch": legendrian_patch,
    "flowout_patch": flowout_patch,
}
