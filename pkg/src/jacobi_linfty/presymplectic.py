"""Pre-symplectic local models, their symplectic thickening and closed-form
multibrackets on generators.

Coordinates: leaf coordinates ``x^i`` (i < n), transverse ``u^a`` (a < d) and
fiber coordinates ``p_i`` of the thickening.  The complement is spanned by
``GG_a = d/du^a + G^i_a d/dx^i``; ``W = (omega_ab)`` and the curvature is
``F^i_ab = GG_a G^i_b - GG_b G^i_a``.  The generator ``d_F x^i`` corresponds to
the constant normal section ``delta_{p_i}``.

``W^{-1}`` is exact when ``det W`` is a nonzero constant.  Otherwise ``W`` is
frozen at a rational reference point: brackets of generators never
differentiate ``W^{-1}`` along the leaves or transversally, so both routes stay
comparable as polynomial identities.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations, product
from typing import Sequence

from gmpy2 import mpq

from .operators import JacobiStructure, Patch
from .poissonization import MultiVector, _det, jacobi_pair, sn_bracket
from .ring import AntisymTensor, Polynomial, parse
from .vdata import NormalMultiSection, VData, derived_mk, koszul_sign


Matrix = list  # list of rows of Polynomials


@dataclass
class PreSympData:
    n: int
    d: int
    W: Matrix
    G: Matrix  # G[i][a]
    reference_point: dict = field(default_factory=dict)
    x_names: tuple = ()
    u_names: tuple = ()
    p_names: tuple = ()

    def __post_init__(self):
        if not self.x_names:
            self.x_names = tuple(f"x{i + 1}" for i in range(self.n))
        if not self.u_names:
            self.u_names = tuple(f"u{a + 1}" for a in range(self.d))
        if not self.p_names:
            self.p_names = tuple(f"p{i + 1}" for i in range(self.n))
        ctx = self.base_vars
        self.W = [[_poly(e, ctx) for e in row] for row in self.W]
        self.G = [[_poly(e, ctx) for e in row] for row in self.G]
        if len(self.W) != self.d or any(len(r) != self.d for r in self.W):
            raise ValueError("W must be d x d")
        if len(self.G) != self.n or any(len(r) != self.d for r in self.G):
            raise ValueError("G must be n x d")
        for a in range(self.d):
            for b in range(self.d):
                if self.W[a][b] != -self.W[b][a]:
                    raise ValueError("W must be antisymmetric")
        for row in self.W + self.G:
            for e in row:
                if set(e.used_variables()) - set(ctx):
                    raise ValueError("W and G may depend on x and u only")
        for v in ctx:
            self.reference_point.setdefault(v, 0)
        self.reference_point = {v: mpq(c) for v, c in self.reference_point.items()}

    @property
    def base_vars(self) -> tuple:
        return self.x_names + self.u_names

    @property
    def patch(self) -> Patch:
        return Patch(self.base_vars, self.p_names)

    def frame_apply(self, a: int, f: Polynomial) -> Polynomial:
        """``GG_a f``."""
        out = f.diff_if_present(self.u_names[a])
        for i, x in enumerate(self.x_names):
            g = self.G[i][a]
            if g:
                out = out + g * f.diff_if_present(x)
        return out


def _poly(e, ctx) -> Polynomial:
    if isinstance(e, Polynomial):
        return e
    if isinstance(e, str):
        return parse(e, ctx)
    return Polynomial.constant(e, ctx)


def curvature_F(data: PreSympData) -> list:
    """``F[i]`` as an antisymmetric ``d x d`` tensor of Polynomials."""
    out = []
    for i in range(data.n):
        entries = {}
        for a in range(data.d):
            for b in range(a + 1, data.d):
                val = data.frame_apply(a, data.G[i][b]) - data.frame_apply(b, data.G[i][a])
                if val:
                    entries[(a, b)] = val
        out.append(AntisymTensor(2, data.d, entries))
    return out


def _as_matrix(T: AntisymTensor) -> Matrix:
    return [[T[a, b] for b in range(T.dim)] for a in range(T.dim)]


def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    n, m, k = len(A), len(B[0]) if B else 0, len(B)
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = Polynomial.zero()
            for t in range(k):
                if A[i][t] and B[t][j]:
                    acc = acc + A[i][t] * B[t][j]
            row.append(acc)
        out.append(row)
    return out


def mat_add(A: Matrix, B: Matrix) -> Matrix:
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_scale(A: Matrix, c) -> Matrix:
    return [[a * c if isinstance(c, Polynomial) else a.scale(c) for a in row] for row in A]


def mat_zero(n: int) -> Matrix:
    return [[Polynomial.zero() for _ in range(n)] for _ in range(n)]


def mat_equal(A: Matrix, B: Matrix) -> bool:
    return all(a == b for ra, rb in zip(A, B) for a, b in zip(ra, rb))


def _minor(A, i, j):
    return [row[:j] + row[j + 1:] for k, row in enumerate(A) if k != i]


def matrix_inverse(data: PreSympData) -> tuple[Matrix, str]:
    """``W^{-1}`` and the mode used (``"exact"`` or ``"reference"``)."""
    W = data.W
    det = _det(W)
    if det.is_constant() and det:
        mode = "exact"
        M = W
        dval = det.constant_value()
    else:
        mode = "reference"
        M = [[e.evaluate(data.reference_point) for e in row] for row in W]
        dpoly = _det(M)
        dval = dpoly.constant_value() if dpoly.is_constant() else None
        if not dval:
            raise ZeroDivisionError("W is singular at the reference point")
    n = len(M)
    inv = []
    for i in range(n):
        row = []
        for j in range(n):
            cof = _det(_minor(M, j, i)) if n > 1 else Polynomial.constant(1)
            if (i + j) % 2:
                cof = -cof
            row.append(cof.scale(mpq(1) / dval))
        inv.append(row)
    return inv, mode


def wtilde_inverse_jets(data: PreSympData, m: int, W_inv: Matrix | None = None) -> dict:
    """``d^m (W + p F)^{-1} / dp_{i_1}..dp_{i_m}`` at ``p = 0`` by the permutation formula."""
    if W_inv is None:
        W_inv, _ = matrix_inverse(data)
    F = [_as_matrix(T) for T in curvature_F(data)]
    out = {}
    for idx in product(range(data.n), repeat=m):
        acc = mat_zero(data.d)
        for perm in permutations(range(m)):
            M = W_inv
            for t in perm:
                M = mat_mul(mat_mul(M, F[idx[t]]), W_inv)
            acc = mat_add(acc, M)
        out[idx] = mat_scale(acc, (-1) ** m)
    return out


def neumann_inverse(data: PreSympData, order: int, W_inv: Matrix | None = None) -> Matrix:
    """``sum_{k <= order} (-1)^k W^{-1} (p_i F^i W^{-1})^k`` as a polynomial matrix in ``p``."""
    if W_inv is None:
        W_inv, _ = matrix_inverse(data)
    ctx = data.base_vars + data.p_names
    F = [_as_matrix(T) for T in curvature_F(data)]
    pF = mat_zero(data.d)
    for i, p in enumerate(data.p_names):
        pF = mat_add(pF, mat_scale(F[i], Polynomial.var(p, ctx)))
    step = mat_mul(pF, W_inv)
    term = W_inv
    total = W_inv
    for k in range(1, order + 1):
        term = mat_scale(mat_mul(term, step), -1)
        total = mat_add(total, term)
    return total


def neumann_jets(data: PreSympData, m: int, W_inv: Matrix | None = None) -> dict:
    """Jets of :func:`neumann_inverse` obtained by differentiating in ``p``."""
    N = neumann_inverse(data, m, W_inv)
    out = {}
    for idx in product(range(data.n), repeat=m):
        M = N
        for i in idx:
            M = [[e.diff_if_present(data.p_names[i]) for e in row] for row in M]
        out[idx] = [[e.restrict_zero(data.p_names) for e in row] for row in M]
    return out


# -- the thickening ---------------------------------------------------------------------------


@dataclass
class ThickenedPoisson:
    data: PreSympData
    K: int
    J: JacobiStructure
    W_inv: Matrix
    mode: str

    @property
    def patch(self) -> Patch:
        return self.J.patch

    def vdata(self) -> VData:
        return VData(self.J)


def thickening_poisson(data: PreSympData, K: int = 4) -> ThickenedPoisson:
    """``Pi = -1/2 w^{ab} X_a ^ X_b - d/dp_i ^ d/dx^i`` with ``w^{ab}`` truncated at p-order ``K``."""
    W_inv, mode = matrix_inverse(data)
    patch = data.patch
    ctx = patch.variables
    M = neumann_inverse(data, K, W_inv)
    n, d = data.n, data.d
    # X_a components over the coordinate list (x, u, p)
    X = []
    for a in range(d):
        comp = [Polynomial.zero(ctx) for _ in range(patch.dim)]
        for i in range(n):
            comp[i] = data.G[i][a].with_variables(ctx)
        comp[n + a] = Polynomial.constant(1, ctx)
        for i in range(n):
            acc = Polynomial.zero(ctx)
            for j, pj in enumerate(data.p_names):
                dG = data.G[j][a].diff_if_present(data.x_names[i])
                if dG:
                    acc = acc - Polynomial.var(pj, ctx) * dG
            comp[n + d + i] = acc
        X.append(comp)
    entries = {}
    for al in range(patch.dim):
        for be in range(al + 1, patch.dim):
            acc = Polynomial.zero(ctx)
            for a in range(d):
                for b in range(d):
                    if M[a][b] and X[a][al] and X[b][be]:
                        acc = acc - M[a][b] * X[a][al] * X[b][be]
            if acc:
                entries[(al, be)] = acc
    for i in range(n):
        key = (i, n + d + i)
        entries[key] = entries.get(key, Polynomial.zero(ctx)) + 1
    J = JacobiStructure(patch, {k: v.scale(mpq(1, 2)) for k, v in entries.items() if v}, {})
    return ThickenedPoisson(data, K, J, W_inv, mode)


def poisson_defect_vanishes(T: ThickenedPoisson) -> bool:
    """``[Pi, Pi]`` has no terms of p-degree below ``K``."""
    Lam, _ = jacobi_pair(T.J)
    ps = T.data.p_names
    # one p-derivative at most: terms of degree > K cannot reach degree < K
    Lam = MultiVector(Lam.coords, 2, {k: v.truncate(ps, T.K) for k, v in Lam.entries.items()})
    return all(not v.truncate(ps, T.K - 1) for v in sn_bracket(Lam, Lam).entries.values())


# -- closed-form multibrackets ------------------------------------------------------------------------


def _chain(W_inv, F, indices):
    M = W_inv
    for i in indices:
        M = mat_mul(mat_mul(M, F[i]), W_inv)
    return M


def _split_generators(data: PreSympData, args: Sequence[NormalMultiSection]):
    dx, fs = [], []
    for a in args:
        if a.degree == 1:
            items = a.tensor.items()
            if len(items) != 1 or items[0][1] != 1:
                raise ValueError("degree-1 arguments must be generators d_F x^i")
            dx.append(items[0][0][0])
        elif a.degree == 0:
            fs.append(a.tensor[()])
        else:
            raise ValueError("arguments must be generators")
    return dx, fs


def ohpark_mk(T: ThickenedPoisson, args: Sequence[NormalMultiSection]) -> NormalMultiSection:
    """Closed-form brackets on generators ``d_F x^i`` (as ``delta_{p_i}``) and functions ``f(x, u)``."""
    data = T.data
    patch = T.patch
    ctx = patch.variables
    if len(args) > T.K + 1:
        raise ValueError("arity exceeds the available jet order")
    dx, fs = _split_generators(data, args)
    W_inv = T.W_inv
    F = [_as_matrix(t) for t in curvature_F(data)]
    n, d = data.n, data.d
    total = len(args)
    if len(fs) > 2:
        return NormalMultiSection.zero(patch, 0)
    if total == 1:
        if fs:
            f = fs[0]
            return NormalMultiSection(patch, 1, {(l,): -f.diff_if_present(x) for l, x in enumerate(data.x_names)})
        return NormalMultiSection.zero(patch, 2)
    dG = [[[data.G[j][a].diff_if_present(x) for a in range(d)] for x in data.x_names] for j in range(n)]
    # dG[j][l][a] = d G^j_a / d x^l
    if len(fs) == 2:
        f, g = fs
        Gf = [data.frame_apply(a, f) for a in range(d)]
        Gg = [data.frame_apply(a, g) for a in range(d)]
        acc = Polynomial.zero(ctx)
        for perm in permutations(dx):
            M = _chain(W_inv, F, perm)
            for a in range(d):
                for b in range(d):
                    if M[a][b]:
                        acc = acc + M[a][b] * Gf[a] * Gg[b]
        return NormalMultiSection.function(patch, acc)
    if len(fs) == 1:
        f = fs[0]
        Gf = [data.frame_apply(a, f) for a in range(d)]
        comps = [Polynomial.zero(ctx) for _ in range(n)]
        for perm in permutations(dx):
            M = _chain(W_inv, F, perm[:-1])
            last = perm[-1]
            for l in range(n):
                for a in range(d):
                    for b in range(d):
                        if M[a][b] and dG[last][l][a] and Gf[b]:
                            comps[l] = comps[l] - M[a][b] * dG[last][l][a] * Gf[b]
        return NormalMultiSection(patch, 1, {(l,): c for l, c in enumerate(comps) if c})
    coeff = [[Polynomial.zero(ctx) for _ in range(n)] for _ in range(n)]
    for perm in permutations(dx):
        M = _chain(W_inv, F, perm[:-2])
        r, s = perm[-2], perm[-1]
        for l in range(n):
            for m in range(n):
                for a in range(d):
                    for b in range(d):
                        if M[a][b] and dG[r][l][a] and dG[s][m][b]:
                            coeff[l][m] = coeff[l][m] - (M[a][b] * dG[r][l][a] * dG[s][m][b]).scale(mpq(1, 2))
    # sum_{l,m} c^{lm} delta_l ^ delta_m has normal-form entries (c^{lm} - c^{ml}) / 2
    entries = {}
    for l in range(n):
        for m in range(l + 1, n):
            v = (coeff[l][m] - coeff[m][l]).scale(mpq(1, 2))
            if v:
                entries[(l, m)] = v
    return NormalMultiSection(patch, 2, entries)


def ohpark_function_pair(T: ThickenedPoisson, args: Sequence[NormalMultiSection]) -> NormalMultiSection:
    """The normalized permutation-sum formula for arguments ``(d_F x.., f, g)``.

    ``1/2 sum_sigma eps(sigma) <d_G w_s1, (A_s2 .. A_s(k-1)) d_G w_sk>`` with
    ``<alpha, beta> = alpha W^{-1} beta`` and ``A(d_F x^i) beta = F^i W^{-1} beta``.
    Orderings that place a function in the middle or a form at an end vanish.
    """
    data = T.data
    patch = T.patch
    dx, fs = _split_generators(data, args)
    if len(fs) != 2:
        raise ValueError("exactly two function arguments expected")
    F = [_as_matrix(t) for t in curvature_F(data)]
    items = [("x", i) for i in dx] + [("f", f) for f in fs]
    degs = [0] * len(dx) + [1, 1]
    acc = Polynomial.zero(patch.variables)
    for perm in permutations(range(len(items))):
        first, last = items[perm[0]], items[perm[-1]]
        if first[0] != "f" or last[0] != "f" or any(items[t][0] != "x" for t in perm[1:-1]):
            continue
        eps = koszul_sign(degs, perm)
        M = _chain(T.W_inv, F, [items[t][1] for t in perm[1:-1]])
        alpha = [data.frame_apply(a, first[1]) for a in range(data.d)]
        beta = [data.frame_apply(a, last[1]) for a in range(data.d)]
        val = Polynomial.zero(patch.variables)
        for a in range(data.d):
            for b in range(data.d):
                if M[a][b]:
                    val = val + alpha[a] * M[a][b] * beta[b]
        acc = acc + (val if eps > 0 else -val)
    return NormalMultiSection.function(patch, acc.scale(mpq(1, 2)))


def generator_args(T: ThickenedPoisson, dx: Sequence[int], fs: Sequence[Polynomial]) -> list:
    patch = T.patch
    return [NormalMultiSection.generator(patch, i) for i in dx] + [NormalMultiSection.function(patch, f) for f in fs]


def cross_check(T: ThickenedPoisson, functions: Sequence[Polynomial], max_arity: int = 4):
    """Compare closed forms with derived brackets on all generator tuples; returns mismatches."""
    from itertools import combinations_with_replacement

    V = T.vdata()
    patch = T.patch
    bad = []
    count = 0
    for k in range(1, min(max_arity, T.K + 1) + 1):
        for j in range(0, min(2, k) + 1):
            for dx in combinations_with_replacement(range(T.data.n), k - j):
                for fi in product(range(len(functions)), repeat=j):
                    fs = [functions[i].with_variables(patch.variables) for i in fi]
                    args = generator_args(T, dx, fs)
                    lhs = ohpark_mk(T, args)
                    rhs = derived_mk(V, args)
                    count += 1
                    if lhs != rhs:
                        bad.append((dx, fi, lhs, rhs))
    return count, bad
