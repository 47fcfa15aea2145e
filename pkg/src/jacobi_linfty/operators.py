"""First-order alternating multi-differential operators on a trivialized line
bundle over a polynomial coordinate patch.

An operator of arity ``k`` is stored in the normal form

    X^{a_1..a_k} nabla_{a_1} ^ ... ^ nabla_{a_k} (x) mu
        + G^{a_1..a_{k-1}} nabla_{a_1} ^ ... ^ nabla_{a_{k-1}} ^ id

with Einstein summation over all index tuples and wedges expanded by
unshuffles.  Consequently

    apply(op, f_1..f_k) = k! sum_{I increasing} X^I det(d_{I_j} f_i)
        + (k-1)! sum_{J increasing} G^J sum_i (-1)^(k-i) f_i det(minor without f_i)

so an arity-2 operator gives ``2 J^{ab} d_a f d_b g + J^a (g d_a f - f d_a g)``.
An arity-0 operator is a section; its single X entry is the coefficient.

The Schouten-Jacobi bracket is computed by evaluating the Gerstenhaber formula
on probe sections and reading the components back with
:func:`extract_components`.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from math import factorial
from typing import Callable, Mapping, Sequence

from gmpy2 import mpq

from .ring import AntisymTensor, Polynomial, sort_with_sign, unshuffles

_W_PREFIX = "_w"


@dataclass(frozen=True)
class Patch:
    """Fibered coordinates ``z = (x^1..x^n, y^1..y^d)``."""

    base_vars: tuple
    fiber_vars: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "base_vars", tuple(self.base_vars))
        object.__setattr__(self, "fiber_vars", tuple(self.fiber_vars))
        names = self.base_vars + self.fiber_vars
        if len(set(names)) != len(names):
            raise ValueError("base and fiber variable names must be distinct")
        for v in names:
            if v.startswith("_"):
                raise ValueError(f"variable names may not start with '_': {v!r}")

    @property
    def variables(self) -> tuple:
        return self.base_vars + self.fiber_vars

    @property
    def n(self) -> int:
        return len(self.base_vars)

    @property
    def d(self) -> int:
        return len(self.fiber_vars)

    @property
    def dim(self) -> int:
        return self.n + self.d

    def index(self, name: str) -> int:
        return self.variables.index(name)

    def is_fiber_index(self, i: int) -> bool:
        return i >= self.n

    def poly(self, text: str) -> Polynomial:
        from .ring import parse

        return parse(text, self.variables)

    def zero(self) -> Polynomial:
        return Polynomial.zero(self.variables)


@dataclass(frozen=True)
class Section:
    """The section ``coeff * mu``."""

    patch: Patch
    coeff: Polynomial

    def __post_init__(self):
        if not isinstance(self.coeff, Polynomial):
            object.__setattr__(self, "coeff", Polynomial.constant(self.coeff, self.patch.variables))


def _as_poly(obj) -> Polynomial:
    if isinstance(obj, Section):
        return obj.coeff
    if isinstance(obj, MultiOperator):
        if obj.arity != 0:
            raise ValueError("only arity-0 operators can be used as sections")
        return obj.X[()]
    if isinstance(obj, Polynomial):
        return obj
    return Polynomial.constant(obj)


class MultiOperator:
    """Operator in component normal form; see the module docstring."""

    __slots__ = ("patch", "arity", "X", "G")

    def __init__(self, patch: Patch, arity: int, X: AntisymTensor | Mapping | None = None,
                 G: AntisymTensor | Mapping | None = None):
        if arity < 0:
            raise ValueError("arity must be nonnegative")
        m = patch.dim
        if not isinstance(X, AntisymTensor):
            X = AntisymTensor(arity, m, _coerce_entries(X, patch))
        if arity == 0:
            if G is not None and (not isinstance(G, AntisymTensor) and G or isinstance(G, AntisymTensor) and not G.is_zero()):
                raise ValueError("an arity-0 operator has no G part")
            G = None
        elif not isinstance(G, AntisymTensor):
            G = AntisymTensor(arity - 1, m, _coerce_entries(G, patch))
        if X.rank != arity or X.dim != m or (G is not None and (G.rank != arity - 1 or G.dim != m)):
            raise ValueError("component tensor shape does not match arity/patch")
        self.patch = patch
        self.arity = arity
        self.X = X
        self.G = G

    # -- constructors -----------------------------------------------------------

    @classmethod
    def zero(cls, patch: Patch, arity: int) -> "MultiOperator":
        return cls(patch, arity)

    @classmethod
    def section(cls, patch: Patch, coeff) -> "MultiOperator":
        return cls(patch, 0, {(): _as_poly(coeff) if not isinstance(coeff, str) else patch.poly(coeff)})

    @classmethod
    def identity(cls, patch: Patch) -> "MultiOperator":
        return cls(patch, 1, {}, {(): 1})

    # -- algebra ----------------------------------------------------------------

    def _check_compatible(self, other):
        if self.patch != other.patch or self.arity != other.arity:
            raise ValueError("operators live on different patches or have different arity")

    def __add__(self, other: "MultiOperator") -> "MultiOperator":
        self._check_compatible(other)
        G = None if self.G is None else self.G + other.G
        return MultiOperator(self.patch, self.arity, self.X + other.X, G)

    def __neg__(self):
        return MultiOperator(self.patch, self.arity, -self.X, None if self.G is None else -self.G)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "MultiOperator":
        return MultiOperator(self.patch, self.arity, self.X.scale(c), None if self.G is None else self.G.scale(c))

    def map_coefficients(self, f: Callable[[Polynomial], Polynomial]) -> "MultiOperator":
        return MultiOperator(self.patch, self.arity, self.X.map(f), None if self.G is None else self.G.map(f))

    def is_zero(self) -> bool:
        return self.X.is_zero() and (self.G is None or self.G.is_zero())

    def __eq__(self, other):
        if not isinstance(other, MultiOperator):
            return NotImplemented
        return self.patch == other.patch and self.arity == other.arity and (self - other).is_zero()

    def __hash__(self):
        return hash((self.patch, self.arity, self.X, self.G))

    def components(self):
        """Nonzero components as ``(block, indices, polynomial)`` in canonical order."""
        out = [("X", k, v) for k, v in self.X.items()]
        if self.G is not None:
            out += [("G", k, v) for k, v in self.G.items()]
        return out

    def component_label(self, block: str, idx: tuple) -> str:
        names = ",".join(self.patch.variables[i] for i in idx)
        return f"{block}[{names}]"

    def __repr__(self):
        body = "; ".join(f"{self.component_label(b, k)} = {v}" for b, k, v in self.components())
        return f"MultiOperator(arity={self.arity}, {body or '0'})"

    def __call__(self, *args):
        return apply(self, list(args))


def _coerce_entries(entries, patch: Patch):
    if not entries:
        return {}
    out = {}
    for k, v in entries.items():
        if not isinstance(k, tuple):
            k = (k,)
        k = tuple(patch.index(i) if isinstance(i, str) else i for i in k)
        if isinstance(v, str):
            v = patch.poly(v)
        elif not isinstance(v, Polynomial):
            v = Polynomial.constant(v, patch.variables)
        out[k] = v
    return out


class JacobiStructure(MultiOperator):
    """Arity-2 operator ``J = J^{ab} nabla_a ^ nabla_b (x) mu + J^a nabla_a ^ id``.

    ``bivector`` entries are the operator components ``J^{ab}`` (so that the
    bracket reads ``2 J^{ab} d_a f d_b g + ...``), ``vector`` entries are ``J^a``.
    """

    __slots__ = ()

    def __init__(self, patch: Patch, bivector: Mapping | AntisymTensor | None = None,
                 vector: Mapping | AntisymTensor | None = None):
        super().__init__(patch, 2, bivector, vector)

    @classmethod
    def from_operator(cls, op: MultiOperator) -> "JacobiStructure":
        if op.arity != 2:
            raise ValueError("a Jacobi structure has arity 2")
        return cls(op.patch, op.X, op.G)

    def _block(self, kind):
        p = self.patch
        fib = range(p.n, p.dim)
        base = range(p.n)
        rows = {"ab": (fib, fib), "ai": (fib, base), "ij": (base, base)}[kind]
        return {(p.variables[i], p.variables[j]): self.X[i, j] for i in rows[0] for j in rows[1] if i != j}

    def block_ab(self):
        return self._block("ab")

    def block_ai(self):
        return self._block("ai")

    def block_ij(self):
        return self._block("ij")

    def block_a(self):
        p = self.patch
        return {p.variables[i]: self.G[i] for i in range(p.n, p.dim)}

    def block_i(self):
        p = self.patch
        return {p.variables[i]: self.G[i] for i in range(p.n)}

    def bracket(self, f, g) -> Polynomial:
        return _apply_polys(self, [_as_poly(f), _as_poly(g)])


# -- application ---------------------------------------------------------------


class _Gradients:
    """Memoized gradients with respect to the patch variables."""

    def __init__(self, variables):
        self.variables = variables
        self.cache: dict = {}

    def __call__(self, p: Polynomial):
        key = id(p)
        hit = self.cache.get(key)
        if hit is not None and hit[0] is p:
            return hit[1]
        grad = [p.diff_if_present(v) for v in self.variables]
        self.cache[key] = (p, grad)
        return grad


def _det(grads, rows: tuple, cols: tuple, memo: dict):
    """Determinant of ``grads[rows[r]][cols[c]]``, expanded along the first row."""
    if not rows:
        return 1
    key = (rows, cols)
    if key in memo:
        return memo[key]
    r0 = grads[rows[0]]
    total = None
    for j, c in enumerate(cols):
        entry = r0[c]
        if not entry:
            continue
        minor = _det(grads, rows[1:], cols[:j] + cols[j + 1:], memo)
        if isinstance(minor, int):
            term = entry
        elif not minor:
            continue
        else:
            term = entry * minor
        if j % 2:
            term = -term
        total = term if total is None else total + term
    if total is None:
        total = Polynomial.zero()
    memo[key] = total
    return total


def _apply_polys(op: MultiOperator, polys: Sequence[Polynomial], grad: _Gradients | None = None) -> Polynomial:
    k = op.arity
    if len(polys) != k:
        raise ValueError(f"operator of arity {k} applied to {len(polys)} arguments")
    if k == 0:
        return op.X[()]
    if grad is None:
        grad = _Gradients(op.patch.variables)
    grads = [grad(p) for p in polys]
    memo: dict = {}
    acc = Polynomial.zero(op.patch.variables)
    if op.X.entries:
        rows = tuple(range(k))
        kf = factorial(k)
        for I, coeff in op.X.entries.items():
            d = _det(grads, rows, I, memo)
            if isinstance(d, int) or d:
                acc = acc + (coeff * d).scale(kf) if not isinstance(d, int) else acc + coeff.scale(kf)
    if op.G.entries:
        kf = factorial(k - 1)
        for J, coeff in op.G.entries.items():
            inner = None
            for i in range(k):
                f = polys[i]
                if not f:
                    continue
                d = _det(grads, tuple(r for r in range(k) if r != i), J, memo)
                if not isinstance(d, int) and not d:
                    continue
                term = f if isinstance(d, int) else f * d
                if (k - 1 - i) % 2:
                    term = -term
                inner = term if inner is None else inner + term
            if inner is not None and inner:
                acc = acc + (coeff * inner).scale(kf)
    return acc


def apply(op: MultiOperator, args: Sequence) -> Section:
    """Evaluate ``op`` on sections (or polynomials); returns a :class:`Section`."""
    for a in args:
        if isinstance(a, (Section, MultiOperator)) and a.patch != op.patch:
            raise ValueError("patch mismatch")
    return Section(op.patch, _apply_polys(op, [_as_poly(a) for a in args]))


# -- extraction ------------------------------------------------------------------


class ExtractionError(ValueError):
    pass


def _w_names(patch: Patch):
    return tuple(f"{_W_PREFIX}{i}" for i in range(patch.dim))


def _probe_sections(patch: Patch, k: int, seed: int = 1234):
    rng = random.Random(seed)
    vs = patch.variables
    out = []
    for _ in range(k):
        terms = {}
        m = len(vs)
        for _ in range(4):
            exp = [0] * m
            for _ in range(rng.randint(0, 2)):
                exp[rng.randrange(m)] += 1
            terms[tuple(exp)] = rng.randint(-3, 3)
        out.append(Polynomial(vs, terms) + rng.randint(1, 3))
    return out


def _extract_polys(evaluator: Callable[[list], Polynomial], patch: Patch, k: int) -> MultiOperator:
    """Components of the first-order alternating operator whose action is ``evaluator``."""
    m = patch.dim
    zs = patch.variables
    ws = _w_names(patch)
    ctx = zs + ws
    back = dict(zip(ws, zs))
    one = Polynomial.constant(1, ctx)
    shifted = [Polynomial(ctx, {tuple(1 if j == b else 0 for j in range(m)) + (0,) * m: 1,
                                (0,) * m + tuple(1 if j == b else 0 for j in range(m)): -1})
               for b in range(m)]
    from itertools import combinations

    X = {}
    if k == 0:
        val = evaluator([])
        if val:
            X[()] = val
        return MultiOperator(patch, 0, AntisymTensor(0, m, X, _trusted=True))
    kf = mpq(1, factorial(k))
    for I in combinations(range(m), k):
        val = evaluator([shifted[b] for b in I])
        if val:
            val = val.rename(back).scale(kf)
            if val:
                X[I] = _drop_w(val, zs)
    G = {}
    gf = mpq((-1) ** (k - 1), factorial(k - 1))
    for J in combinations(range(m), k - 1):
        val = evaluator([one] + [shifted[b] for b in J])
        if val:
            val = val.rename(back).scale(gf)
            if val:
                G[J] = _drop_w(val, zs)
    return MultiOperator(patch, k, AntisymTensor(k, m, X, _trusted=True), AntisymTensor(k - 1, m, G, _trusted=True))


def _drop_w(p: Polynomial, zs) -> Polynomial:
    keep = tuple(v for v in p.variables if not v.startswith(_W_PREFIX))
    ctx = zs + tuple(v for v in keep if v not in zs)
    return p.with_variables(ctx)


def extract_components(evaluator: Callable, patch: Patch, arity: int, check: bool = True) -> MultiOperator:
    """Reconstruct a :class:`MultiOperator` from its action.

    ``evaluator`` receives a list of ``arity`` :class:`Section` objects and
    returns a Section or Polynomial.  With ``check`` the result is compared with
    the evaluator on a seeded probe of quadratic sections, which detects
    evaluators that are not first-order alternating.
    """

    def ev(polys):
        return _as_poly(evaluator([Section(patch, p) for p in polys]))

    op = _extract_polys(ev, patch, arity)
    if check:
        probe = _probe_sections(patch, arity)
        if _apply_polys(op, probe) != ev(probe):
            raise ExtractionError("evaluator not first-order alternating")
    return op


# -- Schouten-Jacobi bracket -----------------------------------------------------------


class _CachedEvaluator:
    """Evaluates the Gerstenhaber bracket of two operators on argument tuples.

    Inner applications are memoized on object identity of the argument
    polynomials, which are kept alive in the cache for the evaluator's lifetime.
    """

    def __init__(self, a: MultiOperator, b: MultiOperator):
        self.a, self.b = a, b
        self.grad = _Gradients(a.patch.variables)
        self.inner: dict = {}
        self.outer: dict = {}
        self.ka = a.arity - 1
        self.kb = b.arity - 1

    def _apply(self, op, polys, cache, tag):
        key = (tag,) + tuple(id(p) for p in polys)
        hit = cache.get(key)
        if hit is not None:
            return hit[0]
        val = _apply_polys(op, polys, self.grad)
        cache[key] = (val, polys)
        return val

    def compose(self, first: MultiOperator, second: MultiOperator, args, tag) -> Polynomial:
        if first.arity == 0:
            return None
        total = None
        for idx1, idx2, sign in unshuffles(len(args), second.arity):
            inner_args = [args[i] for i in idx1]
            inner = self._apply(second, inner_args, self.inner, tag)
            if not inner:
                continue
            outer_args = [inner] + [args[i] for i in idx2]
            val = self._apply(first, outer_args, self.outer, tag)
            if not val:
                continue
            if sign < 0:
                val = -val
            total = val if total is None else total + val
        return total

    def __call__(self, args) -> Polynomial:
        ab = self.compose(self.a, self.b, args, "ab")
        ba = self.compose(self.b, self.a, args, "ba")
        result = Polynomial.zero(self.a.patch.variables)
        if ab is not None:
            result = result + (ab if (self.ka * self.kb) % 2 == 0 else -ab)
        if ba is not None:
            result = result - ba
        return result


def sj_bracket(a: MultiOperator, b: MultiOperator, check: bool = False) -> MultiOperator:
    """Schouten-Jacobi bracket ``(-1)^{kk'} a o b - b o a`` (degrees k = arity-1).

    Two sections bracket to zero; the result is returned as a zero section.
    """
    if a.patch != b.patch:
        raise ValueError("patch mismatch")
    K = a.arity + b.arity - 1
    if K < 0:
        return MultiOperator.zero(a.patch, 0)
    if a.is_zero() or b.is_zero():
        return MultiOperator.zero(a.patch, K)
    ev = _CachedEvaluator(a, b)
    op = _extract_polys(ev, a.patch, K)
    if check:
        probe = _probe_sections(a.patch, K)
        if _apply_polys(op, probe) != ev(probe):
            raise ExtractionError("evaluator not first-order alternating")
    return op


def gerstenhaber_evaluate(a: MultiOperator, b: MultiOperator, args: Sequence) -> Polynomial:
    """Action of ``[a, b]`` on sections computed directly from the composition formula."""
    return _CachedEvaluator(a, b)([_as_poly(x) for x in args])


# -- Jacobi checks, symbols and Hamiltonian derivations ---------------------------------


@dataclass
class CheckResult:
    ok: bool
    witness: str | None = None
    classical_ok: bool | None = None
    details: dict | None = None

    def __bool__(self):
        return self.ok


def first_witness(op: MultiOperator) -> str | None:
    comps = op.components()
    if not comps:
        return None
    block, idx, val = comps[0]
    return f"{op.component_label(block, idx)} = {val}"


def jacobi_check(J: MultiOperator, classical: bool = True) -> CheckResult:
    """``[J, J] = 0``; optionally also the bivector/vector field form of the identity."""
    JJ = sj_bracket(J, J)
    res = CheckResult(JJ.is_zero(), first_witness(JJ))
    if classical:
        from .poissonization import classical_jacobi_check

        res.classical_ok = classical_jacobi_check(J).ok
    return res


def bi_symbol(J: MultiOperator) -> AntisymTensor:
    """The bi-symbol: the ``nabla ^ nabla (x) mu`` block of ``J``."""
    if J.arity != 2:
        raise ValueError("the bi-symbol is defined for arity-2 operators")
    return J.X


def lambda_sharp(J: MultiOperator, f, lam) -> list:
    """Components of the vector field ``X_{f lam} - f X_lam`` (``lam = g mu``)."""
    if J.arity != 2:
        raise ValueError("lambda_sharp needs an arity-2 operator")
    f = _as_poly(f)
    g = _as_poly(lam)
    p = J.patch
    out = []
    for b in range(p.dim):
        acc = Polynomial.zero(p.variables)
        for a in range(p.dim):
            c = J.X[a, b]
            if c:
                df = f.diff_if_present(p.variables[a])
                if df:
                    acc = acc + c * df
        out.append((acc * g).scale(2))
    return out


def hamiltonian(J: MultiOperator, lam) -> tuple[MultiOperator, list]:
    """``Delta_lam = -[J, lam]`` and its symbol ``X_lam`` (vector components)."""
    lam_op = lam if isinstance(lam, MultiOperator) else MultiOperator.section(J.patch, _as_poly(lam))
    delta = -sj_bracket(J, lam_op)
    symbol = [delta.X[i] for i in range(J.patch.dim)]
    return delta, symbol


def is_jacobi_derivation(J: MultiOperator, delta: MultiOperator) -> bool:
    if delta.arity != 1:
        raise ValueError("a derivation has arity 1")
    return sj_bracket(J, delta).is_zero()


# -- fiber-affine automorphisms --------------------------------------------------------


def _check_translation(patch: Patch, s: Sequence[Polynomial]):
    if len(s) != patch.d:
        raise ValueError("translation needs one entry per fiber variable")
    out = []
    for e in s:
        e = e if isinstance(e, Polynomial) else (patch.poly(e) if isinstance(e, str) else Polynomial.constant(e))
        if set(e.used_variables()) & set(patch.fiber_vars):
            raise ValueError("translation entries must not depend on fiber variables")
        out.append(e)
    return out


def _inverse_substitution(patch: Patch, s, c: int):
    return {y: Polynomial.var(y, patch.variables) - s_a.scale(c) for y, s_a in zip(patch.fiber_vars, s)}


def pushforward_fiber_affine(op: MultiOperator, s: Sequence, direction: int) -> MultiOperator:
    """Push ``op`` forward along ``(x, y) -> (x, y + direction * s(x))``.

    ``direction = +1`` is the time-one flow of ``I(s)``, ``-1`` that of ``I(-s)``.
    Coefficients are composed with the inverse map (``y -> y - direction*s``) and
    each vector slot is transformed by the Jacobian.
    """
    if direction not in (1, -1):
        raise ValueError("direction must be +1 or -1")
    patch = op.patch
    s = _check_translation(patch, s)
    n = patch.n
    sub = _inverse_substitution(patch, s, direction)
    cols = []
    for i in range(patch.dim):
        col = [(i, None)]
        if i < n:
            for a, s_a in enumerate(s):
                ds = s_a.diff_if_present(patch.variables[i])
                if ds:
                    col.append((n + a, ds.scale(direction)))
        cols.append(col)

    def transform(T: AntisymTensor) -> AntisymTensor:
        out: dict = {}
        for idx, val in T.entries.items():
            val = val.substitute({k: v for k, v in sub.items() if k in val.variables})
            partial = [((), val)]
            for i in idx:
                nxt = []
                for inds, coeff in partial:
                    for j, factor in cols[i]:
                        if j in inds:
                            continue
                        nxt.append((inds + (j,), coeff if factor is None else coeff * factor))
                partial = nxt
            for inds, coeff in partial:
                sign, key = sort_with_sign(inds)
                term = coeff if sign > 0 else -coeff
                out[key] = out[key] + term if key in out else term
        return AntisymTensor(T.rank, T.dim, {k: v for k, v in out.items() if v}, _trusted=True)

    return MultiOperator(patch, op.arity, transform(op.X), None if op.G is None else transform(op.G))


def pushforward_via_action(op: MultiOperator, s: Sequence, direction: int) -> MultiOperator:
    """Same map as :func:`pushforward_fiber_affine`, computed from ``op(f o phi) o phi^{-1}``."""
    patch = op.patch
    s = _check_translation(patch, s)
    fwd = {y: Polynomial.var(y, patch.variables) + s_a.scale(direction) for y, s_a in zip(patch.fiber_vars, s)}
    inv = _inverse_substitution(patch, s, direction)

    def ev(sections):
        pulled = [_sub(_as_poly(x), fwd) for x in sections]
        return _sub(_apply_polys(op, pulled), inv)

    return extract_components(ev, patch, op.arity)


def _sub(p: Polynomial, bindings):
    return p.substitute({k: v for k, v in bindings.items() if k in p.variables})


# -- seeded random data ----------------------------------------------------------------------


def random_polynomial(variables: Sequence[str], rng: random.Random, max_deg: int = 2, terms: int = 3,
                      coeff: int = 3) -> Polynomial:
    """A sparse polynomial with small integer coefficients; may be zero."""
    m = len(variables)
    out = {}
    for _ in range(terms):
        exp = [0] * m
        for _ in range(rng.randint(0, max_deg)):
            if m:
                exp[rng.randrange(m)] += 1
        c = rng.randint(-coeff, coeff)
        out[tuple(exp)] = out.get(tuple(exp), 0) + c
    return Polynomial(tuple(variables), out)


def random_operator(patch: Patch, arity: int, rng: random.Random, max_deg: int = 2, density: float = 0.5,
                    with_G: bool = True) -> MultiOperator:
    """Random normal-form operator; each increasing component is nonzero with probability ``density``."""
    from itertools import combinations

    vs = patch.variables
    X = {}
    for idx in combinations(range(patch.dim), arity):
        if rng.random() < density:
            X[idx] = random_polynomial(vs, rng, max_deg)
    G = {}
    if arity > 0 and with_G:
        for idx in combinations(range(patch.dim), arity - 1):
            if rng.random() < density:
                G[idx] = random_polynomial(vs, rng, max_deg)
    return MultiOperator(patch, arity, X, G)


def random_structure(patch: Patch, rng: random.Random, max_deg: int = 2, density: float = 0.5) -> JacobiStructure:
    """A random arity-2 operator; the Jacobi identity is not imposed."""
    return JacobiStructure.from_operator(random_operator(patch, 2, rng, max_deg, density))
