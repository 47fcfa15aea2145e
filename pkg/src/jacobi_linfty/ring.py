"""Exact sparse multivariate polynomials over Q, a small expression parser and
antisymmetric coefficient tensors.

A :class:`Polynomial` carries its own ordered tuple of variable names.  Binary
operations between polynomials with different variable tuples first merge the
two contexts (left operand's names first, then the new names of the right one),
so callers never have to pre-align contexts.
"""

from __future__ import annotations

import itertools
import re
from operator import add as _add
from typing import Iterable, Iterator, Mapping, Sequence

from gmpy2 import mpq

Rational = type(mpq(0))

_NAME_RE = re.compile(r"[a-zA-Z][a-zA-Z0-9_]*")


def rational(value) -> Rational:
    """Coerce ints, strings like ``"3/4"``, Fractions and mpq to an exact rational."""
    if isinstance(value, Rational):
        return value
    if isinstance(value, str):
        return mpq(value.strip())
    if isinstance(value, float):
        raise TypeError("floating point coefficients are not accepted")
    return mpq(value)


class Polynomial:
    """Sparse polynomial with rational coefficients.

    ``terms`` maps exponent tuples (aligned with ``variables``) to nonzero
    rationals.  Instances are treated as immutable.
    """

    __slots__ = ("variables", "terms", "_hash")

    def __init__(self, variables: Sequence[str] = (), terms: Mapping | None = None, *, _trusted=False):
        self.variables = tuple(variables)
        if _trusted:
            self.terms = terms
        else:
            n = len(self.variables)
            if len(set(self.variables)) != n:
                raise ValueError(f"duplicate variable names in {self.variables}")
            clean = {}
            for exp, c in (terms or {}).items():
                exp = tuple(int(e) for e in exp)
                if len(exp) != n:
                    raise ValueError(f"exponent {exp} does not match {n} variables")
                self._check_exponent(exp)
                c = rational(c)
                if c:
                    clean[exp] = clean.get(exp, 0) + c
                    if not clean[exp]:
                        del clean[exp]
            self.terms = clean
        self._hash = None

    def _check_exponent(self, exp):
        if any(e < 0 for e in exp):
            raise ValueError("negative exponents require a LaurentPolynomial")

    # -- constructors -------------------------------------------------------

    @classmethod
    def _make(cls, variables, terms):
        return cls(variables, terms, _trusted=True)

    @classmethod
    def zero(cls, variables: Sequence[str] = ()) -> "Polynomial":
        return cls._make(tuple(variables), {})

    @classmethod
    def constant(cls, c, variables: Sequence[str] = ()) -> "Polynomial":
        variables = tuple(variables)
        c = rational(c)
        return cls._make(variables, {(0,) * len(variables): c} if c else {})

    @classmethod
    def var(cls, name: str, variables: Sequence[str] | None = None) -> "Polynomial":
        variables = tuple(variables) if variables is not None else (name,)
        if name not in variables:
            raise KeyError(f"unknown variable {name!r}")
        exp = tuple(1 if v == name else 0 for v in variables)
        return cls._make(variables, {exp: mpq(1)})

    # -- basic queries --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> Rational:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        for c in self.terms.values():
            return c
        return mpq(0)

    def used_variables(self) -> tuple[str, ...]:
        used = [False] * len(self.variables)
        for exp in self.terms:
            for i, e in enumerate(exp):
                if e:
                    used[i] = True
        return tuple(v for v, u in zip(self.variables, used) if u)

    def degree(self, names: Iterable[str] | None = None) -> int:
        """Total degree in ``names`` (all variables by default); -1 for zero."""
        if not self.terms:
            return -1
        if names is None:
            idx = range(len(self.variables))
        else:
            idx = [self.variables.index(v) for v in names if v in self.variables]
        return max(sum(exp[i] for i in idx) for exp in self.terms)

    def min_degree(self, names: Iterable[str]) -> int:
        if not self.terms:
            return -1
        idx = [self.variables.index(v) for v in names if v in self.variables]
        return min(sum(exp[i] for i in idx) for exp in self.terms)

    # -- context handling -----------------------------------------------------

    def with_variables(self, variables: Sequence[str]) -> "Polynomial":
        """Re-express over ``variables``; every used variable must be present."""
        variables = tuple(variables)
        if variables == self.variables:
            return self
        pos = {v: i for i, v in enumerate(variables)}
        n = len(variables)
        idx = []
        for i, v in enumerate(self.variables):
            j = pos.get(v)
            if j is None:
                if any(exp[i] for exp in self.terms):
                    raise ValueError(f"variable {v!r} is used but missing from target context")
            idx.append(j)
        out = {}
        for exp, c in self.terms.items():
            new = [0] * n
            for i, e in enumerate(exp):
                if e:
                    new[idx[i]] = e
            out[tuple(new)] = c
        return self._make(variables, out)

    def _align(self, other: "Polynomial"):
        if self.variables == other.variables:
            return self, other
        extra = tuple(v for v in other.variables if v not in self.variables)
        merged = self.variables + extra
        return self.with_variables(merged), other.with_variables(merged)

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            return other
        return self._wrap(self, self.variables, Polynomial.constant(other, self.variables).terms)

    def _result_cls(self, other):
        if isinstance(other, LaurentPolynomial) and not isinstance(self, LaurentPolynomial):
            return type(other), other
        return type(self), self

    def _wrap(self, proto, variables, terms):
        if isinstance(proto, LaurentPolynomial):
            return LaurentPolynomial._make_l(variables, terms, proto.laurent_var)
        return Polynomial._make(variables, terms)

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            if other == 0:
                return self
            other = self._coerce(other)
        a, b = self._align(other)
        out = dict(a.terms)
        for exp, c in b.terms.items():
            v = out.get(exp)
            if v is None:
                out[exp] = c
            else:
                v = v + c
                if v:
                    out[exp] = v
                else:
                    del out[exp]
        _, proto = self._result_cls(other)
        return self._wrap(proto, a.variables, out)

    __radd__ = __add__

    def __neg__(self):
        return self._wrap(self, self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            other = self._coerce(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Polynomial":
        c = rational(c)
        if not c:
            return self._wrap(self, self.variables, {})
        if c == 1:
            return self
        return self._wrap(self, self.variables, {e: v * c for e, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(other)
        a, b = self._align(other)
        out = {}
        get = out.get
        bt = list(b.terms.items())
        for e1, c1 in a.terms.items():
            for e2, c2 in bt:
                e = tuple(map(_add, e1, e2))
                v = get(e)
                out[e] = c1 * c2 if v is None else v + c1 * c2
        out = {e: c for e, c in out.items() if c}
        _, proto = self._result_cls(other)
        return self._wrap(proto, a.variables, out)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers are supported")
        result = self._wrap(self, self.variables, {(0,) * len(self.variables): mpq(1)})
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            try:
                other = self._coerce(other)
            except TypeError:
                return NotImplemented
        if self.variables == other.variables:
            return self.terms == other.terms
        return (self - other).is_zero()

    def __hash__(self):
        if self._hash is None:
            vs = self.used_variables()
            p = Polynomial._make(self.variables, self.terms).with_variables(vs)
            self._hash = hash((vs, frozenset(p.terms.items())))
        return self._hash

    # -- calculus and substitution -------------------------------------------

    def diff(self, name: str) -> "Polynomial":
        """Formal partial derivative; unknown names raise ``KeyError``."""
        try:
            i = self.variables.index(name)
        except ValueError:
            raise KeyError(f"unknown variable {name!r}") from None
        return self._diff_index(i)

    def _diff_index(self, i: int) -> "Polynomial":
        out = {}
        for exp, c in self.terms.items():
            e = exp[i]
            if e:
                new = list(exp)
                new[i] = e - 1
                out[tuple(new)] = c * e
        return self._wrap(self, self.variables, out)

    def diff_if_present(self, name: str) -> "Polynomial":
        """Derivative, treating names outside the context as absent (result 0)."""
        try:
            i = self.variables.index(name)
        except ValueError:
            return self._wrap(self, self.variables, {})
        return self._diff_index(i)

    def restrict_zero(self, names: Iterable[str]) -> "Polynomial":
        """Set the given variables to zero (the restriction to ``{names = 0}``)."""
        idx = [i for i, v in enumerate(self.variables) if v in set(names)]
        if not idx:
            return self
        out = {e: c for e, c in self.terms.items() if not any(e[i] for i in idx)}
        return self._wrap(self, self.variables, out)

    def truncate(self, names: Iterable[str], max_degree: int) -> "Polynomial":
        """Drop terms whose total degree in ``names`` exceeds ``max_degree``."""
        names = set(names)
        idx = [i for i, v in enumerate(self.variables) if v in names]
        if not idx:
            return self
        out = {e: c for e, c in self.terms.items() if sum(e[i] for i in idx) <= max_degree}
        return self._wrap(self, self.variables, out)

    def coefficient(self, names: Sequence[str], exponents: Sequence[int]) -> "Polynomial":
        """Coefficient of the monomial ``prod names**exponents`` (others kept)."""
        idx = [self.variables.index(v) if v in self.variables else None for v in names]
        out = {}
        for exp, c in self.terms.items():
            ok = True
            for i, want in zip(idx, exponents):
                have = exp[i] if i is not None else 0
                if have != want:
                    ok = False
                    break
            if ok:
                new = list(exp)
                for i in idx:
                    if i is not None:
                        new[i] = 0
                out[tuple(new)] = c
        return self._wrap(self, self.variables, out)

    def rename(self, mapping: Mapping[str, str]) -> "Polynomial":
        """Substitute variables by variables; targets may coincide (merging)."""
        targets = []
        for v in self.variables:
            t = mapping.get(v, v)
            if t not in targets:
                targets.append(t)
        for v in self.variables:
            if v not in mapping and v not in targets:
                targets.append(v)
        pos = {v: i for i, v in enumerate(targets)}
        idx = [pos[mapping.get(v, v)] for v in self.variables]
        n = len(targets)
        out = {}
        for exp, c in self.terms.items():
            new = [0] * n
            for i, e in enumerate(exp):
                if e:
                    new[idx[i]] += e
            key = tuple(new)
            v = out.get(key)
            out[key] = c if v is None else v + c
        out = {e: c for e, c in out.items() if c}
        return self._wrap(self, tuple(targets), out)

    def substitute(self, bindings: Mapping[str, "Polynomial | int | str"]) -> "Polynomial":
        """Simultaneous substitution ``var -> polynomial``, fully expanded."""
        for v in bindings:
            if v not in self.variables:
                raise KeyError(f"unknown variable {v!r}")
        if not bindings:
            return self
        binds = {}
        for v, b in bindings.items():
            if not isinstance(b, Polynomial):
                b = Polynomial.constant(rational(b))
            binds[v] = b
        keep = [v for v in self.variables if v not in binds]
        sub_idx = [(i, binds[v]) for i, v in enumerate(self.variables) if v in binds]
        keep_idx = [i for i, v in enumerate(self.variables) if v not in binds]
        ctx = tuple(keep)
        for b in binds.values():
            ctx = ctx + tuple(v for v in b.variables if v not in ctx)
        proto = self
        for b in binds.values():
            if isinstance(b, LaurentPolynomial):
                proto = b
        one = self._wrap(proto, ctx, {(0,) * len(ctx): mpq(1)})
        powers: dict = {}

        def power(j, b, e):
            key = (j, e)
            if key not in powers:
                powers[key] = one * b.with_variables(ctx) if e == 1 else power(j, b, e - 1) * b.with_variables(ctx)
            return powers[key]

        result = self._wrap(proto, ctx, {})
        acc: dict = {}
        for exp, c in self.terms.items():
            mono_exp = [0] * len(ctx)
            for k, i in enumerate(keep_idx):
                mono_exp[k] = exp[i]
            term = self._wrap(proto, ctx, {tuple(mono_exp): c})
            for j, (i, b) in enumerate(sub_idx):
                if exp[i]:
                    term = term * power(j, b, exp[i])
            for e, v in term.terms.items():
                acc[e] = acc.get(e, 0) + v
        result = self._wrap(proto, ctx, {e: v for e, v in acc.items() if v})
        return result

    def evaluate(self, point: Mapping[str, object]) -> "Polynomial":
        """Substitute rational values for some variables."""
        return self.substitute({v: Polynomial.constant(rational(c)) for v, c in point.items() if v in self.variables})

    def map_coefficients(self, f) -> "Polynomial":
        out = {}
        for e, c in self.terms.items():
            v = rational(f(c))
            if v:
                out[e] = v
        return self._wrap(self, self.variables, out)

    # -- printing -------------------------------------------------------------

    def sorted_terms(self) -> list:
        """Terms in descending graded-lexicographic order."""
        return sorted(self.terms.items(), key=lambda kv: (sum(kv[0]), kv[0]), reverse=True)

    def _monomial_str(self, exp) -> str:
        parts = []
        for v, e in zip(self.variables, exp):
            if e == 1:
                parts.append(v)
            elif e:
                parts.append(f"{v}^{e}" if e > 0 else f"{v}^({e})")
        return "*".join(parts)

    def to_string(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for i, (exp, c) in enumerate(self.sorted_terms()):
            mono = self._monomial_str(exp)
            neg = c < 0
            a = -c if neg else c
            if mono:
                body = mono if a == 1 else f"{a}*{mono}"
            else:
                body = str(a)
            if i == 0:
                out.append(f"-{body}" if neg else body)
            else:
                out.append(f" - {body}" if neg else f" + {body}")
        return "".join(out)

    def __str__(self):
        return self.to_string()

    def __repr__(self):
        return f"{type(self).__name__}({self.to_string()!r}, {self.variables})"


class LaurentPolynomial(Polynomial):
    """Polynomial in which the single variable ``laurent_var`` may have negative powers."""

    __slots__ = ("laurent_var",)

    def __init__(self, variables=(), terms=None, laurent_var: str = "t", *, _trusted=False):
        self.laurent_var = laurent_var
        super().__init__(variables, terms, _trusted=_trusted)
        if laurent_var not in self.variables:
            raise ValueError(f"Laurent variable {laurent_var!r} must be in the context")

    def _check_exponent(self, exp):
        i = self.variables.index(self.laurent_var) if self.laurent_var in self.variables else -1
        for j, e in enumerate(exp):
            if e < 0 and j != i:
                raise ValueError(f"only {self.laurent_var!r} may carry a negative exponent")

    @classmethod
    def _make_l(cls, variables, terms, laurent_var):
        obj = cls.__new__(cls)
        obj.variables = tuple(variables)
        obj.terms = terms
        obj.laurent_var = laurent_var
        obj._hash = None
        if laurent_var not in obj.variables:
            obj = obj.with_variables(obj.variables + (laurent_var,))
        return obj

    @classmethod
    def from_polynomial(cls, p: Polynomial, laurent_var: str = "t") -> "LaurentPolynomial":
        return cls._make_l(p.variables, dict(p.terms), laurent_var)

    def with_variables(self, variables):
        variables = tuple(variables)
        if variables == self.variables:
            return self
        p = Polynomial._make(self.variables, self.terms).with_variables(variables)
        obj = LaurentPolynomial.__new__(LaurentPolynomial)
        obj.variables, obj.terms, obj.laurent_var, obj._hash = p.variables, p.terms, self.laurent_var, None
        return obj

    def rename(self, mapping):
        if self.laurent_var in mapping:
            raise ValueError("cannot rename the Laurent variable")
        p = Polynomial._make(self.variables, self.terms).rename(mapping)
        return LaurentPolynomial._make_l(p.variables, p.terms, self.laurent_var)

    def t_power(self, e: int) -> "LaurentPolynomial":
        """Multiply by ``t**e`` (any integer ``e``)."""
        i = self.variables.index(self.laurent_var)
        out = {}
        for exp, c in self.terms.items():
            new = list(exp)
            new[i] += e
            out[tuple(new)] = c
        return LaurentPolynomial._make_l(self.variables, out, self.laurent_var)


def monomial(variables: Sequence[str], exponents: Mapping[str, int], coeff=1) -> Polynomial:
    exp = tuple(exponents.get(v, 0) for v in variables)
    return Polynomial(variables, {exp: coeff})


def t_monomial(variables: Sequence[str], laurent_var: str, e: int, coeff=1) -> LaurentPolynomial:
    exp = tuple(e if v == laurent_var else 0 for v in variables)
    return LaurentPolynomial(variables, {exp: coeff}, laurent_var)


# -- parser -------------------------------------------------------------------


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([a-zA-Z][a-zA-Z0-9_]*)|(.))")


def _tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            break
        start = m.start(m.lastindex) if m.lastindex else pos
        if m.group(1) is not None:
            tokens.append(("int", m.group(1), start))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2), start))
        elif m.group(3) is not None:
            ch = m.group(3)
            if ch.isspace():
                pos = m.end()
                continue
            if ch not in "+-*/^()":
                raise ParseError(f"unexpected character {ch!r}", start)
            tokens.append(("op", ch, start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text, variables, laurent_var):
        self.tokens = _tokenize(text)
        self.i = 0
        self.variables = tuple(variables)
        self.laurent_var = laurent_var

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind, value=None):
        tok = self.take()
        if tok[0] != kind or (value is not None and tok[1] != value):
            want = value or kind
            raise ParseError(f"expected {want!r}, found {tok[1] or 'end of input'!r}", tok[2])
        return tok

    def const(self, c):
        p = Polynomial.constant(c, self.variables)
        if self.laurent_var is not None:
            p = LaurentPolynomial.from_polynomial(p, self.laurent_var)
        return p

    def parse(self):
        if self.peek()[0] == "end":
            raise ParseError("empty expression", 0)
        p = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected token {tok[1]!r}", tok[2])
        return p

    def expr(self):
        p = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self):
        p = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] == "*":
            self.take()
            p = p * self.unary()
        return p

    def unary(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] in "+-":
            self.take()
            p = self.unary()
            return -p if tok[1] == "-" else p
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            neg = False
            tok = self.peek()
            paren = False
            if tok[0] == "op" and tok[1] == "(":
                self.take()
                paren = True
                tok = self.peek()
            if tok[0] == "op" and tok[1] == "-":
                self.take()
                neg = True
            e = int(self.expect("int")[1])
            if paren:
                self.expect("op", ")")
            if neg:
                if self.laurent_var is None or not self._is_laurent_atom(base):
                    raise ParseError("negative exponent", tok[2])
                return base.t_power(-e - 1)
            return base ** e
        return base

    def _is_laurent_atom(self, p):
        lv = self.laurent_var
        if len(p.terms) != 1:
            return False
        (exp, c), = p.terms.items()
        return c == 1 and all((e == 1) if v == lv else (e == 0) for v, e in zip(p.variables, exp))

    def atom(self):
        tok = self.take()
        kind, val, pos = tok
        if kind == "int":
            num = int(val)
            if self.peek()[0] == "op" and self.peek()[1] == "/":
                self.take()
                den_tok = self.expect("int")
                den = int(den_tok[1])
                if den == 0:
                    raise ParseError("zero denominator", den_tok[2])
                return self.const(mpq(num, den))
            return self.const(num)
        if kind == "name":
            if val not in self.variables:
                raise ParseError(f"unknown variable {val!r}", pos)
            p = Polynomial.var(val, self.variables)
            if self.laurent_var is not None:
                p = LaurentPolynomial.from_polynomial(p, self.laurent_var)
            return p
        if kind == "op" and val == "(":
            p = self.expr()
            self.expect("op", ")")
            return p
        raise ParseError(f"unexpected token {val or 'end of input'!r}", pos)


def parse(text: str, variables: Sequence[str], laurent_var: str | None = None) -> Polynomial:
    """Parse ``text`` over the ordered variable context ``variables``.

    Grammar: integers, rationals ``p/q``, names, ``+ - * ^`` with nonnegative
    integer exponents, and parentheses.  When ``laurent_var`` is given, that one
    variable may also be raised to a negative power (``t^-1`` or ``t^(-1)``).
    """
    for v in variables:
        if not _NAME_RE.fullmatch(v):
            raise ValueError(f"invalid variable name {v!r}")
    return _Parser(text, variables, laurent_var).parse()


def differentiate(p: Polynomial, var: str) -> Polynomial:
    return p.diff(var)


def substitute(p: Polynomial, bindings: Mapping[str, Polynomial]) -> Polynomial:
    return p.substitute(bindings)


# -- permutations ---------------------------------------------------------------


def permutation_sign(perm: Sequence[int]) -> int:
    """Sign of a permutation given as a sequence of distinct comparable items."""
    sign = 1
    p = list(perm)
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                sign = -sign
    return sign


def sort_with_sign(indices: Sequence[int]) -> tuple[int, tuple]:
    """Return ``(sign, sorted)``; sign is 0 if an index repeats."""
    idx = list(indices)
    sign = 1
    for i in range(1, len(idx)):
        j = i
        while j > 0 and idx[j - 1] > idx[j]:
            idx[j - 1], idx[j] = idx[j], idx[j - 1]
            sign = -sign
            j -= 1
    for a, b in zip(idx, idx[1:]):
        if a == b:
            return 0, tuple(idx)
    return sign, tuple(idx)


def unshuffles(n: int, p: int) -> Iterator[tuple[tuple, tuple, int]]:
    """(p, n-p)-unshuffles of ``range(n)`` as ``(first, rest, sign)``."""
    for first in itertools.combinations(range(n), p):
        rest = tuple(i for i in range(n) if i not in first)
        inv = sum(1 for a in first for b in rest if a > b)
        yield first, rest, (-1) ** inv


# -- antisymmetric tensors ------------------------------------------------------


class AntisymTensor:
    """Totally antisymmetric tensor stored on strictly increasing index tuples."""

    __slots__ = ("rank", "dim", "entries")

    def __init__(self, rank: int, dim: int, entries: Mapping[tuple, Polynomial] | None = None, *, _trusted=False):
        if rank < 0 or dim < 0:
            raise ValueError("rank and index range must be nonnegative")
        self.rank = rank
        self.dim = dim
        if _trusted:
            self.entries = entries
            return
        store: dict = {}
        for idx, val in (entries or {}).items():
            idx = tuple(idx)
            self._check(idx)
            sign, key = sort_with_sign(idx)
            if sign == 0:
                if val:
                    raise ValueError(f"nonzero value on repeated index {idx}")
                continue
            if not isinstance(val, Polynomial):
                val = Polynomial.constant(val)
            val = val if sign == 1 else -val
            if key in store:
                store[key] = store[key] + val
            else:
                store[key] = val
        self.entries = {k: v for k, v in store.items() if v}

    def _check(self, idx):
        if len(idx) != self.rank:
            raise ValueError(f"expected {self.rank} indices, got {len(idx)}")
        for i in idx:
            if not 0 <= i < self.dim:
                raise IndexError(f"index {i} out of range {self.dim}")

    def __getitem__(self, indices) -> Polynomial:
        if not isinstance(indices, tuple):
            indices = (indices,)
        self._check(indices)
        sign, key = sort_with_sign(indices)
        if sign == 0:
            return Polynomial.zero()
        val = self.entries.get(key)
        if val is None:
            return Polynomial.zero()
        return val if sign == 1 else -val

    def items(self):
        return sorted(self.entries.items())

    def is_zero(self) -> bool:
        return not self.entries

    def __add__(self, other: "AntisymTensor") -> "AntisymTensor":
        self._same_shape(other)
        out = dict(self.entries)
        for k, v in other.entries.items():
            out[k] = out[k] + v if k in out else v
        return AntisymTensor(self.rank, self.dim, {k: v for k, v in out.items() if v}, _trusted=True)

    def __neg__(self):
        return AntisymTensor(self.rank, self.dim, {k: -v for k, v in self.entries.items()}, _trusted=True)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "AntisymTensor":
        return self.map(lambda p: p * c if isinstance(c, Polynomial) else p.scale(c))

    def map(self, f) -> "AntisymTensor":
        out = {}
        for k, v in self.entries.items():
            w = f(v)
            if w:
                out[k] = w
        return AntisymTensor(self.rank, self.dim, out, _trusted=True)

    def _same_shape(self, other):
        if (self.rank, self.dim) != (other.rank, other.dim):
            raise ValueError("tensor shape mismatch")

    def __eq__(self, other):
        if not isinstance(other, AntisymTensor):
            return NotImplemented
        return (self.rank, self.dim) == (other.rank, other.dim) and (self - other).is_zero()

    def __hash__(self):
        return hash((self.rank, self.dim, frozenset(self.entries.items())))

    def __repr__(self):
        body = ", ".join(f"{k}: {v}" for k, v in self.items())
        return f"AntisymTensor(rank={self.rank}, dim={self.dim}, {{{body}}})"


def tensor_access(T: AntisymTensor, indices: tuple) -> Polynomial:
    return T[tuple(indices)]
