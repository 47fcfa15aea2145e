"""Command line driver: load a structure file, run checks, print a report.

Structure files are JSON documents::

    {
      "format": "jacobi-linfty/1",
      "base": ["x"], "fiber": ["y"],
      "J": {"bivector": {"x,y": "1/2"}, "vector": {"y": "-1"}},
      "functions": ["1", "x"],
      "section": {"y": "x^2"},
      "series": [{"y": "x"}, {"y": "0"}],
      "family": {"series": [{"y": "t*x"}], "lambda": ["x"], "time": "t"},
      "presymplectic": {"n": 1, "d": 2, "W": [["0", "1"], ["-1", "0"]],
                        "G": [["u2", "x1"]], "K": 4, "reference_point": {"x1": "1/2"}}
    }

Instead of ``J`` a file may name a catalog entry: ``"catalog": {"name":
"flowout_patch", "n": 2}``.  ``bivector`` values are the operator components
``J^{ab}`` (the bracket is ``2 J^{ab} d_a f d_b g + ...``).

Exit codes: 0 when every check passes, 1 when some check fails, 2 on malformed
input.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from dataclasses import dataclass, field
from itertools import product

from . import catalog
from .deformation import FormalSeries, GaugeFamily, mc_series, mc_via_pushforward, verify_formal_mc, verify_gauge
from .operators import JacobiStructure, Patch, random_operator, sj_bracket
from .poissonization import check_poissonization, classical_jacobi_check, sn_bracket, tilde_op
from .presymplectic import (
    PreSympData,
    cross_check,
    generator_args,
    mat_equal,
    neumann_jets,
    ohpark_function_pair,
    ohpark_mk,
    poisson_defect_vanishes,
    thickening_poisson,
    wtilde_inverse_jets,
)
from .ring import ParseError, Polynomial, parse
from .vdata import NormalMultiSection, VData, derived_mk, generator_tuples, oracle_mk, project_P

FORMAT = "jacobi-linfty/1"

CONVENTIONS = (
    "J(f,g) = 2 J^{ab} d_a f d_b g + J^a (g d_a f - f d_a g)",
    "[a,b] = (-1)^{|a||b|} a o b - b o a, |a| = arity - 1",
    "Lambda = 2 J^{ab}, Gamma = -J^a, [Lambda,Lambda] = -2 Gamma ^ Lambda",
    "m_k(xi_1..xi_k) = P[..[J, I xi_1], .., I xi_k]",
    "MC(-s) = sum_{k>=0} m_k(-s..-s)/k! = P(pushforward of J along y -> y - s)",
    "gauge flow: d/dt(-s_t) = sum_k m_{k+1}(-s_t..-s_t, lambda_t|_S)/k!",
    "Poissonization: Pi = 2J/t - J^a d_a ^ d_t on (t, z)",
    "thickening: J = Pi/2, W^{-1} exact if det W is constant, else frozen at the reference point",
)


class InputError(ValueError):
    pass


# -- reports ----------------------------------------------------------------------------------


@dataclass
class Check:
    name: str
    status: str
    detail: str = ""
    witness: list = field(default_factory=list)  # [(label, polynomial string)]


@dataclass
class Report:
    command: str
    source: str
    seed: int
    checks: list = field(default_factory=list)
    info: list = field(default_factory=list)
    timings: dict = field(default_factory=dict)

    def add(self, name, ok, detail="", witness=()):
        self.checks.append(Check(name, "pass" if ok else "fail", detail, [] if ok else list(witness)))
        return ok

    def error(self, name, message):
        self.checks.append(Check(name, "error", message))

    @property
    def status(self) -> str:
        if any(c.status == "error" for c in self.checks):
            return "error"
        return "pass" if all(c.status == "pass" for c in self.checks) else "fail"

    def exit_code(self) -> int:
        return {"pass": 0, "fail": 1, "error": 2}[self.status]

    def text(self, timings: bool = False) -> str:
        lines = ["jacobi-linfty report", f"command: {self.command}", f"input: {self.source}", f"seed: {self.seed}",
                 "conventions:"]
        lines += [f"  - {c}" for c in CONVENTIONS]
        if self.info:
            lines.append("info:")
            lines += [f"  {k}: {v}" for k, v in self.info]
        lines.append("checks:")
        for c in self.checks:
            line = f"  [{c.status.upper()}] {c.name}"
            if c.detail:
                line += f" ({c.detail})"
            lines.append(line)
            for label, value in c.witness:
                lines.append(f"    witness {label} = {value}")
        if timings:
            lines.append("timings:")
            lines += [f"  {k}: {v:.3f}s" for k, v in sorted(self.timings.items())]
        lines.append(f"result: {self.status.upper()}")
        return "\n".join(lines) + "\n"

    def as_dict(self, timings: bool = False) -> dict:
        out = {
            "command": self.command,
            "input": self.source,
            "seed": self.seed,
            "conventions": list(CONVENTIONS),
            "info": [[k, v] for k, v in self.info],
            "checks": [{"name": c.name, "status": c.status, "detail": c.detail,
                        "witness": [[l, v] for l, v in c.witness]} for c in self.checks],
            "result": self.status,
        }
        if timings:
            out["timings"] = {k: round(v, 3) for k, v in sorted(self.timings.items())}
        return out


def _op_witness(op, limit: int = 3) -> list:
    return [(op.component_label(b, k), str(v)) for b, k, v in op.components()[:limit]]


def _nms_witness(x: NormalMultiSection, limit: int = 3) -> list:
    return [(x.label(k), str(v)) for k, v in x.items()[:limit]]


# -- loading ----------------------------------------------------------------------------------


def _names(doc, key) -> tuple:
    val = doc.get(key, [])
    if not isinstance(val, list) or not all(isinstance(v, str) for v in val):
        raise InputError(f"'{key}' must be a list of variable names")
    return tuple(val)


def _poly(text, variables, what) -> Polynomial:
    if isinstance(text, (int,)) and not isinstance(text, bool):
        text = str(text)
    if not isinstance(text, str):
        raise InputError(f"{what}: expected a polynomial string")
    try:
        return parse(text, variables)
    except ParseError as e:
        raise InputError(f"{what}: {e}") from None


def _key(key: str, patch: Patch, rank: int) -> tuple:
    parts = [p.strip() for p in key.split(",")] if key else []
    if len(parts) != rank:
        raise InputError(f"component key {key!r} must name {rank} variable(s)")
    for p in parts:
        if p not in patch.variables:
            raise InputError(f"component key {key!r}: unknown variable {p!r}")
    return tuple(patch.index(p) for p in parts)


def structure_from_doc(doc: dict) -> tuple[Patch, JacobiStructure]:
    if "catalog" in doc:
        entry = doc["catalog"]
        if not isinstance(entry, dict) or "name" not in entry:
            raise InputError("'catalog' must be an object with a 'name'")
        name, n = entry["name"], entry.get("n", 1)
        if name not in catalog.CATALOG:
            raise InputError(f"unknown catalog entry {name!r}")
        if not isinstance(n, int) or n < 1:
            raise InputError("catalog 'n' must be a positive integer")
        got = catalog.CATALOG[name](n)
        J = got.J
        return J.patch, J
    try:
        patch = Patch(_names(doc, "base"), _names(doc, "fiber"))
    except ValueError as e:
        raise InputError(str(e)) from None
    if not patch.variables:
        raise InputError("no variables declared")
    Jdoc = doc.get("J", {})
    if not isinstance(Jdoc, dict):
        raise InputError("'J' must be an object")
    biv = {}
    for key, val in Jdoc.get("bivector", {}).items():
        i, j = _key(key, patch, 2)
        v = _poly(val, patch.variables, f"bivector[{key}]")
        if i == j:
            if v:
                raise InputError(f"bivector[{key}]: diagonal entries must vanish")
            continue
        k, v = ((i, j), v) if i < j else ((j, i), -v)
        if k in biv and biv[k] != v:
            raise InputError(f"bivector[{key}]: conflicts with the antisymmetric partner entry")
        biv[k] = v
    vec = {}
    for key, val in Jdoc.get("vector", {}).items():
        (i,) = _key(key, patch, 1)
        vec[(i,)] = _poly(val, patch.variables, f"vector[{key}]")
    return patch, JacobiStructure(patch, biv, vec)


def _section(patch: Patch, obj, what: str) -> NormalMultiSection:
    if not isinstance(obj, dict):
        raise InputError(f"{what} must be an object keyed by fiber variables")
    comps = {}
    for key, val in obj.items():
        if key not in patch.fiber_vars:
            raise InputError(f"{what}: {key!r} is not a fiber variable")
        comps[(patch.fiber_vars.index(key),)] = _poly(val, patch.base_vars, f"{what}[{key}]").with_variables(patch.variables)
    return NormalMultiSection(patch, 1, comps)


def _series(patch: Patch, objs, what: str, extra=()) -> FormalSeries:
    if not isinstance(objs, list) or not objs:
        raise InputError(f"{what} must be a nonempty list")
    coeffs = []
    ctx = patch.base_vars + tuple(extra)
    for i, obj in enumerate(objs):
        if not isinstance(obj, dict):
            raise InputError(f"{what}[{i}] must be an object keyed by fiber variables")
        comps = {}
        for key, val in obj.items():
            if key not in patch.fiber_vars:
                raise InputError(f"{what}[{i}]: {key!r} is not a fiber variable")
            comps[(patch.fiber_vars.index(key),)] = _poly(val, ctx, f"{what}[{i}][{key}]")
        coeffs.append(NormalMultiSection(patch, 1, comps))
    return FormalSeries(patch, coeffs)


def load(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise InputError(f"invalid JSON: {e}") from None
    if not isinstance(doc, dict):
        raise InputError("top level must be an object")
    if doc.get("format") != FORMAT:
        raise InputError(f"unsupported or missing format (expected {FORMAT!r})")
    return doc


# -- commands ---------------------------------------------------------------------------------


def cmd_check_jacobi(doc, rep: Report, args):
    patch, J = structure_from_doc(doc)
    JJ = sj_bracket(J, J)
    rep.add("[J,J] = 0", JJ.is_zero(), witness=_op_witness(JJ))
    cl = classical_jacobi_check(J)
    rep.add("[Gamma,Lambda] = 0 and [Lambda,Lambda] = -2 Gamma^Lambda", cl.ok,
            witness=[tuple(cl.witness.rsplit(" = ", 1))] if cl.witness else [])
    rep.add("both readings agree", cl.ok == JJ.is_zero())


def _functions(doc, patch: Patch) -> list:
    texts = doc.get("functions")
    if texts is None:
        out = [Polynomial.constant(1, patch.variables)]
        out += [Polynomial.var(v, patch.variables) for v in patch.base_vars[:2]]
        if len(patch.base_vars) >= 2:
            out.append(Polynomial.var(patch.base_vars[0], patch.variables) * Polynomial.var(patch.base_vars[1], patch.variables))
        return out
    if not isinstance(texts, list):
        raise InputError("'functions' must be a list")
    return [_poly(t, patch.base_vars, "functions").with_variables(patch.variables) for t in texts]


def cmd_brackets(doc, rep: Report, args):
    patch, J = structure_from_doc(doc)
    if not patch.fiber_vars:
        raise InputError("brackets need at least one fiber variable")
    V = VData(J)
    fns = _functions(doc, patch)
    nonzero = {}
    mismatch = None
    count = 0
    for tup, _, _ in generator_tuples(patch, fns, args.max_arity):
        a = derived_mk(V, tup)
        b = oracle_mk(V, tup)
        count += 1
        if a != b and mismatch is None:
            mismatch = (tup, a, b)
        if not a.is_zero():
            nonzero.setdefault(len(tup), (tup, a))
    rep.info.append(("generator tuples", str(count)))
    for k in range(1, args.max_arity + 1):
        rep.info.append((f"m_{k}", "nonzero" if k in nonzero else "zero on generators"))
    wit = []
    if mismatch:
        tup, a, b = mismatch
        wit = [("args", "; ".join(repr(x) for x in tup))] + _nms_witness(a - b)
    rep.add("derived brackets agree with the closed-form oracle", mismatch is None, witness=wit)
    if args.expect_zero_from is not None:
        bad = sorted(k for k in nonzero if k >= args.expect_zero_from)
        wit = _nms_witness(nonzero[bad[0]][1]) if bad else []
        rep.add(f"m_k = 0 for k >= {args.expect_zero_from}", not bad, witness=wit)


def cmd_mc(doc, rep: Report, args):
    patch, J = structure_from_doc(doc)
    V = VData(J)
    if args.section is not None:
        try:
            obj = json.loads(args.section)
        except json.JSONDecodeError as e:
            raise InputError(f"--section: {e}") from None
    elif "section" in doc:
        obj = doc["section"]
    else:
        raise InputError("no section given")
    s = _section(patch, obj, "section")
    mc = mc_series(V, s)
    pf = mc_via_pushforward(V, s)
    rep.info.append(("MC(-s)", "0" if mc.is_zero() else "; ".join(f"{l} = {v}" for l, v in _nms_witness(mc, 10))))
    rep.add("series equals the pushforward of J", mc == pf, witness=_nms_witness(mc - pf))
    rep.info.append(("coisotropic", "yes" if mc.is_zero() else "no"))
    if args.order is not None:
        res = verify_formal_mc(V, FormalSeries(patch, [s]), args.order)
        rep.info.append((f"formal MC for eps*s up to order {args.order}", "holds" if res.ok else f"fails at order {res.first_failing_order}"))
    if args.expect is not None:
        want = args.expect == "coisotropic"
        rep.add(f"section is {args.expect}", mc.is_zero() == want, witness=_nms_witness(mc))


def cmd_formal(doc, rep: Report, args):
    patch, J = structure_from_doc(doc)
    V = VData(J)
    if "series" not in doc:
        raise InputError("no 'series' given")
    series = _series(patch, doc["series"], "series")
    N = args.order if args.order is not None else series.order
    res = verify_formal_mc(V, series, N)
    detail = f"order {N}" if res.ok else f"first failing order {res.first_failing_order}"
    rep.add("formal Maurer-Cartan equation", res.ok, detail, _nms_witness(res.witness) if res.witness else [])


def cmd_gauge(doc, rep: Report, args):
    patch, J = structure_from_doc(doc)
    V = VData(J)
    fam = doc.get("family")
    if not isinstance(fam, dict):
        raise InputError("no 'family' given")
    tv = fam.get("time", "t")
    if not isinstance(tv, str) or tv in patch.variables:
        raise InputError("family 'time' must be a fresh variable name")
    series = _series(patch, fam.get("series"), "family.series", (tv,))
    lam = [_poly(t, patch.base_vars + (tv,), "family.lambda") for t in fam.get("lambda", [])]
    N = args.order if args.order is not None else series.order
    res = verify_gauge(V, GaugeFamily(series, lam, tv), N)
    rep.add("flow equation", res.equation_ok)
    rep.add("flow equation at sampled times", res.samples_ok)
    rep.add("s_t is Maurer-Cartan at sampled times", res.mc_ok)
    if res.failing:
        rep.info.append(("first failure", res.failing))


def cmd_poissonize(doc, rep: Report, args):
    patch, J = structure_from_doc(doc)
    r = check_poissonization(J)
    rep.add("[Pi, E] = Pi", r.homogeneous)
    rep.add("[Pi, Pi] = 0 iff [J, J] = 0", r.poisson == r.jacobi,
            f"Poisson: {'yes' if r.poisson else 'no'}, Jacobi: {'yes' if r.jacobi else 'no'}",
            [tuple(r.witness.rsplit(" = ", 1))] if r.witness else [])
    rng = random.Random(args.seed)
    bad = None
    for i in range(args.samples):
        ka, kb = rng.randint(0, 2), rng.randint(0, 2)
        a = random_operator(patch, ka, rng, max_deg=1)
        b = random_operator(patch, kb, rng, max_deg=1)
        if tilde_op(sj_bracket(a, b)) != sn_bracket(tilde_op(a), tilde_op(b)):
            bad = bad or (ka, kb)
    rep.add("bracket compatibility on random operator pairs", bad is None, f"{args.samples} samples")


def _presymp(doc) -> tuple[PreSympData, int]:
    blk = doc.get("presymplectic")
    if not isinstance(blk, dict):
        raise InputError("no 'presymplectic' block given")
    try:
        n, d = int(blk["n"]), int(blk["d"])
        x = tuple(f"x{i + 1}" for i in range(n))
        u = tuple(f"u{a + 1}" for a in range(d))
        ctx = x + u
        W = [[_poly(e, ctx, "W") for e in row] for row in blk["W"]]
        G = [[_poly(e, ctx, "G") for e in row] for row in blk["G"]]
        ref = {}
        for k, v in blk.get("reference_point", {}).items():
            if k not in ctx:
                raise InputError(f"reference_point: unknown coordinate {k!r}")
            ref[k] = _poly(v, (), "reference_point").constant_value()
        data = PreSympData(n, d, W, G, reference_point=ref)
    except KeyError as e:
        raise InputError(f"presymplectic block lacks {e}") from None
    except (TypeError, ValueError) as e:
        if isinstance(e, InputError):
            raise
        raise InputError(f"presymplectic block: {e}") from None
    K = blk.get("K", 4)
    if not isinstance(K, int) or K < 1:
        raise InputError("K must be a positive integer")
    return data, K


def cmd_ohpark(doc, rep: Report, args):
    data, K = _presymp(doc)
    try:
        T = thickening_poisson(data, K)
    except ZeroDivisionError as e:
        raise InputError(str(e)) from None
    rep.info.append(("W inverse", T.mode))
    rep.info.append(("jet order K", str(K)))
    ok = all(mat_equal(wtilde_inverse_jets(data, m, T.W_inv)[k], neumann_jets(data, m, T.W_inv)[k])
             for m in range(min(K, 3) + 1) for k in product(range(data.n), repeat=m))
    rep.add("inverse jets match the truncated Neumann series", ok, f"m <= {min(K, 3)}")
    rep.add("zero section is coisotropic", project_P(T.J).is_zero())
    if T.mode == "exact":
        rep.add(f"[Pi, Pi] vanishes below p-order {K}", poisson_defect_vanishes(T))
    fns = [Polynomial.constant(1, data.base_vars)] + [Polynomial.var(v, data.base_vars) for v in data.base_vars[:2]]
    fns.append(fns[-1] * fns[-2] + Polynomial.var(data.base_vars[-1], data.base_vars))
    count, bad = cross_check(T, fns, min(args.max_arity, K + 1))
    wit = []
    if bad:
        dx, fi, lhs, rhs = bad[0]
        wit = [("d_F x indices", str(list(dx))), ("function indices", str(list(fi)))] + _nms_witness(lhs - rhs)
    rep.add("closed forms agree with derived brackets", not bad, f"{count} generator tuples", wit)
    f, g = fns[1], fns[-1]
    pair_ok = all(ohpark_function_pair(T, generator_args(T, dx, [f, g])) == ohpark_mk(T, generator_args(T, dx, [f, g]))
                  for j in range(min(3, K)) for dx in product(range(data.n), repeat=j))
    rep.add("normalized permutation sum on function pairs", pair_ok)


COMMANDS = {
    "check-jacobi": cmd_check_jacobi,
    "brackets": cmd_brackets,
    "mc": cmd_mc,
    "formal": cmd_formal,
    "gauge": cmd_gauge,
    "poissonize": cmd_poissonize,
    "ohpark": cmd_ohpark,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="jacobi-linfty", description="Exact checks for Jacobi structures and their L-infinity algebras.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("file")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="also write the report as JSON")
    common.add_argument("--timings", action="store_true", help="include wall-clock timings (breaks byte equality)")
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("check-jacobi", parents=[common])
    p = sub.add_parser("brackets", parents=[common])
    p.add_argument("--max-arity", type=int, default=4)
    p.add_argument("--expect-zero-from", type=int, default=None)
    p = sub.add_parser("mc", parents=[common])
    p.add_argument("--section", help="JSON object keyed by fiber variables")
    p.add_argument("--order", type=int, default=None)
    p.add_argument("--expect", choices=["coisotropic", "not-coisotropic"])
    for name in ("formal", "gauge"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("--order", type=int, default=None)
    p = sub.add_parser("poissonize", parents=[common])
    p.add_argument("--samples", type=int, default=5)
    p = sub.add_parser("ohpark", parents=[common])
    p.add_argument("--max-arity", type=int, default=4)
    return ap


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    rep = Report(args.command, args.file, args.seed)
    start = time.perf_counter()
    try:
        doc = load(args.file)
        COMMANDS[args.command](doc, rep, args)
    except InputError as e:
        rep.error("input", str(e))
    except catalog.CatalogError as e:
        rep.error("catalog", str(e))
    rep.timings[args.command] = time.perf_counter() - start
    stdout.write(rep.text(args.timings))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(rep.as_dict(args.timings), fh, indent=2, sort_keys=True)
            fh.write("\n")
    return rep.exit_code()


def main(argv=None):
    sys.exit(run(argv))
