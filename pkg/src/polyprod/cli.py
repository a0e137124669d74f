"""Command-line front end.

Commands: ``verify``, ``product``, ``hetero``, ``table`` and ``catalog``.
Each ``cmd_*`` function is usable on its own and returns a ``Report``;
``main`` only parses arguments, prints the report and exits with its code
(0 when every law holds, 1 on a law failure, 2 on bad input or shapes).

Inputs are structure files, catalog names, or the generators
``derived:M:N`` and ``sum:M:N`` (Z_M under an N-ary sum, declared as an
iterated binary sum or not).
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
import time
from dataclasses import dataclass, field

from . import structfile
from .carriers import DEFAULT_BOUND, ExactScalar
from .errors import (ArityShapeMismatch, ClosureViolation, NoSolution, NotAField, NotAssociative,
                     ParseError, PolyprodError, UnknownEntry)
from .exemplars import CATALOG, catalog_get, derived_group_zm, sum_group_zm
from .products import (NAMED_QUIVERS, arity_compatible, full_product, hetero_arity,
                       hetero_power, hetero_summary, make_quiver_postlike, mixed_product,
                       quantization_table, quiver_search)
from .programs import QuiverSpec
from .ringsfields import (PolyadicRing, check_double_dornte, classify, field_product,
                          mixed_ring_ells, ring_full_product, ring_mixed_product)
from .structures import (EXHAUSTIVE_BUDGET, AlgebraicStructure, LawReport, check_closure,
                         check_commutativity, check_dornte, check_idempotent_quer,
                         check_solvability, check_total_associativity, find_identity, find_zero,
                         jsonable)

LAW_FAILURES = (NotAssociative, NotAField, ClosureViolation, NoSolution)

STRUCTURE_LAWS = ("closure", "assoc", "comm", "semicomm", "solvable", "dornte",
                  "idempotent_quer", "identity", "zero")
RING_AXIOMS = ("add_closure", "mul_closure", "add_assoc", "add_comm", "add_dornte", "mul_assoc",
               "distrib")
RING_LAWS = RING_AXIOMS + ("mul_comm", "division", "field", "zeroless", "unital",
                           "quer_symmetric", "double_dornte")
_GENERATED = re.compile(r"(derived|sum):(\d+):(\d+)$")


@dataclass
class Options:
    seed: int = 0
    samples: int | None = None
    budget: int = EXHAUSTIVE_BUDGET
    strict: bool = False
    bound: int = DEFAULT_BOUND

    def kw(self):
        return {"samples": self.samples, "seed": self.seed}


@dataclass
class Report:
    command: str
    inputs: list = field(default_factory=list)
    checks: list = field(default_factory=list)
    body: dict = field(default_factory=dict)
    error: dict | None = None
    seed: int | None = None
    elapsed: float = 0.0

    @property
    def exit_code(self) -> int:
        if self.error is not None:
            return 1 if self.error["law_failure"] else 2
        return 0 if all(c["verdict"] == "pass" for c in self.checks) else 1

    @property
    def status(self) -> str:
        return {0: "pass", 1: "fail", 2: "error"}[self.exit_code]

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "inputs": self.inputs,
            "status": self.status,
            "exit_code": self.exit_code,
            "seed": self.seed,
            "checks": self.checks,
            **jsonable(self.body),
            "error": self.error,
            "timing": {"total_s": round(self.elapsed, 6)},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_text(self) -> str:
        head = f"{self.command} {' '.join(self.inputs)}".rstrip()
        lines = [f"{head}: {self.status.upper()}"]
        if self.error:
            lines.append(f"  error {self.error['type']}: {self.error['message']}")
            for k, v in self.error.items():
                if k not in ("type", "message", "law_failure"):
                    lines.append(f"    {k}: {json.dumps(v)}")
        for c in self.checks:
            ev = c["evidence"]
            where = "" if ev is None else (
                f" [{ev['level']}, {ev['count']}" + (f", seed {ev['seed']}" if ev["seed"]
                                                     is not None else "") + "]")
            lines.append(f"  {c['law']:<16} {c['verdict']}{where}")
            if c["counterexample"] is not None:
                lines.append(f"    counterexample: {json.dumps(c['counterexample'])}")
        for key, value in jsonable(self.body).items():
            lines.extend(_text_block(key, value))
        return "\n".join(lines)


def _text_block(key, value, indent="  "):
    if key == "rows":
        out = [f"{indent}rows:"]
        for r in value:
            pairs = ", ".join(f"{n}->{m}" for n, m in r["pairs"])
            mark = "  (diagonal)" if r.get("diagonal") else ""
            out.append(f"{indent}  k={r['k']} l_mu={r['ell_mu']} l_id={r['ell_id']}: {pairs}{mark}")
        return out
    if isinstance(value, dict):
        out = [f"{indent}{key}:"]
        for k, v in value.items():
            out.extend(_text_block(k, v, indent + "  "))
        return out
    if isinstance(value, list) and value and all(isinstance(v, str) for v in value):
        return [f"{indent}{key}:"] + [f"{indent}  {v}" for v in value]
    if isinstance(value, list) and value and all(isinstance(v, dict) for v in value):
        return [f"{indent}{key}:"] + [f"{indent}  {json.dumps(v)}" for v in value]
    return [f"{indent}{key}: {json.dumps(value)}"]


def _check(law, report: LawReport | None = None, passed=None, detail=None, elapsed=0.0):
    if report is not None:
        d = report.to_dict()
        passed = report.passed if passed is None else passed
        detail = d["detail"] if detail is None else jsonable(detail)
        evidence, counter = d["evidence"], d["counterexample"]
    else:
        evidence, counter, detail = None, None, jsonable(detail or {})
    return {"law": law, "verdict": "pass" if passed else "fail", "evidence": evidence,
            "counterexample": counter, "detail": detail, "timing": round(elapsed, 6)}


def _timed(fn, *args, **kw):
    t = time.perf_counter()
    out = fn(*args, **kw)
    return out, time.perf_counter() - t


def _error(e: Exception) -> dict:
    out = {"type": type(e).__name__, "message": str(e), "law_failure": isinstance(e, LAW_FAILURES)}
    if isinstance(e, ParseError):
        out["line"], out["col"] = e.line, e.col
    if isinstance(e, ClosureViolation):
        out["polyad"] = jsonable(e.polyad)
    if isinstance(e, NotAField):
        out["witness"] = jsonable(e.witness)
        out["reason"] = jsonable(e.reason)
    if isinstance(e, NotAssociative) and e.report is not None:
        out["report"] = e.report.to_dict()
    return out


def _run(report: Report, fn):
    """Fill ``report`` by calling ``fn``; errors are recorded, not raised."""
    t = time.perf_counter()
    try:
        fn()
    except (PolyprodError, OSError) as e:
        report.error = _error(e)
    report.elapsed = time.perf_counter() - t
    return report


# ------------------------------------------------------------------ inputs


def load_input(spec: str, bound: int = DEFAULT_BOUND):
    """``(object, laws)`` for a file path, catalog name or ``derived:M:N``."""
    if os.path.exists(spec):
        doc = structfile.load(spec)
        return structfile.build(doc), doc.laws
    m = _GENERATED.match(spec)
    if m:
        make = derived_group_zm if m.group(1) == "derived" else sum_group_zm
        return make(int(m.group(2)), int(m.group(3))), ()
    return catalog_get(spec, bound), ()


def _structure_input(spec, opts):
    obj, laws = load_input(spec, opts.bound)
    if not isinstance(obj, AlgebraicStructure):
        raise UnknownEntry(f"{spec!r} is not a single-operation structure")
    return obj, laws


# ------------------------------------------------------------------ verify


def verify_structure(s: AlgebraicStructure, laws, opts: Options, expected=None) -> list:
    kw = opts.kw()
    laws = list(laws) or (["closure", "assoc", "dornte"] if s.quer is not None or
                          s.carrier.finite else ["closure", "assoc"])
    for law in laws:
        if law not in STRUCTURE_LAWS:
            raise UnknownEntry(f"unknown law {law!r}; known: {', '.join(STRUCTURE_LAWS)}")
    out = []
    comm = None
    for law in laws:
        t = time.perf_counter()
        if law == "closure":
            c = _check(law, check_closure(s, **kw))
        elif law == "assoc":
            c = _check(law, check_total_associativity(s, budget=opts.budget, **kw))
        elif law in ("comm", "semicomm"):
            comm = comm or check_commutativity(s, **kw)
            ok = comm.commutative if law == "comm" else comm.semicommutative
            c = _check(law, passed=ok, detail={"kind": comm.kind, "failing": comm.failing})
            c["evidence"] = comm.evidence.to_dict()
        elif law == "solvable":
            c = _check(law, check_solvability(s, **kw))
        elif law == "dornte":
            c = _check(law, check_dornte(s, budget=opts.budget, **kw))
        elif law == "idempotent_quer":
            c = _check(law, check_idempotent_quer(s, **kw))
        elif law == "identity":
            r = find_identity(s, **kw)
            c = _check(law, passed=r.kind == "two_sided", detail=r.to_dict())
        else:
            r = find_zero(s, **kw)
            c = _check(law, passed=r.element is not None, detail=r.to_dict())
        c["timing"] = round(time.perf_counter() - t, 6)
        out.append(c)
    if expected:
        comm = comm or check_commutativity(s, **kw)
        got = {"kind": "group" if check_dornte(s, budget=opts.budget, **kw).passed else "semigroup",
               "commutative": comm.commutative, "semicommutative": comm.semicommutative}
        out.append(_expectation(expected, got))
    return out


def _expectation(expected: dict, got: dict) -> dict:
    diff = {k: {"expected": v, "found": got[k]} for k, v in expected.items()
            if k in got and got[k] != v}
    return _check("expected", passed=not diff, detail={"mismatches": diff})


def verify_ring(r: PolyadicRing, laws, opts: Options, expected=None):
    laws = list(laws) or list(RING_AXIOMS)
    for law in laws:
        if law not in RING_LAWS:
            raise UnknownEntry(f"unknown law {law!r}; known: {', '.join(RING_LAWS)}")
    rep, elapsed = _timed(classify, r, budget=opts.budget, **opts.kw())
    by_law = {x.law: x for x in rep.reports}
    out = []
    for law in laws:
        if law in by_law:
            out.append(_check(law, by_law[law], elapsed=0.0))
        elif law == "mul_comm":
            out.append(_check(law, passed=rep.mul_commutativity == "commutative"))
        elif law == "division":
            out.append(_check(law, by_law.get("mul_star_group"), passed=rep.division))
        elif law == "field":
            out.append(_check(law, passed=rep.is_field, detail={"kind": rep.kind}))
        elif law == "zeroless":
            out.append(_check(law, passed=rep.zeroless, detail={"zero": rep.zero}))
        elif law == "unital":
            out.append(_check(law, passed=rep.unital, detail=rep.identity.to_dict()))
        elif law == "quer_symmetric":
            out.append(_check(law, passed=bool(rep.quer_symmetric),
                              detail={"factor": rep.quer_factor}))
        elif law == "double_dornte":
            res, t = _timed(check_double_dornte, r, **opts.kw())
            out.append(_check(law, res, elapsed=t))
        else:
            out.append(_check(law, passed=False, detail={"error": "law not computed"}))
    if expected:
        got = {**rep.to_dict(), "quer_factor": _plain(rep.quer_factor)}
        out.append(_expectation(expected, got))
    if out:
        out[0]["timing"] = round(elapsed, 6)
    return out, rep


def _plain(x):
    # real integral scalars compare equal to the ints used in expectations
    if isinstance(x, ExactScalar) and x.phase == 0 and x.den == 1:
        return x.num
    return x


def cmd_verify(spec: str, opts: Options | None = None, laws=()) -> Report:
    opts = opts or Options()
    report = Report("verify", [spec], seed=opts.seed)

    def go():
        obj, file_laws = load_input(spec, opts.bound)
        chosen = tuple(laws) or tuple(file_laws)
        expected = CATALOG[spec].expected if spec in CATALOG and not os.path.exists(spec) else None
        if isinstance(obj, QuiverSpec):
            report.body["quiver"] = _quiver_block(obj, spec)
            report.checks.append(_check("quiver_valid", passed=not obj.problems(),
                                        detail={"problems": obj.problems()}))
        elif isinstance(obj, PolyadicRing):
            report.checks, rep = verify_ring(obj, chosen, opts, expected)
            report.body["classification"] = rep.to_dict()
        else:
            report.checks = verify_structure(obj, chosen, opts, expected)
    return _run(report, go)


# ----------------------------------------------------------------- product


def cmd_product(spec1: str, spec2: str, mode: str = "full", opts: Options | None = None, *,
                arity: int | None = None, m: int | None = None, n: int | None = None,
                out: str | None = None) -> Report:
    opts = opts or Options()
    report = Report("product", [spec1, spec2], seed=opts.seed)

    def go():
        a, _ = load_input(spec1, opts.bound)
        b, _ = load_input(spec2, opts.bound)
        rings = isinstance(a, PolyadicRing) and isinstance(b, PolyadicRing)
        groups = isinstance(a, AlgebraicStructure) and isinstance(b, AlgebraicStructure)
        if not (rings or groups):
            raise ArityShapeMismatch("product inputs must be two structures or two rings")
        meta = {"mode": mode}
        report.body["product"] = meta
        if groups:
            meta["arities"] = [a.arity, b.arity]
            if mode == "full":
                if a.arity != b.arity:
                    raise ArityShapeMismatch(f"arities differ: {a.arity} vs {b.arity}; "
                                             "use the mixed mode")
                prod = full_product(a, b)
            elif mode == "mixed":
                prod = mixed_product(a, b, arity)
                sols = arity_compatible(a.arity, b.arity, prod.arity + 1)
                meta["solution"] = sols[-1].to_dict()
            else:
                raise ArityShapeMismatch("the field mode needs two rings")
            meta["arity"] = prod.arity
            report.checks = verify_structure(prod, (), opts)
        else:
            meta["shapes"] = [[a.m, a.n], [b.m, b.n]]
            if mode == "full":
                prod = ring_full_product(a, b, check=False)
            elif mode == "mixed":
                m_out, n_out, l_add, l_mul = mixed_ring_ells(a, b, m, n)
                meta["ells_add"], meta["ells_mul"] = list(l_add), list(l_mul)
                prod = ring_mixed_product(a, b, m_out, n_out, check=False)
            else:
                prod = field_product(a, b, budget=opts.budget, **opts.kw())
            meta["shape"] = [prod.m, prod.n]
            laws = RING_AXIOMS + (("field",) if mode == "field" else ())
            report.checks, rep = verify_ring(prod, laws, opts)
            report.body["classification"] = rep.to_dict()
        meta["name"] = prod.name
        if out:
            with open(out, "w", encoding="utf-8") as fh:
                fh.write(structfile.serialize(prod))
            meta["written"] = out
    return _run(report, go)


# ------------------------------------------------------------------ hetero


def _quiver_block(q: QuiverSpec, source: str) -> dict:
    return {"source": source, "k": q.k, "n": q.n_in, "n_out": q.n_out, "ell_mu": q.ell_mu,
            "ell_id": q.ell_id, "spec": q.text(), "placement": q.table()}


def _named_quiver(name: str) -> QuiverSpec:
    if name in NAMED_QUIVERS:
        return NAMED_QUIVERS[name]
    q = catalog_get(name)
    if not isinstance(q, QuiverSpec):
        raise UnknownEntry(f"{name!r} is not a quiver")
    return q


def cmd_hetero(spec: str, k: int, ell_id: int, quiver: str = "postlike",
               opts: Options | None = None, budget: int = 5000) -> Report:
    opts = opts or Options()
    report = Report("hetero", [spec], seed=opts.seed)

    def go():
        s, _ = _structure_input(spec, opts)
        n_out = hetero_arity(s.arity, k, ell_id)
        if quiver == "postlike":
            q = make_quiver_postlike(s.arity, k, ell_id)
        elif quiver == "search":
            if n_out is None:
                make_quiver_postlike(s.arity, k, ell_id)  # raises NotQuantized
            found = quiver_search(s, n_out, k, ell_id, budget, seed=opts.seed)
            report.body["search"] = {"budget": budget, "found": [f.text() for f in found]}
            if not found:
                report.checks.append(_check("assoc", passed=False,
                                            detail={"error": "no associative placement found"}))
                return
            q = found[0]
        else:
            q = _named_quiver(quiver)
        report.body["quiver"] = _quiver_block(q, quiver)
        h = hetero_power(s, q, strict=opts.strict, budget=opts.budget, **opts.kw())
        report.checks.append(_check("assoc", h.reports[0]))
        summary = hetero_summary(h)
        report.body["identity"] = summary["identity"]
        if "quer" in summary:
            report.body["quer"] = summary["quer"]
            if summary["quer"]["no_solution"] == 0:
                res, t = _timed(check_dornte, h, budget=opts.budget, **opts.kw())
                report.checks.append(_check("dornte", res, elapsed=t))
    return _run(report, go)


# ------------------------------------------------------------------- table


def table_rows(k_max: int, n_max: int) -> list[dict]:
    """Quantization rows, with the intactless rows ``n' = n`` marked diagonal."""
    rows = []
    by_k = {}
    for r in quantization_table(k_max, n_max) if k_max >= 2 else []:
        by_k.setdefault(r.k, []).append(r)
    for k in range(2, k_max + 1):
        diag = [[n, n] for n in range(2, n_max + 1)]
        if diag:
            rows.append({"k": k, "ell_mu": k, "ell_id": 0, "pairs": diag, "diagonal": True})
        for r in by_k.get(k, []):
            rows.append({**r.to_dict(), "diagonal": False})
    return rows


def cmd_table(k_max: int, n_max: int, opts: Options | None = None) -> Report:
    report = Report("table", seed=None)

    def go():
        report.body["k_max"], report.body["n_max"] = k_max, n_max
        report.body["rows"] = table_rows(k_max, n_max)
    return _run(report, go)


# ----------------------------------------------------------------- catalog


def cmd_catalog(name: str | None = None, opts: Options | None = None) -> Report:
    opts = opts or Options()
    report = Report("catalog", [name] if name else [])

    def go():
        if name is None:
            report.body["entries"] = [{"name": e.name, "summary": e.summary,
                                       "expected": e.expected} for e in CATALOG.values()]
            return
        obj = catalog_get(name, opts.bound)
        report.body["entry"] = {"name": name, "summary": CATALOG[name].summary,
                                "expected": CATALOG[name].expected}
        if isinstance(obj, QuiverSpec):
            report.body["quiver"] = _quiver_block(obj, name)
        else:
            report.body["file"] = structfile.serialize(obj).splitlines()
    return _run(report, go)


# -------------------------------------------------------------------- main


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=int(os.environ.get("POLYPROD_SEED", 0)),
                        help="seed for sampled checks (default: $POLYPROD_SEED or 0)")
    common.add_argument("--samples", type=int, default=None,
                        help="tuples per sampled check (default depends on the law)")
    common.add_argument("--exhaustive-budget", type=int, default=EXHAUSTIVE_BUDGET,
                        help="largest tuple space checked exhaustively")
    common.add_argument("--strict", action="store_true",
                        help="treat a non-associative placement as an error")
    common.add_argument("--bound", type=int, default=DEFAULT_BOUND,
                        help="parameter bound for sampling infinite carriers")
    common.add_argument("--format", choices=("json", "text"), default="json")

    p = argparse.ArgumentParser(prog="polyprod", description="Polyadic structures and products")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common], help="check the laws of a structure or ring")
    v.add_argument("input", help="structure file, catalog name, or derived:M:N / sum:M:N")
    v.add_argument("--laws", default="", help="comma-separated laws (default: from the file)")

    pr = sub.add_parser("product", parents=[common], help="build a direct product")
    pr.add_argument("inputs", nargs=2)
    pr.add_argument("--mode", choices=("full", "mixed", "field"), default="full")
    pr.add_argument("--arity", type=int, help="target arity for a mixed product of structures")
    pr.add_argument("--m", type=int, help="target additive arity for a mixed ring product")
    pr.add_argument("--n", type=int, help="target multiplicative arity for a mixed ring product")
    pr.add_argument("--out", help="write the product as a structure file")

    h = sub.add_parser("hetero", parents=[common], help="build a heteromorphic k-th power")
    h.add_argument("input")
    h.add_argument("--k", type=int, required=True)
    h.add_argument("--ell-id", type=int, default=0)
    h.add_argument("--quiver", default="postlike", help="postlike, search, or a named quiver")
    h.add_argument("--budget", type=int, default=5000, help="candidates tried by search")

    t = sub.add_parser("table", parents=[common], help="print the arity quantization table")
    t.add_argument("--k-max", type=int, default=4)
    t.add_argument("--n-max", type=int, default=13)

    c = sub.add_parser("catalog", parents=[common], help="list or show built-in examples")
    c.add_argument("name", nargs="?")
    return p


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    opts = Options(seed=args.seed, samples=args.samples, budget=args.exhaustive_budget,
                   strict=args.strict, bound=args.bound)
    if args.command == "verify":
        laws = tuple(x.strip() for x in args.laws.split(",") if x.strip())
        report = cmd_verify(args.input, opts, laws)
    elif args.command == "product":
        report = cmd_product(*args.inputs, mode=args.mode, opts=opts, arity=args.arity,
                             m=args.m, n=args.n, out=args.out)
    elif args.command == "hetero":
        report = cmd_hetero(args.input, args.k, args.ell_id, args.quiver, opts, args.budget)
    elif args.command == "table":
        report = cmd_table(args.k_max, args.n_max, opts)
    else:
        report = cmd_catalog(args.name, opts)
    print(report.to_json() if args.format == "json" else report.to_text())
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
