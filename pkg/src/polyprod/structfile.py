"""Plain-text structure files.

A file is a list of sections, each opened by a bracketed header and holding
``key = value`` lines. Values are expressions in a small call syntax that is
parsed with ``ast`` and evaluated against a fixed table of names, so nothing
from the file is ever executed as Python. Indented lines continue the value
on the line above. ``#`` starts a comment.

    [structure]
    name = Z5 ternary sum
    kind = structure

    [carrier]
    spec = modular(5)

    [op mul arity=3]
    program = sum(3)

    [quer mul]
    program = scale(-1)

    [verify]
    laws = assoc, dornte

Rings use ``kind = ring`` and declare both ``[op add]`` and ``[op mul]``.
"""

from __future__ import annotations

import ast
import re
from dataclasses import dataclass, field

from .carriers import (CARRIER_FAMILIES, Carrier, CycShiftMatrix, Mod, ProductCarrier, element_text,
                       scalar)
from .errors import ParseError
from .programs import (Alternating, Componentwise, Hetero, Iterated, IteratedQuer, Linear, Power,
                       Product, Program, QuiverSpec, Scale, Sum, Table)
from .ringsfields import PolyadicRing, ring
from .structures import AlgebraicStructure, structure

KINDS = ("structure", "ring")

ELEMENTS = {
    "mod": lambda r, m: Mod(r, m),
    "q": lambda num, den=1, phase=0: scalar(num, den, phase),
    "shiftmat": lambda size, shift, entries: CycShiftMatrix(size, shift, tuple(entries)),
}

PROGRAMS = {
    "sum": Sum,
    "prod": Product,
    "linear": lambda coeffs, const=0: Linear(tuple(coeffs), const),
    "alt": Alternating,
    "iter": Iterated,
    "comp": lambda *parts: Componentwise(tuple(parts)),
    "quiver": lambda k, n_in, n_out, rows, intact=(): QuiverSpec(k, n_in, n_out, rows, intact),
    "hetero": Hetero,
    "table": lambda n, elements, values: Table(n, tuple(elements), tuple(values)),
    "scale": Scale,
    "power": Power,
    "iterquer": IteratedQuer,
}

CARRIERS = {**CARRIER_FAMILIES, "product": lambda *cs: ProductCarrier(tuple(cs))}


@dataclass
class StructureFile:
    """Parsed document: evaluated carrier, programs and elements."""

    name: str
    kind: str
    carrier: Carrier
    ops: dict  # role -> Program
    quers: dict = field(default_factory=dict)
    candidates: tuple = ()
    laws: tuple = ()

    def __eq__(self, other):
        return isinstance(other, StructureFile) and self._key() == other._key()

    def _key(self):
        return (self.name, self.kind, self.carrier, sorted(self.ops.items()),
                sorted(self.quers.items()), self.candidates, self.laws)


# ------------------------------------------------------------------ parsing


class _Value:
    def __init__(self, text, line, col):
        self.text, self.line, self.col = text, line, col


def _evaluate(value: _Value, names: dict):
    try:
        tree = ast.parse(value.text, mode="eval")
    except SyntaxError as e:
        line = value.line + (e.lineno or 1) - 1
        col = (e.offset or 1) + (value.col - 1 if (e.lineno or 1) == 1 else 0)
        raise ParseError(f"syntax error: {e.msg}", line, col) from None
    return _Eval(value, names).visit(tree.body)


class _Eval(ast.NodeVisitor):
    def __init__(self, value, names):
        self.value = value
        self.names = names

    def fail(self, node, msg):
        line = self.value.line + node.lineno - 1
        col = node.col_offset + 1 + (self.value.col - 1 if node.lineno == 1 else 0)
        raise ParseError(msg, line, col)

    def generic_visit(self, node):
        self.fail(node, f"unsupported syntax: {type(node).__name__}")

    def visit_Constant(self, node):
        if isinstance(node.value, (int, str, bool)):
            return node.value
        self.fail(node, f"unsupported literal {node.value!r}")

    def visit_UnaryOp(self, node):
        v = self.visit(node.operand)
        if isinstance(node.op, ast.USub) and isinstance(v, int):
            return -v
        if isinstance(node.op, ast.UAdd) and isinstance(v, int):
            return v
        self.fail(node, "unsupported unary operator")

    def visit_List(self, node):
        return [self.visit(e) for e in node.elts]

    def visit_Tuple(self, node):
        return tuple(self.visit(e) for e in node.elts)

    def visit_Name(self, node):
        if node.id in ("True", "False"):
            return node.id == "True"
        self.fail(node, f"unknown name {node.id!r}")

    def visit_Call(self, node):
        if not isinstance(node.func, ast.Name):
            self.fail(node, "only plain function names may be called")
        fn = self.names.get(node.func.id)
        if fn is None:
            self.fail(node.func, f"unknown function {node.func.id!r}")
        args = [self.visit(a) for a in node.args]
        kwargs = {kw.arg: self.visit(kw.value) for kw in node.keywords}
        try:
            return fn(*args, **kwargs)
        except ParseError:
            raise
        except (TypeError, ValueError, ArithmeticError, KeyError) as e:
            self.fail(node, f"bad call to {node.func.id}: {e}")


_HEADER = re.compile(r"\[\s*([A-Za-z_]+)((?:\s+[^\]]*)?)\]\s*$")


def _sections(text: str):
    """Yield ``(name, args, header_line, {key: _Value})`` in file order."""
    out = []
    current = None
    last = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        if line[0] in " \t" and last is not None:
            last.text += "\n" + line
            continue
        stripped = line.strip()
        if stripped.startswith("["):
            m = _HEADER.match(stripped)
            if not m:
                raise ParseError(f"malformed section header {stripped!r}", lineno, 1)
            current = (m.group(1), m.group(2).split(), lineno, {})
            out.append(current)
            last = None
            continue
        if current is None:
            raise ParseError("content before the first section header", lineno, 1)
        key, eq, val = line.partition("=")
        if not eq:
            raise ParseError("expected 'key = value'", lineno, 1)
        key = key.strip()
        if key in current[3]:
            raise ParseError(f"duplicate key {key!r}", lineno, 1)
        col = len(line) - len(val.lstrip()) + 1
        last = _Value(val.strip(), lineno, col)
        current[3][key] = last
    return out


def _header_args(args, line):
    role, opts = None, {}
    for a in args:
        k, eq, v = a.partition("=")
        if eq:
            opts[k] = v
        elif role is None:
            role = a
        else:
            raise ParseError(f"unexpected header word {a!r}", line, 1)
    return role, opts


def _require(keys: dict, name: str, section: str, line: int) -> _Value:
    if name not in keys:
        raise ParseError(f"section [{section}] needs '{name} = ...'", line, 1)
    return keys[name]


def _only(keys: dict, allowed: set, section: str):
    for k, v in keys.items():
        if k not in allowed:
            raise ParseError(f"unknown key {k!r} in [{section}]", v.line, 1)


def parse(text: str) -> StructureFile:
    sections = _sections(text)
    if not sections:
        raise ParseError("empty document: no sections", 1, 1)
    name, kind = "", "structure"
    carrier = None
    ops, quers, op_lines = {}, {}, {}
    candidates, laws = (), ()
    seen = set()
    for sec, args, line, keys in sections:
        role, opts = _header_args(args, line)
        tag = (sec, role)
        if tag in seen:
            raise ParseError(f"duplicate section [{sec}{' ' + role if role else ''}]", line, 1)
        seen.add(tag)
        if sec == "structure":
            _only(keys, {"name", "kind"}, sec)
            if "name" in keys:
                name = keys["name"].text
            if "kind" in keys:
                kind = keys["kind"].text
                if kind not in KINDS:
                    raise ParseError(f"kind must be one of {', '.join(KINDS)}", keys["kind"].line,
                                     keys["kind"].col)
        elif sec == "carrier":
            _only(keys, {"spec"}, sec)
            carrier = _evaluate(_require(keys, "spec", sec, line), CARRIERS)
            if not isinstance(carrier, Carrier):
                raise ParseError("carrier spec must name a carrier family", keys["spec"].line,
                                 keys["spec"].col)
        elif sec in ("op", "quer"):
            if role not in ("mul", "add"):
                raise ParseError(f"[{sec}] needs a role, 'mul' or 'add'", line, 1)
            _only(keys, {"program"}, sec)
            v = _require(keys, "program", sec, line)
            prog = _evaluate(v, PROGRAMS)
            if not isinstance(prog, Program):
                raise ParseError("program must be an operation", v.line, v.col)
            want = 1 if sec == "quer" else opts.get("arity")
            if want is not None and str(prog.arity) != str(want):
                raise ParseError(f"declared arity {want} but program has arity {prog.arity}",
                                 line, 1)
            (ops if sec == "op" else quers)[role] = prog
            op_lines[role] = line
        elif sec == "candidates":
            _only(keys, {"elements"}, sec)
            v = _require(keys, "elements", sec, line)
            candidates = tuple(_evaluate(_Value(f"[{v.text}]", v.line, v.col - 1), ELEMENTS))
        elif sec == "verify":
            _only(keys, {"laws"}, sec)
            v = _require(keys, "laws", sec, line)
            laws = tuple(x.strip() for x in v.text.replace("\n", ",").split(",") if x.strip())
        else:
            raise ParseError(f"unknown section [{sec}]", line, 1)
    if carrier is None:
        raise ParseError("missing [carrier] section", 1, 1)
    if "mul" not in ops:
        raise ParseError("missing [op mul] section", 1, 1)
    if kind == "ring" and "add" not in ops:
        raise ParseError("a ring needs an [op add] section", 1, 1)
    if kind == "structure" and "add" in ops:
        raise ParseError("[op add] is only allowed with kind = ring", op_lines["add"], 1)
    return StructureFile(name, kind, carrier, ops, quers, candidates, laws)


def build(doc: StructureFile):
    """The structure or ring a document describes."""
    if doc.kind == "ring":
        return ring(doc.ops["add"], doc.ops["mul"], doc.carrier, doc.quers.get("add"),
                    doc.quers.get("mul"), doc.name, doc.candidates)
    return structure(doc.ops["mul"], doc.carrier, doc.quers.get("mul"), doc.name, doc.candidates)


def load(path) -> StructureFile:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


# -------------------------------------------------------------- serializing


def document(obj, laws=()) -> StructureFile:
    """The document describing a built structure or ring."""
    if isinstance(obj, PolyadicRing):
        ops = {"add": obj.add.program, "mul": obj.mul.program}
        quers = {k: v for k, v in (("add", obj.add_quer), ("mul", obj.mul_quer)) if v is not None}
        return StructureFile(obj.name, "ring", obj.carrier, ops, quers, tuple(obj.candidates),
                             tuple(laws))
    if isinstance(obj, AlgebraicStructure):
        quers = {"mul": obj.quer} if obj.quer is not None else {}
        return StructureFile(obj.name, "structure", obj.carrier, {"mul": obj.mult.program},
                             quers, tuple(obj.candidates), tuple(laws))
    raise TypeError(f"cannot describe {type(obj).__name__} as a structure file")


def serialize(obj, laws=()) -> str:
    doc = obj if isinstance(obj, StructureFile) else document(obj, laws)
    if "#" in doc.name or "\n" in doc.name:
        raise ValueError("names may not contain '#' or newlines")
    out = ["[structure]"]
    if doc.name:
        out.append(f"name = {doc.name}")
    out += [f"kind = {doc.kind}", "", "[carrier]", f"spec = {doc.carrier.expr}", ""]
    for role in ("add", "mul"):
        if role in doc.ops:
            p = doc.ops[role]
            out += [f"[op {role} arity={p.arity}]", f"program = {p.text()}", ""]
    for role in ("add", "mul"):
        if role in doc.quers:
            out += [f"[quer {role}]", f"program = {doc.quers[role].text()}", ""]
    if doc.candidates:
        out += ["[candidates]",
                "elements = " + ", ".join(element_text(e) for e in doc.candidates), ""]
    if doc.laws:
        out += ["[verify]", "laws = " + ", ".join(doc.laws), ""]
    return "\n".join(out)
