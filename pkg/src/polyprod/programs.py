"""The closed expression language for operations.

Every operation is a program: a frozen, hashable value with an ``arity`` and
a ``__call__`` taking a tuple of elements. Programs are generic over the
element types in ``carriers`` through ordinary ``+``, ``*``, ``**`` and
negation, so ``Sum(3)`` works for residues, scalars and shift matrices alike.
Each program also has a textual form (``text()``) read back by
``structfile.parse_program``.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass
from functools import cached_property, reduce

from .carriers import element_text
from .errors import InvalidQuiver


class Program:
    arity: int

    def __call__(self, args):
        raise NotImplementedError

    def text(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class Sum(Program):
    n: int

    @property
    def arity(self):
        return self.n

    def __call__(self, args):
        return reduce(operator.add, args)

    def text(self):
        return f"sum({self.n})"


@dataclass(frozen=True)
class Product(Program):
    """Left-to-right chain product (matrix products included)."""

    n: int

    @property
    def arity(self):
        return self.n

    def __call__(self, args):
        return reduce(operator.mul, args)

    def text(self):
        return f"prod({self.n})"


@dataclass(frozen=True)
class Linear(Program):
    """``c1*x1 + ... + cn*xn + const`` on residues."""

    coeffs: tuple
    const: int = 0

    @property
    def arity(self):
        return len(self.coeffs)

    def __call__(self, args):
        acc = args[0] * self.coeffs[0]
        for c, x in zip(self.coeffs[1:], args[1:]):
            acc = acc + x * c
        return acc + self.const

    def text(self):
        cs = ", ".join(str(c) for c in self.coeffs)
        return f"linear([{cs}])" if not self.const else f"linear([{cs}], {self.const})"


@dataclass(frozen=True)
class Alternating(Program):
    """``x1 * x2^-1 * x3 * ...`` (or ``x1 - x2 + x3 ...`` when additive)."""

    n: int
    additive: bool = False

    @property
    def arity(self):
        return self.n

    def __call__(self, args):
        acc = args[0]
        for j, x in enumerate(args[1:], start=1):
            if self.additive:
                acc = acc - x if j % 2 else acc + x
            else:
                acc = acc * (x ** -1) if j % 2 else acc * x
        return acc

    def text(self):
        return f"alt({self.n}, additive=True)" if self.additive else f"alt({self.n})"


@dataclass(frozen=True)
class Iterated(Program):
    """The ``ell``-fold left-nested composition of ``base``."""

    base: Program
    ell: int

    def __post_init__(self):
        if self.ell < 1:
            raise ValueError("ell must be at least 1")

    @property
    def arity(self):
        return self.ell * (self.base.arity - 1) + 1

    def __call__(self, args):
        n = self.base.arity
        acc = self.base(tuple(args[:n]))
        pos = n
        for _ in range(self.ell - 1):
            acc = self.base((acc,) + tuple(args[pos:pos + n - 1]))
            pos += n - 1
        return acc

    def text(self):
        return f"iter({self.base.text()}, {self.ell})"


@dataclass(frozen=True)
class Componentwise(Program):
    """Apply ``parts[c]`` to component ``c`` of tuple arguments."""

    parts: tuple

    def __post_init__(self):
        if len({p.arity for p in self.parts}) != 1:
            raise ValueError("componentwise parts must share one arity")

    @property
    def arity(self):
        return self.parts[0].arity

    def __call__(self, args):
        return tuple(p(col) for p, col in zip(self.parts, zip(*args)))

    def text(self):
        return "comp(" + ", ".join(p.text() for p in self.parts) + ")"


@dataclass(frozen=True)
class QuiverSpec:
    """Placement of components for a heteromorphism on k-fold tuples.

    ``rows[r]`` lists the ``n_in`` source slots ``(arg, comp)`` fed to the
    base operation to produce output component ``r + 1``; ``intact[t]`` is
    the slot copied unchanged into component ``len(rows) + t + 1``. Slots are
    1-based: ``(j, c)`` is component ``c`` of argument ``j``.
    """

    k: int
    n_in: int
    n_out: int
    rows: tuple
    intact: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(tuple(tuple(s) for s in r) for r in self.rows))
        object.__setattr__(self, "intact", tuple(tuple(s) for s in self.intact))

    @property
    def ell_mu(self) -> int:
        return len(self.rows)

    @property
    def ell_id(self) -> int:
        return len(self.intact)

    def slots(self) -> list:
        return [s for r in self.rows for s in r] + list(self.intact)

    def problems(self) -> list[str]:
        out = []
        if self.ell_mu + self.ell_id != self.k:
            out.append(f"rows + intact = {self.ell_mu + self.ell_id}, expected k = {self.k}")
        if any(len(r) != self.n_in for r in self.rows):
            out.append(f"every row must read {self.n_in} slots")
        used = self.slots()
        bad = [s for s in used if not (1 <= s[0] <= self.n_out and 1 <= s[1] <= self.k)]
        if bad:
            out.append(f"slots out of range: {bad}")
        seen, dup = set(), []
        for s in used:
            if s in seen:
                dup.append(s)
            seen.add(s)
        if dup:
            out.append(f"slots used twice: {sorted(set(dup))}")
        if len(used) != self.k * self.n_out and not bad:
            out.append(f"{len(used)} slots used, expected k*n' = {self.k * self.n_out}")
        return out

    def validate(self):
        p = self.problems()
        if p:
            raise InvalidQuiver("; ".join(p))
        return self

    def text(self):
        def slots(ss):
            return "[" + ", ".join(f"({a}, {c})" for a, c in ss) + "]"
        rows = "[" + ", ".join(slots(r) for r in self.rows) + "]"
        return (f"quiver(k={self.k}, n_in={self.n_in}, n_out={self.n_out}, "
                f"rows={rows}, intact={slots(self.intact)})")

    def table(self) -> list[str]:
        lines = []
        for r, row in enumerate(self.rows, start=1):
            lines.append(f"component {r}: mu[" + ", ".join(f"g{c}^({a})" for a, c in row) + "]")
        for t, (a, c) in enumerate(self.intact, start=self.ell_mu + 1):
            lines.append(f"component {t}: g{c}^({a})")
        return lines


@dataclass(frozen=True)
class Hetero(Program):
    base: Program
    quiver: QuiverSpec

    @property
    def arity(self):
        return self.quiver.n_out

    def __call__(self, args):
        q = self.quiver
        out = [self.base(tuple(args[a - 1][c - 1] for a, c in row)) for row in q.rows]
        out.extend(args[a - 1][c - 1] for a, c in q.intact)
        return tuple(out)

    def text(self):
        return f"hetero({self.base.text()}, {self.quiver.text()})"


@dataclass(frozen=True)
class Table(Program):
    """Cayley table over an explicit element list, flat in C order."""

    n: int
    elements: tuple
    values: tuple

    def __post_init__(self):
        if len(self.values) != len(self.elements) ** self.n:
            raise ValueError("table has the wrong number of entries")

    @property
    def arity(self):
        return self.n

    @cached_property
    def _index(self):
        return {e: i for i, e in enumerate(self.elements)}

    def __call__(self, args):
        s = len(self.elements)
        flat = 0
        for x in args:
            flat = flat * s + self._index[x]
        return self.elements[self.values[flat]]

    def text(self):
        els = ", ".join(element_text(e) for e in self.elements)
        vals = ", ".join(str(v) for v in self.values)
        return f"table({self.n}, [{els}], [{vals}])"


# unary programs, used for quers


@dataclass(frozen=True)
class Scale(Program):
    c: int
    arity = 1

    def __call__(self, args):
        return _map(args[0], lambda x: x * self.c)

    def text(self):
        return f"scale({self.c})"


@dataclass(frozen=True)
class Power(Program):
    p: int
    arity = 1

    def __call__(self, args):
        return _map(args[0], lambda x: x ** self.p)

    def text(self):
        return f"power({self.p})"


@dataclass(frozen=True)
class IteratedQuer(Program):
    """Quer of ``Iterated(mul, ell)`` built from the quer of ``mul``.

    Bracketing the last ``n`` entries reduces the equation for ``ell`` to a
    two-sided equation ``mul[g^(n-1), x] = y`` whose solution is
    ``mul[qg, g^(n-3), qg, y]`` with ``qg`` the base quer.
    """

    mul: Program
    quer: Program
    ell: int
    arity = 1

    def __post_init__(self):
        if self.mul.arity < 3:
            raise ValueError("binary bases need an explicit quer")

    def __call__(self, args):
        (g,) = args
        n = self.mul.arity
        qg = self.quer((g,))
        y = qg
        for _ in range(self.ell - 1):
            y = self.mul((qg,) + (g,) * (n - 3) + (qg, y))
        return y

    def text(self):
        return f"iterquer({self.mul.text()}, {self.quer.text()}, {self.ell})"


def _map(x, f):
    if isinstance(x, tuple):
        return tuple(_map(e, f) for e in x)
    return f(x)


def iterated_quer(mul: Program, quer: Program | None, ell: int) -> Program | None:
    """Quer program for ``Iterated(mul, ell)``, or None if none is known."""
    if quer is None:
        return None
    if ell == 1:
        return quer
    if isinstance(mul, Componentwise) and isinstance(quer, Componentwise):
        parts = [iterated_quer(m, q, ell) for m, q in zip(mul.parts, quer.parts)]
        return None if None in parts else Componentwise(tuple(parts))
    if mul.arity == 2:
        # derived from a binary group: the quer is g^(1-ell)
        if isinstance(mul, Sum):
            return Scale(1 - ell)
        if isinstance(mul, Product):
            return Power(1 - ell)
        return None
    return IteratedQuer(mul, quer, ell)


def iterate(program: Program, ell: int) -> Program:
    return program if ell == 1 else Iterated(program, ell)


def is_derived(program: Program) -> bool:
    """True when the program is declared as a repetition of a binary one."""
    if program.arity == 2:
        return True
    if isinstance(program, Iterated):
        return is_derived(program.base)
    if isinstance(program, Componentwise):
        return all(is_derived(p) for p in program.parts)
    return False
