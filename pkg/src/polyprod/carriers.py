"""Exact element types and the sets they live in.

Three element types cover every example we care about:

* ``Mod``: a residue class modulo ``m``;
* ``ExactScalar``: a rational number times a power of ``zeta``, the primitive
  8th root of unity ``exp(i*pi/4)``, so ``i = zeta**2`` and ``sqrt(i) = zeta``;
* ``CycShiftMatrix``: a square matrix whose only nonzero entries sit on one
  cyclically shifted diagonal.

Elements of product carriers are plain tuples.

A carrier is either finite (an ordered list of elements, which fixes the
enumeration order used by exhaustive checks), parametric (a membership
predicate plus a seeded sampler) or a product of carriers.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Sequence

from .errors import NotSamplable, PhaseMismatch, ShapeError

_PHASE_NAMES = {0: "", 1: "zeta", 2: "i", 3: "zeta^3"}


@dataclass(frozen=True)
class Mod:
    residue: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError("modulus must be positive")
        object.__setattr__(self, "residue", self.residue % self.modulus)

    def _coerce(self, other):
        if isinstance(other, Mod):
            if other.modulus != self.modulus:
                raise ValueError(f"moduli differ: {self.modulus} vs {other.modulus}")
            return other.residue
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other):
        r = self._coerce(other)
        if r is NotImplemented:
            return r
        return Mod(self.residue + r, self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        r = self._coerce(other)
        if r is NotImplemented:
            return r
        return Mod(self.residue - r, self.modulus)

    def __neg__(self):
        return Mod(-self.residue, self.modulus)

    def __mul__(self, other):
        r = self._coerce(other)
        if r is NotImplemented:
            return r
        return Mod(self.residue * r, self.modulus)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        try:
            return Mod(pow(self.residue, e, self.modulus), self.modulus)
        except ValueError:
            raise ZeroDivisionError(f"{self} is not invertible") from None

    def inverse(self):
        return self ** -1

    def __str__(self):
        return f"{self.residue} (mod {self.modulus})"


@dataclass(frozen=True)
class ExactScalar:
    """``value * zeta**phase`` with ``value`` rational.

    The phase is kept in ``0..3``; ``zeta**4 = -1`` is absorbed into the sign
    of ``value``. Zero always has phase 0, so equal numbers compare equal.
    """

    value: Fraction
    phase: int = 0

    def __post_init__(self):
        v, p = self.value, self.phase
        if type(v) is Fraction and 0 <= p < 4 and (p == 0 or v):
            return
        v = Fraction(v)
        p %= 8
        if p >= 4:
            v, p = -v, p - 4
        if v == 0:
            p = 0
        object.__setattr__(self, "value", v)
        object.__setattr__(self, "phase", p)

    @property
    def num(self) -> int:
        return self.value.numerator

    @property
    def den(self) -> int:
        return self.value.denominator

    @staticmethod
    def _lift(other):
        if isinstance(other, ExactScalar):
            return other
        if isinstance(other, (int, Fraction)):
            return ExactScalar(Fraction(other))
        return None

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return ExactScalar(self.value * o.value, self.phase + o.phase)

    __rmul__ = __mul__

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if o.value == 0:
            return self
        if self.value == 0:
            return o
        if o.phase != self.phase:
            raise PhaseMismatch(f"cannot add {self} and {o}: different rays")
        return ExactScalar(self.value + o.value, self.phase)

    __radd__ = __add__

    def __neg__(self):
        return ExactScalar(-self.value, self.phase)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def inverse(self):
        if self.value == 0:
            raise ZeroDivisionError("zero has no inverse")
        return ExactScalar(1 / self.value, -self.phase)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** -e
        return ExactScalar(self.value ** e, self.phase * e)

    def __str__(self):
        name = _PHASE_NAMES[self.phase]
        if not name:
            return str(self.value)
        if self.value == 1:
            return name
        if self.value == -1:
            return "-" + name
        return f"{name}*{self.value}" if self.value > 0 else f"-{name}*{-self.value}"


def scalar(num, den=1, phase=0) -> ExactScalar:
    return ExactScalar(Fraction(num, den), phase)


ZETA = scalar(1, 1, 1)
I = scalar(1, 1, 2)


def scalar_mul(a: ExactScalar, b: ExactScalar) -> ExactScalar:
    return a * b


def scalar_add(a: ExactScalar, b: ExactScalar) -> ExactScalar:
    """Sum of two scalars on the same ray; raises PhaseMismatch otherwise."""
    return a + b


@dataclass(frozen=True)
class CycShiftMatrix:
    """Square matrix with entry ``i`` at position ``(i, (i + shift) % size)``.

    Products of these stay in the family with shifts adding up, which is what
    makes shape preservation a clean arithmetic question.
    """

    size: int
    shift: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.size:
            raise ShapeError("need exactly one entry per row")
        object.__setattr__(self, "shift", self.shift % self.size)
        object.__setattr__(self, "entries", tuple(_as_scalar(e) for e in self.entries))

    def __add__(self, other):
        if not isinstance(other, CycShiftMatrix):
            return NotImplemented
        if (other.size, other.shift) != (self.size, self.shift):
            raise ShapeError("sum of matrices with different shapes")
        return CycShiftMatrix(self.size, self.shift,
                              tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __neg__(self):
        return CycShiftMatrix(self.size, self.shift, tuple(-a for a in self.entries))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, CycShiftMatrix):
            if other.size != self.size:
                raise ShapeError("product of matrices of different sizes")
            s = self.size
            ent = tuple(self.entries[i] * other.entries[(i + self.shift) % s] for i in range(s))
            return CycShiftMatrix(s, self.shift + other.shift, ent)
        c = ExactScalar._lift(other)
        if c is None:
            return NotImplemented
        return CycShiftMatrix(self.size, self.shift, tuple(a * c for a in self.entries))

    def __rmul__(self, other):
        c = ExactScalar._lift(other)
        if c is None:
            return NotImplemented
        return self * c

    def inverse(self):
        s, k = self.size, self.shift
        if any(e.value == 0 for e in self.entries):
            raise ZeroDivisionError("singular matrix")
        return CycShiftMatrix(s, -k, tuple(self.entries[(j - k) % s].inverse() for j in range(s)))

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** -e
        result = CycShiftMatrix(self.size, 0, (ExactScalar(1),) * self.size)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def dense(self) -> list[list[ExactScalar]]:
        rows = [[ExactScalar(0)] * self.size for _ in range(self.size)]
        for i, e in enumerate(self.entries):
            rows[i][(i + self.shift) % self.size] = e
        return rows

    def __str__(self):
        return "[" + "; ".join(" ".join(str(e) for e in row) for row in self.dense()) + "]"


def shift_matrix(*entries, shift=1) -> CycShiftMatrix:
    return CycShiftMatrix(len(entries), shift, tuple(entries))


def _as_scalar(x) -> ExactScalar:
    if isinstance(x, ExactScalar):
        return x
    return ExactScalar(Fraction(x))


def ratio(a, b):
    """The scalar ``c`` with ``a == c * b``, or None.

    Defined for scalars, shift matrices and tuples of those.
    """
    if isinstance(a, ExactScalar) and isinstance(b, ExactScalar):
        return None if b.value == 0 else a / b
    if isinstance(a, CycShiftMatrix) and isinstance(b, CycShiftMatrix):
        if (a.size, a.shift) != (b.size, b.shift):
            return None
        cs = {ratio(x, y) for x, y in zip(a.entries, b.entries)}
        return cs.pop() if len(cs) == 1 and None not in cs else None
    if isinstance(a, tuple) and isinstance(b, tuple) and len(a) == len(b):
        cs = {ratio(x, y) for x, y in zip(a, b)}
        return cs.pop() if len(cs) == 1 and None not in cs else None
    return None


def element_text(x) -> str:
    """Machine-readable form, parsed back by ``structfile.parse_element``."""
    if isinstance(x, Mod):
        return f"mod({x.residue}, {x.modulus})"
    if isinstance(x, ExactScalar):
        args = [str(x.num)]
        if x.den != 1 or x.phase:
            args.append(str(x.den))
        if x.phase:
            args.append(f"phase={x.phase}")
        return f"q({', '.join(args)})"
    if isinstance(x, CycShiftMatrix):
        ents = ", ".join(element_text(e) for e in x.entries)
        return f"shiftmat({x.size}, {x.shift}, [{ents}])"
    if isinstance(x, tuple):
        inner = ", ".join(element_text(e) for e in x)
        return f"({inner},)" if len(x) == 1 else f"({inner})"
    raise TypeError(f"no text form for {x!r}")


def element_str(x) -> str:
    """Short human-readable form used in reports."""
    if isinstance(x, Mod):
        return str(x.residue)
    if isinstance(x, tuple):
        return "(" + ", ".join(element_str(e) for e in x) + ")"
    return str(x)


# ---------------------------------------------------------------- carriers


class Carrier:
    expr: str
    finite: bool = False

    def contains(self, x) -> bool:
        raise NotImplementedError

    def draw(self, rng: random.Random, count: int) -> list:
        raise NotSamplable(f"carrier {self.expr} has no sampler")

    def __str__(self):
        return self.expr


@dataclass(frozen=True, eq=False)
class FiniteCarrier(Carrier):
    elements: tuple
    expr: str
    finite = True

    @cached_property
    def _index(self) -> dict:
        return {e: i for i, e in enumerate(self.elements)}

    @property
    def size(self) -> int:
        return len(self.elements)

    def index(self, x) -> int:
        return self._index[x]

    def contains(self, x) -> bool:
        try:
            return x in self._index
        except TypeError:
            return False

    def draw(self, rng, count):
        return [self.elements[rng.randrange(self.size)] for _ in range(count)]

    def __eq__(self, other):
        return isinstance(other, FiniteCarrier) and self.elements == other.elements

    def __hash__(self):
        return hash(self.elements)


@dataclass(frozen=True, eq=False)
class ParametricCarrier(Carrier):
    expr: str
    predicate: Callable[[object], bool]
    sampler: Callable[[random.Random], object] | None = None

    def contains(self, x) -> bool:
        try:
            return bool(self.predicate(x))
        except (TypeError, AttributeError):
            return False

    def draw(self, rng, count):
        if self.sampler is None:
            raise NotSamplable(f"carrier {self.expr} has no sampler")
        return [self.sampler(rng) for _ in range(count)]

    def __eq__(self, other):
        return isinstance(other, ParametricCarrier) and self.expr == other.expr

    def __hash__(self):
        return hash(self.expr)


@dataclass(frozen=True)
class ProductCarrier(Carrier):
    components: tuple

    @property
    def expr(self) -> str:
        return "product(" + ", ".join(c.expr for c in self.components) + ")"

    @property
    def finite(self) -> bool:
        return all(c.finite for c in self.components)

    @cached_property
    def elements(self) -> tuple:
        if not self.finite:
            raise TypeError("infinite product carrier has no enumeration")
        return tuple(itertools.product(*(c.elements for c in self.components)))

    @property
    def size(self) -> int:
        return math.prod(c.size for c in self.components)

    @cached_property
    def _weights(self) -> tuple:
        sizes = [c.size for c in self.components]
        return tuple(math.prod(sizes[i + 1:]) for i in range(len(sizes)))

    def index(self, x) -> int:
        return sum(c.index(e) * w for c, e, w in zip(self.components, x, self._weights))

    def contains(self, x) -> bool:
        return (isinstance(x, tuple) and len(x) == len(self.components)
                and all(c.contains(e) for c, e in zip(self.components, x)))

    def draw(self, rng, count):
        cols = [c.draw(rng, count) for c in self.components]
        return list(zip(*cols))


def contains(c: Carrier, x) -> bool:
    return c.contains(x)


def sample(c: Carrier, seed: int, count: int) -> list:
    """``count`` elements of ``c``, deterministic in ``seed``."""
    return c.draw(random.Random(seed), count)


def power_carrier(c: Carrier, k: int) -> ProductCarrier:
    return ProductCarrier((c,) * k)


# ------------------------------------------------------------ families

DEFAULT_BOUND = 50


def _kw(bound):
    return "" if bound == DEFAULT_BOUND else f"bound={bound}"


def modular(modulus: int, exclude: Sequence[int] = ()) -> FiniteCarrier:
    excl = sorted({r % modulus for r in exclude})
    elems = tuple(Mod(r, modulus) for r in range(modulus) if r not in excl)
    expr = f"modular({modulus})" if not excl else f"modular({modulus}, exclude={excl})"
    return FiniteCarrier(elems, expr)


def finite(elements: Sequence) -> FiniteCarrier:
    elems = tuple(elements)
    if len(set(elems)) != len(elems):
        raise ValueError("finite carrier lists an element twice")
    return FiniteCarrier(elems, "finite([" + ", ".join(element_text(e) for e in elems) + "])")


def _nonzero_int(rng, bound):
    while True:
        v = rng.randint(-bound, bound)
        if v:
            return v


def _is_scalar(x, phase=None) -> bool:
    return isinstance(x, ExactScalar) and (phase is None or x.phase == phase)


def _odd(n: int) -> bool:
    return n % 2 == 1


def rationals(bound: int = DEFAULT_BOUND) -> ParametricCarrier:
    """Nonzero rationals."""
    return ParametricCarrier(
        _call("rationals", _kw(bound)),
        lambda x: _is_scalar(x, 0) and x.value != 0,
        lambda r: scalar(_nonzero_int(r, bound), _nonzero_int(r, bound)))


def imag_rationals(bound: int = DEFAULT_BOUND) -> ParametricCarrier:
    """Nonzero purely imaginary rationals."""
    return ParametricCarrier(
        _call("imag_rationals", _kw(bound)),
        lambda x: _is_scalar(x, 2) and x.value != 0,
        lambda r: scalar(_nonzero_int(r, bound), _nonzero_int(r, bound), 2))


def imag_integers(bound: int = DEFAULT_BOUND) -> ParametricCarrier:
    """Purely imaginary integers, zero included."""
    return ParametricCarrier(
        _call("imag_integers", _kw(bound)),
        lambda x: _is_scalar(x) and x.den == 1 and (x.phase == 2 or x.value == 0),
        lambda r: scalar(r.randint(-bound, bound), 1, 2))


def imag_odd(bound: int = DEFAULT_BOUND) -> ParametricCarrier:
    """``i*a/b`` with ``a`` and ``b`` odd."""
    def sampler(r):
        return scalar(2 * r.randint(-bound, bound) + 1, 2 * r.randint(-bound, bound) + 1, 2)
    return ParametricCarrier(
        _call("imag_odd", _kw(bound)),
        lambda x: _is_scalar(x, 2) and _odd(x.num) and _odd(x.den),
        sampler)


def residue_class(modulus: int, residue: int, bound: int = DEFAULT_BOUND) -> ParametricCarrier:
    """Integers ``modulus*l + residue``."""
    args = [str(modulus), str(residue)] + ([_kw(bound)] if _kw(bound) else [])
    return ParametricCarrier(
        f"residue_class({', '.join(args)})",
        lambda x: _is_scalar(x, 0) and x.den == 1 and x.num % modulus == residue % modulus,
        lambda r: scalar(modulus * r.randint(-bound, bound) + residue))


def _frac_1mod4(x: ExactScalar) -> bool:
    # a/b reduced with both odd and a = b (mod 4); equivalently (4r+1)/(4s+1)
    # after moving signs, and also equal to the set (4k+3)/(4l+3)
    return _odd(x.num) and _odd(x.den) and (x.num - x.den) % 4 == 0


def _sample_frac_1mod4(r, bound):
    a = 4 * r.randint(-bound, bound) + 1
    b = 4 * r.randint(-bound, bound) + 1
    return Fraction(a, b)


def sqrt_i_odd(bound: int = DEFAULT_BOUND) -> ParametricCarrier:
    """``zeta*a/b`` with ``a`` and ``b`` odd, closed under 5-ary sums and products."""
    def sampler(r):
        v = _sample_frac_1mod4(r, bound)
        return ExactScalar(v if r.random() < 0.5 else -v, 1)
    return ParametricCarrier(
        _call("sqrt_i_odd", _kw(bound)),
        lambda x: _is_scalar(x, 1) and _odd(x.num) and _odd(x.den),
        sampler)


def sqrt_i_1mod4(bound: int = DEFAULT_BOUND) -> ParametricCarrier:
    """``zeta*(4r+1)/(4s+1)`` taken literally; not closed under 5-ary products."""
    return ParametricCarrier(
        _call("sqrt_i_1mod4", _kw(bound)),
        lambda x: _is_scalar(x, 1) and _frac_1mod4(x),
        lambda r: ExactScalar(_sample_frac_1mod4(r, bound), 1))


_ENTRY_FORMS = {
    "int": (lambda e: e.phase == 0 and e.den == 1,
            lambda r, b: Fraction(r.randint(-b, b))),
    "nonzero": (lambda e: e.phase == 0 and e.value != 0,
                lambda r, b: Fraction(_nonzero_int(r, b), _nonzero_int(r, b))),
    "4k+3": (lambda e: e.phase == 0 and e.den == 1 and e.num % 4 == 3,
             lambda r, b: Fraction(4 * r.randint(-b, b) + 3)),
    "frac43": (lambda e: e.phase == 0 and _frac_1mod4(e),
               lambda r, b: Fraction(4 * r.randint(-b, b) + 3, 4 * r.randint(-b, b) + 3)),
}


def shift_matrices(size: int, form: str = "int", bound: int = DEFAULT_BOUND) -> ParametricCarrier:
    """Matrices with one cyclic superdiagonal whose entries all have ``form``.

    ``int``: any integers; ``nonzero``: nonzero rationals; ``4k+3``: integers
    congruent to 3 mod 4; ``frac43``: ratios ``(4k+3)/(4l+3)``.
    """
    if form not in _ENTRY_FORMS:
        raise ValueError(f"unknown entry form {form!r}")
    ok, draw = _ENTRY_FORMS[form]
    args = [str(size), repr(form)] + ([_kw(bound)] if _kw(bound) else [])

    def pred(x):
        return (isinstance(x, CycShiftMatrix) and x.size == size and x.shift == 1 % size
                and all(ok(e) for e in x.entries))

    return ParametricCarrier(
        f"shift_matrices({', '.join(args)})", pred,
        lambda r: CycShiftMatrix(size, 1, tuple(ExactScalar(draw(r, bound)) for _ in range(size))))


def _call(name, *args):
    return f"{name}({', '.join(a for a in args if a)})"


CARRIER_FAMILIES = {
    "modular": modular,
    "finite": finite,
    "rationals": rationals,
    "imag_rationals": imag_rationals,
    "imag_integers": imag_integers,
    "imag_odd": imag_odd,
    "residue_class": residue_class,
    "sqrt_i_odd": sqrt_i_odd,
    "sqrt_i_1mod4": sqrt_i_1mod4,
    "shift_matrices": shift_matrices,
}
