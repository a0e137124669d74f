"""Named example structures.

Infinite carriers are realised exactly: the real line by the nonzero
rationals, the imaginary line by nonzero imaginary rationals. Samplers draw
integer parameters with absolute value at most 50 unless ``bound`` says
otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .carriers import (DEFAULT_BOUND, imag_integers, imag_odd, imag_rationals,
                       modular, rationals, residue_class, scalar, shift_matrices, shift_matrix,
                       sqrt_i_odd)
from .errors import UnknownEntry
from .products import NAMED_QUIVERS
from .programs import Alternating, Iterated, Power, Product, Scale, Sum
from .ringsfields import PolyadicRing, ring
from .structures import AlgebraicStructure, structure


@dataclass(frozen=True)
class Entry:
    name: str
    summary: str
    build: Callable[[int], object]
    expected: dict


def _unit_shifts():
    # +P and -P; which of them lies in a given carrier depends on its entry form
    return (shift_matrix(1, 1, 1, 1), shift_matrix(-1, -1, -1, -1))


def _ternary_ir(bound):
    return structure(Product(3), imag_rationals(bound), Power(-1), "ternary-iR-group",
                     (scalar(1, 1, 2), scalar(-1, 1, 2)))


def _ternary_conjugate(bound):
    return structure(Alternating(3), rationals(bound), Power(1), "ternary-conjugate-group",
                     (scalar(1), scalar(-1), scalar(2)))


def _ring_23_iz(bound):
    # the triple product of imaginary integers: i*a * i*b * i*c = -i*abc
    return ring(Sum(2), Product(3), imag_integers(bound), Scale(0), None, "ring-23-iZ",
                (scalar(0), scalar(1, 1, 2), scalar(-1, 1, 2)))


def _ring_23_adiag(bound):
    return ring(Sum(2), Product(3), shift_matrices(2, "int", bound), Scale(0), None,
                "ring-23-adiag",
                (shift_matrix(0, 0), shift_matrix(1, 1), shift_matrix(-1, -1), shift_matrix(1, -1)))


def _ring_93(bound):
    return ring(Sum(9), Product(3), residue_class(8, 7, bound), Scale(-7), None, "ring-93-8l7",
                (scalar(0), scalar(1), scalar(-1), scalar(7)))


def _ring_55_matrix43(bound):
    return ring(Sum(5), Product(5), shift_matrices(4, "4k+3", bound), Scale(-3), None,
                "ring-55-matrix43", _unit_shifts())


def _field_33(bound):
    return ring(Sum(3), Product(3), imag_odd(bound), Scale(-1), Power(-1), "field-33-iodd",
                (scalar(1, 1, 2), scalar(-1, 1, 2)))


def _field_55_matrix(bound):
    return ring(Sum(5), Product(5), shift_matrices(4, "frac43", bound), Scale(-3), Power(-3),
                "field-55-matrix", _unit_shifts())


def _field_55_sqrti(bound):
    return ring(Sum(5), Product(5), sqrt_i_odd(bound), Scale(-3), Power(-3), "field-55-sqrti",
                (scalar(1, 1, 1), scalar(-1, 1, 1)))


def _quiver(name):
    return lambda bound: NAMED_QUIVERS[name]


CATALOG: dict[str, Entry] = {e.name: e for e in [
    Entry("ternary-iR-group", "triple product on nonzero imaginary rationals", _ternary_ir,
          {"kind": "group", "quer": "1/x", "commutative": True}),
    Entry("ternary-conjugate-group", "g1*g2^-1*g3 on nonzero rationals", _ternary_conjugate,
          {"kind": "group", "quer": "x", "commutative": False, "semicommutative": True}),
    Entry("ring-23-iZ", "(2,3)-ring of imaginary integers", _ring_23_iz,
          {"kind": "commutative_ring", "zeroless": False, "unital": False, "derived": False}),
    Entry("ring-23-adiag", "(2,3)-ring of 2x2 antidiagonal integer matrices", _ring_23_adiag,
          {"kind": "ring", "zeroless": False, "unital": True, "derived": False}),
    Entry("ring-93-8l7", "(9,3)-ring of integers 8l+7", _ring_93,
          {"kind": "commutative_ring", "zeroless": True, "unital": True, "derived": False}),
    Entry("ring-55-matrix43", "(5,5)-ring of 4x4 shift matrices with entries 4k+3",
          _ring_55_matrix43,
          {"kind": "ring", "zeroless": True, "unital": True, "derived": False}),
    Entry("field-33-iodd", "(3,3)-field of i*a/b with a, b odd", _field_33,
          {"kind": "field", "zeroless": True, "unital": False, "derived": False,
           "quer_symmetric": True}),
    Entry("field-55-matrix", "(5,5)-field of 4x4 shift matrices with entries (4k+3)/(4l+3)",
          _field_55_matrix,
          {"kind": "semicommutative_field", "zeroless": True, "unital": True, "derived": False,
           "quer_symmetric": False, "quer_factor": 81}),
    Entry("field-55-sqrti", "(5,5)-field of sqrt(i)*a/b with a, b odd", _field_55_sqrti,
          {"kind": "field", "zeroless": True, "unital": False, "derived": False,
           "quer_symmetric": False, "quer_factor": 81}),
    Entry("quiver-4ary-nonpost", "non-cyclic associative placement for the cube of a 4-ary "
          "operation", _quiver("cube-4ary-nonpost"), {"kind": "quiver"}),
    Entry("quiver-square-left", "square of a ternary operation, intact second component of "
          "the second argument", _quiver("square-left"), {"kind": "quiver"}),
    Entry("quiver-square-right", "square of a ternary operation, intact second component of "
          "the first argument", _quiver("square-right"), {"kind": "quiver"}),
]}


def catalog_names() -> list[str]:
    return list(CATALOG)


def catalog_get(name: str, bound: int = DEFAULT_BOUND):
    """Build the named structure, ring or quiver."""
    try:
        entry = CATALOG[name]
    except KeyError:
        raise UnknownEntry(f"unknown catalog entry {name!r}; known: {', '.join(CATALOG)}") from None
    return entry.build(bound)


def derived_group_zm(modulus: int, arity: int) -> AlgebraicStructure:
    """``Z_m`` under the ``arity``-ary sum, declared as an iterated binary sum."""
    if arity < 2 or modulus < 1:
        raise ValueError("need arity >= 2 and modulus >= 1")
    prog = Sum(2) if arity == 2 else Iterated(Sum(2), arity - 1)
    return structure(prog, modular(modulus), Scale(2 - arity), f"Z{modulus}-derived-{arity}")


def sum_group_zm(modulus: int, arity: int) -> AlgebraicStructure:
    """``Z_m`` under a plain ``arity``-ary sum."""
    return structure(Sum(arity), modular(modulus), Scale(2 - arity), f"Z{modulus}-sum-{arity}")


def field_zp(p: int) -> PolyadicRing:
    """The binary field ``Z_p`` as a (2,2)-ring."""
    return ring(Sum(2), Product(2), modular(p), Scale(0), None, f"Z{p}")


__all__ = ["CATALOG", "Entry", "catalog_get", "catalog_names", "derived_group_zm",
           "sum_group_zm", "field_zp"]
