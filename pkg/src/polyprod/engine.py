"""Vectorised evaluation of programs on finite carriers.

Elements are replaced by their indices in the carrier enumeration, and a
program becomes a function of integer arrays that broadcasts like any numpy
ufunc. Small operations are materialised as Cayley tables; larger ones are
evaluated through their structure (componentwise, iterated, heteromorphic)
so that checks on big product carriers never need the full table.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from .carriers import FiniteCarrier, Mod, ProductCarrier
from .errors import ClosureViolation
from .programs import (Alternating, Componentwise, Hetero, Iterated, Linear, Product, Sum,
                       Table)

TABLE_CAP = 2_000_000
PY_TABLE_CAP = 250_000


def _dtype(size):
    return np.int16 if size < 2 ** 15 else np.int32


class FiniteOp:
    """A program bound to a finite carrier, evaluated on index arrays."""

    def __init__(self, program, carrier, f=None, table=None):
        self.program = program
        self.carrier = carrier
        self.size = carrier.size
        self.arity = program.arity
        self._f = f
        self.table = table

    def __call__(self, *idx):
        if self.table is not None:
            return self.table[idx]
        out = self._f(idx)
        if out.size and out.min() < 0:
            _raise_closure(self, idx, out)
        return out

    def grid(self, n=None):
        """Open index grids for an ``n``-dimensional broadcast."""
        n = self.arity if n is None else n
        return [np.arange(self.size).reshape([-1 if i == j else 1 for i in range(n)])
                for j in range(n)]


def _raise_closure(fop, idx, out):
    arrays = np.broadcast_arrays(*idx, out)
    pos = np.unravel_index(int(np.argmin(arrays[-1])), arrays[-1].shape)
    polyad = tuple(fop.carrier.elements[int(a[pos])] for a in arrays[:-1])
    raise ClosureViolation(f"{fop.program.text()} leaves the carrier on {polyad}", polyad)


def finite_op(program, carrier, materialize: bool = True) -> FiniteOp | None:
    """Bind ``program`` to ``carrier`` or return None if that is infeasible."""
    if not carrier.finite:
        return None
    s, n = carrier.size, program.arity
    f = _vectorize(program, carrier)
    entries = s ** n
    if f is not None:
        fop = FiniteOp(program, carrier, f=f)
        if materialize and entries <= TABLE_CAP:
            full = np.broadcast_to(fop(*fop.grid()), (s,) * n)
            fop.table = np.ascontiguousarray(full, dtype=_dtype(s))
        return fop
    if entries <= PY_TABLE_CAP:
        return FiniteOp(program, carrier, table=_python_table(program, carrier))
    return None


def _python_table(program, carrier):
    s, n = carrier.size, program.arity
    els = carrier.elements
    out = np.empty(s ** n, dtype=_dtype(s))
    for flat, idx in enumerate(itertools.product(range(s), repeat=n)):
        args = tuple(els[i] for i in idx)
        v = program(args)
        if not carrier.contains(v):
            raise ClosureViolation(f"{program.text()} leaves the carrier on {args}", args, v)
        out[flat] = carrier.index(v)
    return out.reshape((s,) * n)


def _modular_arrays(carrier):
    els = carrier.elements
    if not isinstance(carrier, FiniteCarrier) or not els:
        return None
    if not all(isinstance(e, Mod) for e in els):
        return None
    m = els[0].modulus
    if any(e.modulus != m for e in els):
        return None
    res = np.array([e.residue for e in els], dtype=np.int64)
    look = np.full(m, -1, dtype=np.int64)
    look[res] = np.arange(len(els))
    inv = np.full(m, -1, dtype=np.int64)
    for r in range(m):
        if math.gcd(r, m) == 1:
            inv[r] = pow(r, -1, m)
    return m, res, look, inv


def _vectorize(program, carrier):
    if isinstance(program, Table):
        if tuple(program.elements) != tuple(carrier.elements):
            return None
        t = np.asarray(program.values, dtype=np.int64).reshape((len(program.elements),) * program.n)
        return lambda idx: t[tuple(idx)]

    if isinstance(program, (Sum, Product, Linear, Alternating)):
        mods = _modular_arrays(carrier)
        if mods is None:
            return None
        m, res, look, inv = mods
        return _modular_kernel(program, m, res, look, inv)

    if isinstance(program, Iterated):
        base = finite_op(program.base, carrier)
        if base is None:
            return None
        n = program.base.arity

        def f(idx):
            acc = base(*idx[:n])
            for j in range(n, len(idx), n - 1):
                acc = base(acc, *idx[j:j + n - 1])
            return acc
        return f

    if isinstance(program, Componentwise) and isinstance(carrier, ProductCarrier):
        comps = carrier.components
        if len(comps) != len(program.parts):
            return None
        parts = [finite_op(p, c) for p, c in zip(program.parts, comps)]
        if any(p is None for p in parts):
            return None
        sizes = [c.size for c in comps]
        weights = [math.prod(sizes[i + 1:]) for i in range(len(sizes))]

        def f(idx):
            out = 0
            for part, s, w in zip(parts, sizes, weights):
                out = out + part(*[(a // w) % s for a in idx]).astype(np.int64) * w
            return out
        return f

    if isinstance(program, Hetero) and isinstance(carrier, ProductCarrier):
        comps = carrier.components
        q = program.quiver
        if len(comps) != q.k or len(set(comps)) != 1:
            return None
        base = finite_op(program.base, comps[0])
        if base is None:
            return None
        s = comps[0].size
        weights = [s ** (q.k - 1 - c) for c in range(q.k)]

        def f(idx):
            def digit(a, c):
                return (idx[a - 1] // weights[c - 1]) % s
            out = 0
            for r, row in enumerate(q.rows):
                out = out + base(*[digit(a, c) for a, c in row]).astype(np.int64) * weights[r]
            for t, (a, c) in enumerate(q.intact, start=q.ell_mu):
                out = out + digit(a, c) * weights[t]
            return out
        return f

    return None


def _modular_kernel(program, m, res, look, inv):
    def f(idx):
        vals = [res[a] for a in idx]
        if isinstance(program, Sum):
            acc = vals[0]
            for v in vals[1:]:
                acc = (acc + v) % m
        elif isinstance(program, Product):
            acc = vals[0]
            for v in vals[1:]:
                acc = (acc * v) % m
        elif isinstance(program, Linear):
            acc = vals[0] * program.coeffs[0]
            for c, v in zip(program.coeffs[1:], vals[1:]):
                acc = (acc + c * v) % m
            acc = (acc + program.const) % m
        else:
            acc = vals[0]
            for j, v in enumerate(vals[1:], start=1):
                if program.additive:
                    acc = (acc - v) % m if j % 2 else (acc + v) % m
                else:
                    w = inv[v] if j % 2 else v
                    acc = np.where(w < 0, -1, (acc * w) % m)
                    if (acc < 0).any():
                        return np.where(acc < 0, -1, look[np.maximum(acc, 0)])
        return look[acc % m]
    return f
