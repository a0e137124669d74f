"""Direct products: full, mixed-arity and heteromorphic (k-th power)."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .carriers import ProductCarrier, power_carrier
from .errors import (ArityMismatch, IncompatibleArities, InvalidQuiver, NoSolution,
                     NotAssociative, NotQuantized)
from .programs import Componentwise, Hetero, QuiverSpec, iterate, iterated_quer
from .engine import finite_op
from .structures import (AlgebraicStructure, Operation, _assoc_sampled_np,
                         check_total_associativity, find_identity, querelement, quer_program)

__all__ = [
    "AritySolution", "QuantRow", "QuiverSpec", "full_product", "arity_compatible",
    "mixed_product", "hetero_arity", "quantization_table", "make_quiver_postlike",
    "validate_quiver", "hetero_power", "quiver_search", "hetero_summary", "NAMED_QUIVERS",
]


def full_product(*structures: AlgebraicStructure) -> AlgebraicStructure:
    """Componentwise product of structures of one common arity."""
    arities = {s.arity for s in structures}
    if len(arities) != 1:
        raise ArityMismatch(f"full product needs equal arities, got {sorted(arities)}")
    carrier = ProductCarrier(tuple(s.carrier for s in structures))
    prog = Componentwise(tuple(s.mult.program for s in structures))
    quers = [quer_program(s) for s in structures]
    quer = Componentwise(tuple(quers)) if None not in quers else None
    name = " x ".join(s.name or "?" for s in structures)
    return AlgebraicStructure(Operation(prog, carrier), quer, name,
                              tuple(itertools.product(*(s.candidates for s in structures))))


@dataclass(frozen=True)
class AritySolution:
    """Common arity ``n_out`` reached by iterating constituent ``i`` ``ells[i]`` times.

    Only the smallest solution is ``primitive``; every larger one is an
    iterate of it.
    """

    n_out: int
    ells: tuple
    primitive: bool

    def to_dict(self):
        return {"n_out": self.n_out, "ells": list(self.ells), "primitive": self.primitive}


def arity_compatible(n1: int, n2: int, bound: int) -> list[AritySolution]:
    """All ``n' <= bound`` with ``l1*(n1-1) = l2*(n2-1) = n'-1``."""
    if n1 < 2 or n2 < 2:
        raise ValueError("arities must be at least 2")
    step = math.lcm(n1 - 1, n2 - 1)
    return [AritySolution(c + 1, (c // (n1 - 1), c // (n2 - 1)), c == step)
            for c in range(step, bound, step)]


def _solution_for(arities, n_out):
    for n in arities:
        if (n_out - 1) % (n - 1):
            raise IncompatibleArities(f"arity {n_out} is not reachable from {n}")
    return tuple((n_out - 1) // (n - 1) for n in arities)


def mixed_product(s1: AlgebraicStructure, s2: AlgebraicStructure,
                  sol: AritySolution | int | None = None) -> AlgebraicStructure:
    """Product of structures of different arities, iterated up to ``sol.n_out``."""
    if sol is None:
        sol = arity_compatible(s1.arity, s2.arity, math.lcm(s1.arity - 1, s2.arity - 1) + 2)[0]
    n_out = sol if isinstance(sol, int) else sol.n_out
    ells = _solution_for((s1.arity, s2.arity), n_out)
    if not isinstance(sol, int) and tuple(sol.ells) != ells:
        raise IncompatibleArities(f"iteration counts {sol.ells} do not match {ells}")
    parts, quers = [], []
    for s, ell in zip((s1, s2), ells):
        parts.append(iterate(s.mult.program, ell))
        quers.append(iterated_quer(s.mult.program, quer_program(s), ell))
    carrier = ProductCarrier((s1.carrier, s2.carrier))
    quer = Componentwise(tuple(quers)) if None not in quers else None
    return AlgebraicStructure(Operation(Componentwise(tuple(parts)), carrier), quer,
                              f"{s1.name or '?'} x {s2.name or '?'} @ {n_out}",
                              tuple(itertools.product(s1.candidates, s2.candidates)))


# ---------------------------------------------------------- heteromorphic


def hetero_arity(n: int, k: int, ell_id: int) -> int | None:
    """Arity of the k-th power with ``ell_id`` intact components, or None.

    ``n' = n - (n-1)*ell_id/k``; the quotient must be a positive integer
    when ``ell_id > 0`` and ``k <= (n-1)*ell_mu`` must hold.
    """
    if n < 2 or k < 1 or not 0 <= ell_id < k:
        return None
    if ell_id == 0:
        return n
    q, r = divmod((n - 1) * ell_id, k)
    if r or q < 1:
        return None
    n_out = n - q
    if not 2 <= n_out <= n or k > (n - 1) * (k - ell_id):
        return None
    return n_out


@dataclass(frozen=True)
class QuantRow:
    k: int
    ell_mu: int
    ell_id: int
    pairs: tuple  # (n, n') pairs in increasing n

    def to_dict(self):
        return {"k": self.k, "ell_mu": self.ell_mu, "ell_id": self.ell_id,
                "pairs": [list(p) for p in self.pairs]}


def quantization_table(k_max: int, n_max: int) -> list[QuantRow]:
    """Allowed ``(n, n')`` for every ``2 <= k <= k_max`` and ``1 <= ell_id < k``."""
    rows = []
    for k in range(2, k_max + 1):
        for ell_id in range(1, k):
            pairs = tuple((n, hetero_arity(n, k, ell_id)) for n in range(2, n_max + 1)
                          if hetero_arity(n, k, ell_id) is not None)
            if pairs:
                rows.append(QuantRow(k, k - ell_id, ell_id, pairs))
    return rows


def _cyclic_rows(n, k, ell_mu, n_out, stride):
    comp = [[(r * stride + j) % k + 1 for j in range(n)] for r in range(ell_mu)]
    count = {c: sum(row.count(c) for row in comp) for c in range(1, k + 1)}
    if any(v > n_out for v in count.values()):
        return None, None
    intact = [c for c in range(1, k + 1) for _ in range(n_out - count[c])]
    return comp, intact


def make_quiver_postlike(n: int, k: int, ell_id: int) -> QuiverSpec:
    """Cyclic placement: row ``r`` reads component ``(r+j) mod k`` at slot ``j``.

    Intact slots take the components left short, so that each component is
    read ``n'`` times. Arguments are then handed out per component, intact
    occurrences first and row occurrences column by column. When the unit
    stride overuses a component, rows start ``stride`` components apart for
    the smallest stride that balances.
    """
    n_out = hetero_arity(n, k, ell_id)
    if n_out is None:
        raise NotQuantized(f"no heteromorphism for n={n}, k={k}, ell_id={ell_id}")
    ell_mu = k - ell_id
    for stride in range(1, k + 1):
        comp, intact_comps = _cyclic_rows(n, k, ell_mu, n_out, stride)
        if comp is not None:
            break
    else:
        raise NotQuantized(f"no balanced cyclic placement for n={n}, k={k}, ell_id={ell_id}")
    rows = [[None] * n for _ in range(ell_mu)]
    intact = [None] * ell_id
    for c in range(1, k + 1):
        occ = [("i", t, 0) for t, ic in enumerate(intact_comps) if ic == c]
        occ += sorted((("r", r, j) for r in range(ell_mu) for j in range(n) if comp[r][j] == c),
                      key=lambda o: (o[2], o[1]))
        for arg, (kind, a, b) in enumerate(occ, start=1):
            if kind == "i":
                intact[a] = (arg, c)
            else:
                rows[a][b] = (arg, c)
    return QuiverSpec(k, n, n_out, tuple(map(tuple, rows)), tuple(intact)).validate()


def quiver_problems(q: QuiverSpec) -> list[str]:
    """Slot and arity problems of ``q``; empty when the placement is usable."""
    problems = q.problems()
    n_out = hetero_arity(q.n_in, q.k, q.ell_id)
    if n_out != q.n_out:
        problems.append(f"n'={q.n_out} is not the quantized arity {n_out} "
                        f"for n={q.n_in}, k={q.k}, ell_id={q.ell_id}")
    return problems


def validate_quiver(q: QuiverSpec) -> bool:
    """True iff every slot is used exactly once and the arities are quantized."""
    return not quiver_problems(q)


NAMED_QUIVERS = {
    # binary square of a ternary operation: the two intact-slot choices
    "square-left": QuiverSpec(2, 3, 2, (((1, 1), (1, 2), (2, 1)),), ((2, 2),)),
    "square-right": QuiverSpec(2, 3, 2, (((1, 1), (2, 2), (2, 1)),), ((1, 2),)),
    # ternary cube of a 4-ary operation, not obtained from the cyclic rule
    "cube-4ary-nonpost": QuiverSpec(3, 4, 4, (((1, 1), (2, 3), (3, 2), (4, 1)),
                                              ((1, 2), (2, 1), (3, 3), (4, 2)),
                                              ((1, 3), (2, 2), (3, 1), (4, 3)))),
}


def hetero_power(s: AlgebraicStructure, q: QuiverSpec, strict: bool = False,
                 **check) -> AlgebraicStructure:
    """The k-th power of ``s`` under placement ``q``, with its associativity report."""
    if q.n_in != s.arity:
        raise InvalidQuiver(f"quiver expects arity {q.n_in}, structure has {s.arity}")
    problems = quiver_problems(q)
    if problems:
        raise InvalidQuiver("; ".join(problems))
    op = Operation(Hetero(s.mult.program, q), power_carrier(s.carrier, q.k))
    report = check_total_associativity(op, **check)
    if strict and not report.passed:
        raise NotAssociative("placement is not totally associative", report)
    cands = tuple(itertools.product(*([s.candidates] * q.k)))
    return AlgebraicStructure(op, None, f"{s.name or '?'}^{q.k}", cands, (report,))


def hetero_summary(h: AlgebraicStructure) -> dict:
    """Identity class and querelement findings for a finite heteromorphic power."""
    ident = find_identity(h)
    out = {"identity": ident.to_dict()}
    if h.carrier.finite:
        solved, missing, const, first_missing = 0, 0, True, None
        for g in h.carrier.elements:
            try:
                x = querelement(h, g)
            except NoSolution:
                missing += 1
                first_missing = first_missing if first_missing is not None else g
                continue
            solved += 1
            const = const and len(set(x)) == 1
        out["quer"] = {"solvable": solved, "no_solution": missing,
                       "first_no_solution": first_missing,
                       "constant_tuples": const if solved else None}
    return out


# ------------------------------------------------------------ enumeration


def _candidates(n, n_out, k, ell_id, anchored, strict):
    ell_mu = k - ell_id
    slots = [(a, c) for a in range(1, n_out + 1) for c in range(1, k + 1)]

    def rows_from(r, used, rows):
        if r == ell_mu:
            rest = [x for x in slots if x not in used]
            for intact in itertools.permutations(rest):
                yield tuple(rows), intact
            return
        yield from row_from(r, used, rows, [])

    def row_from(r, used, rows, row):
        if len(row) == n:
            yield from rows_from(r + 1, used, rows + [tuple(row)])
            return
        if not row:
            opts = [(1, r + 1)] if anchored else [x for x in slots if not strict or x[0] == 1]
        else:
            prev = row[-1][0]
            if strict:
                opts = [x for x in slots if x[0] == prev + 1]
            else:
                opts = sorted((x for x in slots if x[0] >= prev),
                              key=lambda x: (0 if x[0] == prev + 1 else 1 if x[0] == prev else 2,) + x)
        for x in opts:
            if x in used:
                continue
            used.add(x)
            row.append(x)
            yield from row_from(r, used, rows, row)
            row.pop()
            used.discard(x)

    for rows, intact in rows_from(0, set(), []):
        yield QuiverSpec(k, n, n_out, rows, intact)


def _all_candidates(n, n_out, k, ell_id, anchored):
    # rows reading one argument per slot first (the only shape possible
    # when n' = n), then rows that may read one argument several times
    yield from _candidates(n, n_out, k, ell_id, anchored, True)
    for q in _candidates(n, n_out, k, ell_id, anchored, False):
        if not all(all(b[0] == a[0] + 1 for a, b in zip(r, r[1:])) and r[0][0] == 1
                   for r in q.rows):
            yield q


def quiver_search(s: AlgebraicStructure, n_out: int, k: int, ell_id: int, budget: int = 5000,
                  *, anchored: bool = True, samples: int = 2000, seed: int = 0) -> list[QuiverSpec]:
    """Associative placements among the first ``budget`` candidates.

    Candidates read their arguments in nondecreasing order within each row;
    with ``anchored`` row ``r`` also starts at component ``r+1`` of the first
    argument. Rows reading one argument per slot come first. The order is
    deterministic.
    """
    if hetero_arity(s.arity, k, ell_id) != n_out:
        raise NotQuantized(f"n'={n_out} is not reachable from n={s.arity}, k={k}, ell_id={ell_id}")
    carrier = power_carrier(s.carrier, k)
    found = []
    for count, q in enumerate(_all_candidates(s.arity, n_out, k, ell_id, anchored)):
        if count >= budget:
            break
        if q.problems():
            continue
        op = Operation(Hetero(s.mult.program, q), carrier)
        fop = finite_op(op.program, carrier, materialize=False) if carrier.finite else None
        if fop is not None:
            if not _assoc_sampled_np(fop, n_out, 128, seed).passed:
                continue
            if _assoc_sampled_np(fop, n_out, samples, seed + 1).passed:
                found.append(q)
        elif check_total_associativity(op, samples=samples, seed=seed).passed:
            found.append(q)
    return found
