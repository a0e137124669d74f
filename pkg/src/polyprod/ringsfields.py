"""Polyadic (m,n)-rings and fields, their classification and products."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field, replace

import numpy as np

from .carriers import FiniteCarrier, Mod, ProductCarrier, finite, modular, ratio
from .errors import ArityShapeMismatch, ClosureViolation, NoSolution, NotAField, PolyprodError
from .products import _solution_for
from .programs import Componentwise, is_derived, iterate, iterated_quer
from .structures import (EXHAUSTIVE_BUDGET, LAW_SAMPLES, AlgebraicStructure, Evidence,
                         IdentityResult, LawReport, Operation, _np_tuples, check_closure,
                         check_commutativity, check_dornte, check_solvability, check_total_associativity, evaluate,
                         find_identity, find_zero, jsonable, polyadic_power, querelement,
                         quer_program)


@dataclass(frozen=True, eq=False)
class PolyadicRing:
    """Carrier with an m-ary addition and an n-ary multiplication."""

    add: Operation
    mul: Operation
    add_quer: object = None
    mul_quer: object = None
    name: str = ""
    candidates: tuple = ()
    reports: tuple = ()
    info: dict = field(default_factory=dict)

    @property
    def carrier(self):
        return self.add.carrier

    @property
    def m(self) -> int:
        return self.add.arity

    @property
    def n(self) -> int:
        return self.mul.arity

    def additive(self) -> AlgebraicStructure:
        return AlgebraicStructure(self.add, self.add_quer, f"{self.name}/add", self.candidates)

    def multiplicative(self) -> AlgebraicStructure:
        return AlgebraicStructure(self.mul, self.mul_quer, f"{self.name}/mul", self.candidates)

    def with_reports(self, *reports) -> "PolyadicRing":
        return replace(self, reports=self.reports + tuple(reports))


def ring(add, mul, carrier, add_quer=None, mul_quer=None, name="", candidates=()) -> PolyadicRing:
    return PolyadicRing(Operation(add, carrier), Operation(mul, carrier), add_quer, mul_quer,
                        name, tuple(candidates))


# ------------------------------------------------------------ distributivity


def check_distributivity(r: PolyadicRing, *, budget: int = EXHAUSTIVE_BUDGET,
                         samples: int | None = None, seed: int = 0) -> LawReport:
    """The n relations obtained by sliding the sum through each multiplicand slot."""
    m, n = r.m, r.n
    width = m + n - 1
    relations = {}
    counter = None
    nu = r.add.finite if r.carrier.finite else None
    mu = r.mul.finite if r.carrier.finite else None
    if nu is not None and mu is not None:
        s = nu.size
        if s ** width <= budget:
            cols = nu.grid(width)
            evidence = Evidence("exhaustive", s ** width)
        else:
            count = samples or LAW_SAMPLES
            X = _np_tuples(nu, count, width, seed)
            cols = [X[:, j] for j in range(width)]
            evidence = Evidence("sampled", count, seed)
        xs, ys = cols[:m], cols[m:]
        for p in range(n):
            lhs = mu(*ys[:p], nu(*xs), *ys[p:])
            rhs = nu(*[mu(*ys[:p], x, *ys[p:]) for x in xs])
            bad = np.broadcast_to(lhs != rhs, np.broadcast(*cols).shape)
            relations[p + 1] = not bad.any()
            if bad.any() and counter is None:
                at = np.unravel_index(int(np.argmax(bad)), bad.shape)
                tup = [int(np.broadcast_to(c, bad.shape)[at]) for c in cols]
                els = r.carrier.elements
                counter = {"relation": p + 1, "sum_args": [els[i] for i in tup[:m]],
                           "other_factors": [els[i] for i in tup[m:]]}
    else:
        count = samples or LAW_SAMPLES
        rng = random.Random(seed)
        evidence = Evidence("sampled", count, seed)
        relations = {p + 1: True for p in range(n)}
        for _ in range(count):
            vals = tuple(r.carrier.draw(rng, width))
            xs, ys = vals[:m], vals[m:]
            try:
                total = evaluate(r.add, xs)
                for p in range(n):
                    if not relations[p + 1]:
                        continue
                    lhs = evaluate(r.mul, ys[:p] + (total,) + ys[p:])
                    rhs = evaluate(r.add, [evaluate(r.mul, ys[:p] + (x,) + ys[p:]) for x in xs])
                    if lhs != rhs:
                        relations[p + 1] = False
                        if counter is None:
                            counter = {"relation": p + 1, "sum_args": xs, "other_factors": ys}
            except ClosureViolation as e:
                return LawReport("distrib", False, evidence, {"closure": e.polyad},
                                 {"error": str(e)})
    return LawReport("distrib", all(relations.values()), evidence, counter,
                     {"relations": relations})


def additive_quer(r: PolyadicRing, x):
    """The additive querelement of ``x`` (``-(m-2)*x`` for plain m-ary sums)."""
    return querelement(r.additive(), x)


def _nonzero_part(r: PolyadicRing, zero) -> AlgebraicStructure:
    """The multiplicative structure on the carrier without its zero."""
    mult = r.multiplicative()
    if zero is None:
        return mult
    if not r.carrier.finite:
        raise PolyprodError("removing a zero from an infinite carrier is not supported")
    els = [e for e in r.carrier.elements if e != zero]
    if isinstance(zero, Mod) and isinstance(r.carrier, FiniteCarrier) and \
            r.carrier == modular(zero.modulus):
        star = modular(zero.modulus, exclude=[zero.residue])
    else:
        star = finite(els)
    return AlgebraicStructure(Operation(r.mul.program, star), r.mul_quer, f"{r.name}/mul*")


def check_double_dornte(r: PolyadicRing, **kw) -> LawReport:
    """Additive Dornte relations, and multiplicative ones on the nonzero part."""
    add = check_dornte(r.additive(), **kw)
    zero = find_zero(r.multiplicative(), seed=kw.get("seed", 0)).element
    try:
        star = _nonzero_part(r, zero)
        closure = check_closure(star, seed=kw.get("seed", 0))
        mul = check_dornte(star, **kw) if closure.passed else closure
    except PolyprodError as e:
        mul = LawReport("dornte", False, None, None, {"error": str(e)})
    return LawReport("double_dornte", add.passed and mul.passed, add.evidence, None,
                     {"additive": add, "multiplicative": mul})


# ------------------------------------------------------------ classification


@dataclass(frozen=True, eq=False)
class ClassificationReport:
    name: str
    m: int
    n: int
    kind: str
    mul_commutativity: str
    zero: object
    zeroless: bool
    identity: IdentityResult
    unital: bool
    division: bool
    derived: bool
    quer_symmetric: bool | None
    quer_factor: object
    reports: tuple

    @property
    def is_field(self) -> bool:
        return self.kind in ("field", "semicommutative_field")

    def report(self, law: str) -> LawReport:
        return next(r for r in self.reports if r.law == law)

    def to_dict(self):
        return {
            "name": self.name, "arity": [self.m, self.n], "kind": self.kind,
            "mul_commutativity": self.mul_commutativity,
            "zero": jsonable(self.zero), "zeroless": self.zeroless,
            "identity": self.identity.to_dict(), "unital": self.unital,
            "division": self.division, "derived": self.derived,
            "quer_symmetric": self.quer_symmetric, "quer_factor": jsonable(self.quer_factor),
            "laws": [r.to_dict() for r in self.reports],
        }


def quer_commutator(r: PolyadicRing, x):
    """``(add_quer(mul_quer(x)), mul_quer(add_quer(x)), factor)``.

    ``factor`` is the scalar ``c`` with ``lhs = c * rhs`` when there is one.
    """
    star = r.multiplicative()
    lhs = additive_quer(r, querelement(star, x))
    rhs = querelement(star, additive_quer(r, x))
    return lhs, rhs, ratio(lhs, rhs)


def _quer_symmetry(r: PolyadicRing, star: AlgebraicStructure, seed: int, count: int = 10):
    add_q = quer_program(r.additive())
    mul_q = quer_program(star)
    if add_q is None or mul_q is None:
        return None, None
    xs = list(star.carrier.elements) if star.carrier.finite else \
        star.carrier.draw(random.Random(seed), count)
    symmetric, factors = True, set()
    for x in xs:
        try:
            lhs = add_q((mul_q((x,)),))
            rhs = mul_q((add_q((x,)),))
        except (ZeroDivisionError, KeyError):
            return None, None
        symmetric = symmetric and lhs == rhs
        factors.add(ratio(lhs, rhs))
    factor = factors.pop() if len(factors) == 1 else None
    return symmetric, factor


def classify(r: PolyadicRing, *, budget: int = EXHAUSTIVE_BUDGET, samples: int | None = None,
             seed: int = 0) -> ClassificationReport:
    kw = dict(samples=samples, seed=seed)
    add = r.additive()
    mult = r.multiplicative()
    reports = [
        replace(check_closure(r.add, **kw), law="add_closure"),
        replace(check_closure(r.mul, **kw), law="mul_closure"),
    ]
    closed = all(x.passed for x in reports)
    if not closed:
        return ClassificationReport(r.name, r.m, r.n, "not_a_ring", "unknown", None, True,
                                    IdentityResult("none", None, (), False, Evidence("sampled", 0)),
                                    False, False, False, None, None, tuple(reports))
    add_assoc = replace(check_total_associativity(add, budget=budget, **kw), law="add_assoc")
    add_comm = check_commutativity(add, **kw)
    add_group = replace(check_dornte(add, budget=budget, **kw), law="add_dornte")
    mul_assoc = replace(check_total_associativity(mult, budget=budget, **kw), law="mul_assoc")
    distrib = check_distributivity(r, budget=budget, **kw)
    mul_comm = check_commutativity(mult, **kw)
    reports += [add_assoc,
                LawReport("add_comm", add_comm.commutative, add_comm.evidence, None,
                          {"failing": add_comm.failing}),
                add_group, mul_assoc, distrib,
                LawReport("mul_comm", mul_comm.commutative, mul_comm.evidence, None,
                          {"kind": mul_comm.kind, "failing": mul_comm.failing})]
    zero = find_zero(mult, **kw)
    ident = find_identity(mult, **kw)

    division = False
    star = None
    try:
        star = _nonzero_part(r, zero.element)
        if star.carrier.finite or star.quer is not None:
            closure = check_closure(star, **kw)
            if not closure.passed:
                group = closure
            elif star.carrier.finite:
                # the Dornte relations alone do not force inverses when n = 2
                group = check_solvability(star, **kw)
            else:
                group = check_dornte(star, budget=budget, **kw)
            division = group.passed
            reports.append(replace(group, law="mul_star_group"))
    except PolyprodError as e:
        reports.append(LawReport("mul_star_group", False, None, None, {"error": str(e)}))

    is_ring = all(x.passed for x in (add_assoc, add_group, mul_assoc, distrib)) and \
        add_comm.commutative
    if not is_ring:
        kind = "not_a_ring"
    elif division and mul_comm.commutative:
        kind = "field"
    elif division and mul_comm.semicommutative:
        kind = "semicommutative_field"
    elif division:
        kind = "division_ring"
    else:
        kind = "commutative_ring" if mul_comm.commutative else "ring"

    symmetric, factor = (None, None)
    if division and star is not None:
        symmetric, factor = _quer_symmetry(r, star, seed)
    return ClassificationReport(
        r.name, r.m, r.n, kind, mul_comm.kind, zero.element, zero.element is None, ident,
        ident.kind == "two_sided", division,
        is_derived(r.add.program) and is_derived(r.mul.program),
        symmetric, factor, tuple(reports))


# ------------------------------------------------------------------ products


def _componentwise_quer(rings, which):
    progs = []
    for r in rings:
        s = r.additive() if which == "add" else r.multiplicative()
        progs.append(quer_program(s))
    return Componentwise(tuple(progs)) if None not in progs else None


def ring_full_product(r1: PolyadicRing, r2: PolyadicRing, *, check: bool = True,
                      **kw) -> PolyadicRing:
    """Componentwise product of two rings of the same arity shape."""
    if (r1.m, r1.n) != (r2.m, r2.n):
        raise ArityShapeMismatch(f"shapes differ: {(r1.m, r1.n)} vs {(r2.m, r2.n)}")
    carrier = ProductCarrier((r1.carrier, r2.carrier))
    out = PolyadicRing(
        Operation(Componentwise((r1.add.program, r2.add.program)), carrier),
        Operation(Componentwise((r1.mul.program, r2.mul.program)), carrier),
        _componentwise_quer((r1, r2), "add"), _componentwise_quer((r1, r2), "mul"),
        f"{r1.name or '?'} x {r2.name or '?'}",
        tuple((a, b) for a in r1.candidates for b in r2.candidates))
    return out.with_reports(check_distributivity(out, **kw)) if check else out


def mixed_ring_ells(r1: PolyadicRing, r2: PolyadicRing, m_out: int | None = None,
                    n_out: int | None = None):
    """``(m', n', ells_add, ells_mul)``, defaulting to the smallest common arities."""
    m_out = m_out or math.lcm(r1.m - 1, r2.m - 1) + 1
    n_out = n_out or math.lcm(r1.n - 1, r2.n - 1) + 1
    return (m_out, n_out, _solution_for((r1.m, r2.m), m_out),
            _solution_for((r1.n, r2.n), n_out))


def ring_mixed_product(r1: PolyadicRing, r2: PolyadicRing, m_out: int | None = None,
                       n_out: int | None = None, *, check: bool = True, **kw) -> PolyadicRing:
    """Product of rings of different shapes, each operation iterated to a common arity."""
    m_out, n_out, l_add, l_mul = mixed_ring_ells(r1, r2, m_out, n_out)
    carrier = ProductCarrier((r1.carrier, r2.carrier))
    add = Componentwise(tuple(iterate(r.add.program, ell) for r, ell in zip((r1, r2), l_add)))
    mul = Componentwise(tuple(iterate(r.mul.program, ell) for r, ell in zip((r1, r2), l_mul)))

    def quer(which, ells):
        qs = []
        for r, ell in zip((r1, r2), ells):
            s = r.additive() if which == "add" else r.multiplicative()
            qs.append(iterated_quer(s.mult.program, quer_program(s), ell))
        return Componentwise(tuple(qs)) if None not in qs else None

    out = PolyadicRing(Operation(add, carrier), Operation(mul, carrier),
                       quer("add", l_add), quer("mul", l_mul),
                       f"{r1.name or '?'} x {r2.name or '?'} @ ({m_out},{n_out})",
                       tuple((a, b) for a in r1.candidates for b in r2.candidates),
                       info={"ells_add": l_add, "ells_mul": l_mul})
    return out.with_reports(check_distributivity(out, **kw)) if check else out


def _noninvertible(mult: AlgebraicStructure, x) -> bool:
    try:
        querelement(mult, x)
    except (NoSolution, ZeroDivisionError, ClosureViolation):
        return True
    return False


def _idempotent_witnesses(r: PolyadicRing, zeros):
    mult = r.multiplicative()
    if r.carrier.finite:
        cands = r.carrier.elements
    else:
        cands = r.candidates
    zero_double = tuple(zeros)
    out = []
    for x in cands:
        if x == zero_double or not r.carrier.contains(x):
            continue
        try:
            if polyadic_power(mult, x, 1) != x:
                continue
        except ClosureViolation:
            continue
        if _noninvertible(mult, x):
            out.append(x)
    return out


def field_product(f1: PolyadicRing, f2: PolyadicRing, **kw) -> PolyadicRing:
    """Full product of two fields; raises NotAField when the result is not one.

    A constituent with a zero always breaks the field property: pairing the
    zero of one side with an idempotent of the other gives a noninvertible
    idempotent double, which is reported as the witness.
    """
    if (f1.m, f1.n) != (f2.m, f2.n):
        raise ArityShapeMismatch(f"shapes differ: {(f1.m, f1.n)} vs {(f2.m, f2.n)}")
    c1, c2 = classify(f1, **kw), classify(f2, **kw)
    for c in (c1, c2):
        if not c.is_field:
            raise NotAField(f"{c.name or 'constituent'} is a {c.kind}, not a field",
                            reason="constituent")
    prod = ring_full_product(f1, f2, **kw)
    if not (c1.zeroless and c2.zeroless):
        zeros = (c1.zero, c2.zero)
        wit = _idempotent_witnesses(prod, zeros)
        raise NotAField("a constituent has a zero, so the product has noninvertible "
                        "idempotent doubles", witness=wit[0] if wit else None,
                        reason={"zeros": zeros, "witnesses": wit})
    mult = prod.multiplicative()
    assoc = check_total_associativity(mult, **kw)
    dornte = check_dornte(mult, **{k: v for k, v in kw.items() if k != "budget"})
    if not (assoc.passed and dornte.passed):
        raise NotAField("the product multiplication is not an n-ary group",
                        reason={"assoc": assoc, "dornte": dornte})
    return prod.with_reports(replace(assoc, law="mul_assoc"), replace(dornte, law="mul_dornte"))
