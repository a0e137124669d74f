import itertools

import pytest

from oracles import first_assoc_failure
from polyprod.carriers import Mod, ProductCarrier, modular, scalar
from polyprod.errors import ArityMismatch, IncompatibleArities, InvalidQuiver, NotAssociative, \
    NotQuantized
from polyprod.exemplars import catalog_get, derived_group_zm, sum_group_zm
from polyprod.products import (NAMED_QUIVERS, AritySolution, QuiverSpec, arity_compatible,
                               full_product, hetero_arity, hetero_power, hetero_summary,
                               make_quiver_postlike, mixed_product, quantization_table,
                               quiver_search, validate_quiver)
from polyprod.programs import Linear, Sum
from polyprod.structures import (check_dornte, check_total_associativity, evaluate, find_identity,
                                 querelement, structure)


def slots(*rows):
    """Rows written as ``"1.1 2.2 1.3"``: component ``c`` of argument ``a`` is ``c.a``."""
    return tuple(tuple(tuple(int(x) for x in s.split(".")[::-1]) for s in r.split()) for r in rows)


# the placements displayed in the worked examples, as (argument, component) slots
DISPLAYED = {
    (3, 2, 0): (slots("1.1 2.2 1.3", "2.1 1.2 2.3"), ()),
    (4, 3, 0): (slots("1.1 2.2 3.3 1.4", "2.1 3.2 1.3 2.4", "3.1 1.2 2.3 3.4"), ()),
    (4, 3, 1): (slots("1.1 2.2 3.3 1.3", "2.1 3.2 1.2 2.3"), slots("3.1")[0]),
}
NONPOST = slots("1.1 3.2 2.3 1.4", "2.1 1.2 3.3 2.4", "3.1 2.2 1.3 3.4")
SQUARE_LEFT = (slots("1.1 2.1 1.2"), slots("2.2")[0])
SQUARE_RIGHT = (slots("1.1 2.2 1.2"), slots("2.1")[0])


class TestFullProduct:
    def test_iR_times_conjugate_group(self):
        p = full_product(catalog_get("ternary-iR-group"), catalog_get("ternary-conjugate-group"))
        assert p.arity == 3
        g = (scalar(2, 3, 2), scalar(5, 7))
        assert querelement(p, g) == (scalar(-3, 2, 2), scalar(5, 7))
        # the iR quer 1/g: (i*2/3)^2 * x = i*2/3 forces x = 1/(i*2/3) = -i*3/2
        assert evaluate(p.mult, (g, g, querelement(p, g))) == g
        assert check_total_associativity(p).passed
        assert check_dornte(p).passed
        assert find_identity(p).kind == "none"

    def test_z3_times_z5(self):
        p = full_product(sum_group_zm(3, 3), sum_group_zm(5, 3))
        assert p.carrier.size == 15
        r = check_total_associativity(p)
        assert r.passed and r.evidence.level == "exhaustive" and r.evidence.count == 15 ** 5

    def test_single_constituent(self):
        s = sum_group_zm(5, 3)
        p = full_product(s)
        for a, b, c in itertools.product(range(5), repeat=3):
            x = evaluate(p.mult, ((Mod(a, 5),), (Mod(b, 5),), (Mod(c, 5),)))
            assert x == (evaluate(s.mult, (Mod(a, 5), Mod(b, 5), Mod(c, 5))),)

    def test_arity_mismatch(self):
        with pytest.raises(ArityMismatch):
            full_product(sum_group_zm(3, 3), sum_group_zm(3, 4))


class TestArityCompatible:
    def test_four_and_five(self):
        got = arity_compatible(4, 5, 40)
        assert [s.n_out for s in got] == [13, 25, 37]
        assert [s.ells for s in got] == [(4, 3), (8, 6), (12, 9)]
        assert [s.primitive for s in got] == [True, False, False]

    def test_equal_arities(self):
        assert [(s.n_out, s.ells) for s in arity_compatible(3, 3, 6)] == [(3, (1, 1)), (5, (2, 2))]

    def test_three_and_four(self):
        assert [(s.n_out, s.ells) for s in arity_compatible(3, 4, 8)] == [(7, (3, 2))]

    def test_against_brute_force(self):
        for n1, n2 in itertools.product(range(2, 7), repeat=2):
            brute = [n for n in range(2, 31)
                     if (n - 1) % (n1 - 1) == 0 and (n - 1) % (n2 - 1) == 0]
            assert [s.n_out for s in arity_compatible(n1, n2, 30)] == brute


class TestMixedProduct:
    def test_13_ary(self):
        s3, s5 = derived_group_zm(3, 4), derived_group_zm(5, 5)
        sol = arity_compatible(4, 5, 14)[0]
        p = mixed_product(s3, s5, sol)
        assert p.arity == 13
        xs = [(Mod(i % 3, 3), Mod((2 * i) % 5, 5)) for i in range(13)]
        expect = (Mod(sum(i % 3 for i in range(13)), 3), Mod(sum(2 * i % 5 for i in range(13)), 5))
        assert evaluate(p.mult, tuple(xs)) == expect
        r = check_total_associativity(p)
        assert r.passed and r.evidence.level == "sampled"
        assert check_dornte(p).passed

    def test_equal_arities_match_full_product(self):
        a, b = sum_group_zm(3, 3), sum_group_zm(5, 3)
        m = mixed_product(a, b, AritySolution(3, (1, 1), True))
        f = full_product(a, b)
        for xs in itertools.product(f.carrier.elements, repeat=3):
            assert evaluate(m.mult, xs) == evaluate(f.mult, xs)

    def test_default_solution_is_primitive(self):
        assert mixed_product(derived_group_zm(3, 4), derived_group_zm(5, 5)).arity == 13

    def test_incompatible(self):
        with pytest.raises(IncompatibleArities):
            mixed_product(sum_group_zm(3, 3), sum_group_zm(3, 4), 6)


class TestQuantization:
    @pytest.mark.parametrize("n,k,ell,expect", [(3, 2, 1, 2), (4, 3, 1, 3), (4, 2, 1, None),
                                                (5, 4, 3, 2), (7, 4, 2, 4), (3, 2, 0, 3)])
    def test_hetero_arity(self, n, k, ell, expect):
        assert hetero_arity(n, k, ell) == expect

    def test_rows(self):
        rows = {(r.k, r.ell_id): r.pairs for r in quantization_table(4, 13)}
        assert rows[(2, 1)][:3] == ((3, 2), (5, 3), (7, 4))
        assert rows[(4, 2)][:3] == ((3, 2), (5, 3), (7, 4))
        assert rows[(4, 3)][:3] == ((5, 2), (9, 3), (13, 4))
        assert rows[(3, 1)][:2] == ((4, 3), (7, 5))

    def test_not_injective(self):
        rows = [r for r in quantization_table(4, 13) if r.k == 4]
        seen = {}
        overlap = False
        for r in rows:
            for n, _ in r.pairs:
                overlap = overlap or (n in seen and seen[n] != r.ell_id)
                seen.setdefault(n, r.ell_id)
        assert overlap

    def test_formula_oracle(self):
        for k in range(2, 7):
            for ell_id in range(1, k):
                for n in range(2, 14):
                    # ell_mu * n + ell_id = k * n', with n' >= 2
                    ell_mu = k - ell_id
                    num = ell_mu * n + ell_id
                    expect = num // k if num % k == 0 and num // k >= 2 and k <= (n - 1) * ell_mu \
                        else None
                    assert hetero_arity(n, k, ell_id) == expect


class TestPlacements:
    @pytest.mark.parametrize("shape", sorted(DISPLAYED))
    def test_postlike_matches_displayed(self, shape):
        q = make_quiver_postlike(*shape)
        assert (q.rows, q.intact) == DISPLAYED[shape]

    def test_square_variants(self):
        assert (NAMED_QUIVERS["square-left"].rows, NAMED_QUIVERS["square-left"].intact) == SQUARE_LEFT
        q = make_quiver_postlike(3, 2, 1)
        assert (q.rows, q.intact) == SQUARE_RIGHT

    def test_nonpost_cube(self):
        assert NAMED_QUIVERS["cube-4ary-nonpost"].rows == NONPOST

    def test_not_quantized(self):
        with pytest.raises(NotQuantized):
            make_quiver_postlike(4, 2, 1)

    def test_validate(self):
        assert validate_quiver(make_quiver_postlike(3, 2, 0))
        dup = QuiverSpec(2, 3, 3, slots("1.1 2.2 1.3", "2.1 1.2 1.3"))
        assert not validate_quiver(dup)
        short = QuiverSpec(2, 3, 2, slots("1.1 2.2 1.2"), ())
        assert not validate_quiver(short)

    def test_hetero_power_rejects_invalid(self):
        with pytest.raises(InvalidQuiver):
            hetero_power(derived_group_zm(5, 3), QuiverSpec(2, 3, 3, slots("1.1 2.2 1.3",
                                                                            "2.1 1.2 1.3")))


class TestHeteroPower:
    def test_binary_square_is_semigroup(self):
        h = hetero_power(derived_group_zm(5, 3), make_quiver_postlike(3, 2, 1))
        assert h.arity == 2 and h.reports[0].passed
        assert find_identity(h).kind == "right_only"
        assert find_identity(hetero_power(derived_group_zm(5, 3),
                                          NAMED_QUIVERS["square-left"])).kind == "left_only"

    def test_intact_case_has_unsolvable_quer(self):
        s = hetero_summary(hetero_power(derived_group_zm(5, 3), make_quiver_postlike(3, 2, 1)))
        assert s["quer"]["no_solution"] > 0

    def test_intactless_ternary_square_is_group(self):
        h = hetero_power(derived_group_zm(5, 3), make_quiver_postlike(3, 2, 0))
        assert h.reports[0].passed and h.reports[0].evidence.level == "exhaustive"
        assert check_dornte(h).passed
        # quer of the square, by brute force: the unique x with mu[g, g, x] = g
        for g in h.carrier.elements:
            sols = [x for x in h.carrier.elements if evaluate(h.mult, (g, g, x)) == g]
            assert sols == [querelement(h, g)]

    def test_intactless_quer_works_in_every_position(self):
        h = hetero_power(sum_group_zm(5, 3), make_quiver_postlike(3, 2, 0))
        for g in h.carrier.elements:
            x = querelement(h, g)
            # components swap and negate: mu[a, b, -b] = a and mu[b, a, -a] = b
            assert x == (-g[1], -g[0])
            for polyad in ((g, g, x), (g, x, g), (x, g, g)):
                assert evaluate(h.mult, polyad) == g

    def test_cube_of_4ary_has_right_identity_only(self):
        h = hetero_power(derived_group_zm(3, 4), make_quiver_postlike(4, 3, 1))
        assert h.arity == 3 and h.reports[0].passed
        assert find_identity(h).kind == "right_only"

    @pytest.mark.parametrize("name", ["cube-4ary-nonpost"])
    def test_nonpost_cube_associative(self, name):
        h = hetero_power(derived_group_zm(2, 4), NAMED_QUIVERS[name])
        assert h.reports[0].passed and h.reports[0].evidence.level == "exhaustive"

    def test_brute_force_agrees_on_square(self):
        s = derived_group_zm(3, 3)
        h = hetero_power(s, NAMED_QUIVERS["square-left"])
        els = h.carrier.elements

        def f(a, b):
            return els.index(evaluate(h.mult, (els[a], els[b])))

        assert first_assoc_failure(f, len(els), 2) is None

    def test_strict_rejects_non_associative(self):
        # every placement over an abelian group is associative, so skew the base
        skewed = structure(Linear((1, 2, 1)), modular(5))
        h = hetero_power(skewed, make_quiver_postlike(3, 2, 0))
        assert not h.reports[0].passed
        with pytest.raises(NotAssociative):
            hetero_power(skewed, make_quiver_postlike(3, 2, 0), strict=True)


class TestQuiverSearch:
    def test_binary_square_variants(self):
        found = quiver_search(sum_group_zm(3, 3), 2, 2, 1, budget=200)
        pairs = {(q.rows, q.intact) for q in found}
        assert SQUARE_LEFT in pairs and SQUARE_RIGHT in pairs

    def test_cube_variants(self):
        found = quiver_search(derived_group_zm(3, 4), 4, 3, 0, budget=5000)
        rows = {q.rows for q in found}
        assert DISPLAYED[(4, 3, 0)][0] in rows and NONPOST in rows

    def test_budget_zero(self):
        assert quiver_search(sum_group_zm(3, 3), 2, 2, 1, budget=0) == []

    def test_deterministic(self):
        a = quiver_search(sum_group_zm(3, 3), 2, 2, 1, budget=100)
        assert a == quiver_search(sum_group_zm(3, 3), 2, 2, 1, budget=100)

    def test_unreachable(self):
        with pytest.raises(NotQuantized):
            quiver_search(sum_group_zm(3, 4), 2, 2, 1)

    def test_generic_structure(self):
        s = structure(Sum(3), ProductCarrier((modular(2),)))
        assert s.arity == 3
