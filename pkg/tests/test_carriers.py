import random
from fractions import Fraction

import pytest

from oracles import cyc, cyc_add, cyc_fold, cyc_mul, cyc_of, dense_of, mat_add, mat_mul, support
from polyprod.carriers import (I, ZETA, CycShiftMatrix, Mod, ParametricCarrier,
                               ProductCarrier, contains, element_str, element_text, finite,
                               imag_odd, modular, power_carrier, ratio, residue_class, sample,
                               scalar, scalar_add, scalar_mul, shift_matrices, shift_matrix,
                               sqrt_i_1mod4, sqrt_i_odd)
from polyprod.errors import NotSamplable, PhaseMismatch, ShapeError


class TestExactScalar:
    def test_imaginary_pair_multiplies_to_minus_one(self):
        assert scalar_mul(scalar(3, 5, 2), scalar(5, 3, 2)) == scalar(-1)

    def test_zeta_squared_is_i(self):
        assert scalar_mul(scalar(3, 1, 1), scalar(3, 1, 1)) == scalar(9, 1, 2)

    def test_cube_of_seven(self):
        seven = scalar(7)
        got = scalar_mul(scalar_mul(seven, seven), seven)
        assert cyc_of(got) == cyc(7 ** 3)
        assert got == scalar(343)

    def test_same_ray_sum(self):
        assert scalar_add(scalar(1, 3, 2), scalar(2, 3, 2)) == I

    def test_different_rays_refuse_to_add(self):
        with pytest.raises(PhaseMismatch):
            scalar_add(scalar(1, 3, 2), ZETA)

    def test_nine_sevens(self):
        acc = scalar(7)
        for _ in range(8):
            acc = scalar_add(acc, scalar(7))
        assert cyc_of(acc) == cyc_fold(cyc_add, [cyc(7)] * 9)
        assert acc == scalar(63)

    def test_canonical_form(self):
        assert scalar(2, 4) == scalar(1, 2)
        assert scalar(2, 4).num == 1 and scalar(2, 4).den == 2
        assert scalar(3, -6) == scalar(-1, 2)
        assert scalar(1, 1, 4) == scalar(-1)
        assert scalar(1, 1, 6) == scalar(-1, 1, 2)
        z = scalar(0, 1, 3)
        assert z.phase == 0 and z == scalar(0)
        assert hash(scalar(5, 1, 6)) == hash(scalar(-5, 1, 2))

    def test_canonical_phase_range(self):
        for p in range(-9, 17):
            s = scalar(3, 7, p)
            assert 0 <= s.phase <= 3
            assert cyc_of(s) == cyc(Fraction(3, 7), p)

    def test_inverse_and_division(self):
        x = scalar(3, 5, 1)
        assert x * x.inverse() == scalar(1)
        assert scalar(6, 1, 2) / scalar(2, 1, 2) == scalar(3)
        with pytest.raises(ZeroDivisionError):
            scalar(0).inverse()

    def test_powers_against_oracle(self):
        x = scalar(-2, 3, 1)
        for e in range(0, 9):
            assert cyc_of(x ** e) == cyc_fold(cyc_mul, [cyc(1)] + [cyc_of(x)] * e)
        assert x ** -2 == (x * x).inverse()

    def test_zero_adds_to_any_ray(self):
        assert scalar(0) + ZETA == ZETA
        assert I + scalar(0) == I

    def test_str(self):
        assert str(scalar(3, 5, 2)) == "i*3/5"
        assert str(scalar(-1, 1, 1)) == "-zeta"
        assert str(scalar(7)) == "7"


class TestMod:
    def test_arithmetic(self):
        a, b = Mod(3, 5), Mod(4, 5)
        assert a + b == Mod(2, 5)
        assert a * b == Mod(2, 5)
        assert a - b == Mod(4, 5)
        assert -a == Mod(2, 5)
        assert a * 2 == Mod(1, 5)
        assert a ** -1 == Mod(2, 5)

    def test_noninvertible(self):
        with pytest.raises(ZeroDivisionError):
            Mod(2, 6) ** -1

    def test_moduli_must_agree(self):
        with pytest.raises(ValueError):
            Mod(1, 5) + Mod(1, 7)


class TestCycShiftMatrix:
    def _random(self, rng, size=4, shift=1):
        return CycShiftMatrix(size, shift, tuple(scalar(rng.randint(-9, 9) or 1, rng.randint(1, 5))
                                                 for _ in range(size)))

    def test_products_match_dense_oracle(self):
        rng = random.Random(3)
        for n in range(2, 10):
            ms = [self._random(rng) for _ in range(n)]
            prod = ms[0]
            for m in ms[1:]:
                prod = prod * m
            dense = dense_of(ms[0])
            for m in ms[1:]:
                dense = mat_mul(dense, dense_of(m))
            assert dense_of(prod) == dense
            assert prod.shift == n % 4
            assert support(dense) == {(i, (i + n) % 4) for i in range(4)}

    def test_shape_preserved_iff_n_is_1_mod_4(self):
        rng = random.Random(5)
        shaped = {(i, (i + 1) % 4) for i in range(4)}
        for n in range(2, 10):
            dense = dense_of(self._random(rng))
            for _ in range(n - 1):
                dense = mat_mul(dense, dense_of(self._random(rng)))
            assert (support(dense) == shaped) == (n % 4 == 1)

    def test_sum_matches_dense_oracle(self):
        rng = random.Random(9)
        a, b = self._random(rng), self._random(rng)
        assert dense_of(a + b) == mat_add(dense_of(a), dense_of(b))

    def test_sum_of_different_shapes_fails(self):
        with pytest.raises(ShapeError):
            shift_matrix(1, 2, 3, 4) + shift_matrix(1, 2, 3, 4, shift=2)

    def test_inverse(self):
        m = shift_matrix(3, -7, 11, 3)
        one = m * m.inverse()
        assert one.shift == 0
        assert all(e == scalar(1) for e in one.entries)
        assert m ** -1 == m.inverse()

    def test_scalar_multiple(self):
        m = shift_matrix(3, 7, 11, -1)
        assert (m * -3).entries == tuple(e * -3 for e in m.entries)
        assert ratio(m * -3, m) == scalar(-3)
        assert ratio(m, shift_matrix(3, 7, 11, 1)) is None

    def test_antidiagonal_2x2(self):
        m = shift_matrix(1, 2)
        assert dense_of(m) == [[0, 1], [2, 0]]
        assert (m * m).shift == 0


class TestCarriers:
    def test_contains(self):
        c = residue_class(8, 7)
        assert contains(c, scalar(23))
        assert not contains(c, scalar(16))
        assert contains(c, scalar(-1))
        assert contains(imag_odd(), scalar(3, 5, 2))
        assert not contains(imag_odd(), scalar(2, 5, 2))
        assert not contains(imag_odd(), scalar(3, 5))
        assert not contains(c, "not an element")

    def test_sample_modular(self):
        xs = sample(modular(5), 1, 3)
        assert len(xs) == 3
        assert all(isinstance(x, Mod) and 0 <= x.residue < 5 for x in xs)

    def test_sample_residue_class(self):
        xs = sample(residue_class(8, 7), 7, 5)
        assert len(xs) == 5
        assert all(x.den == 1 and x.num % 8 == 7 for x in xs)

    def test_sample_fraction_matrices(self):
        c = shift_matrices(4, "frac43")
        xs = sample(c, 2, 2)
        assert len(xs) == 2
        assert all(contains(c, x) for x in xs)

    def test_sample_deterministic(self):
        c = imag_odd()
        assert sample(c, 11, 20) == sample(c, 11, 20)
        assert sample(c, 11, 20) != sample(c, 12, 20)

    def test_not_samplable(self):
        c = ParametricCarrier("bare()", lambda x: True)
        with pytest.raises(NotSamplable):
            sample(c, 0, 1)

    def test_modular_excludes(self):
        c = modular(5, exclude=[0])
        assert c.size == 4 and not contains(c, Mod(0, 5))
        assert c.expr == "modular(5, exclude=[0])"

    def test_finite_no_duplicates_and_index(self):
        c = finite([Mod(1, 5), Mod(3, 5)])
        assert c.index(Mod(3, 5)) == 1
        assert c.expr == "finite([mod(1, 5), mod(3, 5)])"
        with pytest.raises(ValueError):
            finite([Mod(1, 5), Mod(1, 5)])

    def test_product_carrier(self):
        c = ProductCarrier((modular(2), modular(3)))
        assert c.size == 6 and c.finite
        assert c.elements[c.index((Mod(1, 2), Mod(2, 3)))] == (Mod(1, 2), Mod(2, 3))
        assert contains(c, (Mod(1, 2), Mod(2, 3)))
        assert not contains(c, (Mod(1, 2),))
        assert power_carrier(modular(2), 3).size == 8

    def test_fraction_entries_use_reduced_value(self):
        c = shift_matrices(4, "frac43")
        # 9/15 = 3/5 is not a ratio of two numbers 3 mod 4 once reduced
        assert not contains(c, shift_matrix(Fraction(9, 15), 3, 3, 3))
        assert contains(c, shift_matrix(Fraction(3, 7), 1, Fraction(7, 3), Fraction(7, 11)))
        # 3 = 3/1 and -1 have no such representation
        assert not contains(c, shift_matrix(1, 1, 3, 1))
        assert not contains(c, shift_matrix(1, 1, -1, 1))

    def test_sqrt_i_carriers(self):
        assert contains(sqrt_i_odd(), scalar(3, 7, 1))
        assert contains(sqrt_i_1mod4(), scalar(5, 9, 1))
        assert not contains(sqrt_i_1mod4(), scalar(3, 5, 1))
        for x in sample(sqrt_i_1mod4(), 4, 30):
            assert contains(sqrt_i_odd(), x)

    @pytest.mark.parametrize("c", [residue_class(8, 7), imag_odd(), sqrt_i_odd(), sqrt_i_1mod4(),
                                   shift_matrices(4, "4k+3"), shift_matrices(4, "frac43"),
                                   shift_matrices(2, "int")])
    def test_sampler_output_is_member(self, c):
        for seed in range(5):
            assert all(contains(c, x) for x in sample(c, seed, 40))


class TestText:
    def test_element_text(self):
        assert element_text(Mod(3, 5)) == "mod(3, 5)"
        assert element_text(scalar(-3, 5, 2)) == "q(-3, 5, phase=2)"
        assert element_text(scalar(4)) == "q(4)"
        assert element_text((Mod(1, 2),)) == "(mod(1, 2),)"
        assert element_text(shift_matrix(1, 2)) == "shiftmat(2, 1, [q(1), q(2)])"

    def test_element_str(self):
        assert element_str((Mod(1, 2), scalar(1, 1, 2))) == "(1, i)"
