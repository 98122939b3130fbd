import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nilaffine.errors import FieldMismatchError, ParseError
from nilaffine.scalars import (Scalar, as_fraction, check_context,
                               is_square_free, scalar_from_json,
                               scalar_to_json)


def s(rat, irr=0, d=1):
    return Scalar(Fraction(rat), Fraction(irr), d)


class TestConstruction:
    def test_d_one_folds_irrational_part(self):
        assert Scalar(1, 2, 1) == Scalar(3, 0, 1)
        assert Scalar(Fraction(1, 2), Fraction(1, 2), 1).rat == 1

    def test_of_recontexts_rationals(self):
        a = Scalar.of(Fraction(2, 3), 5)
        assert a.d == 5 and a.rat == Fraction(2, 3) and a.irr == 0
        b = Scalar.of(s(1, 1, 3), 3)
        assert b.d == 3

    def test_of_rejects_cross_context_irrationals(self):
        with pytest.raises(FieldMismatchError):
            Scalar.of(s(0, 1, 2), 3)

    def test_square_free_context_enforced(self):
        assert is_square_free(6) and not is_square_free(12)
        with pytest.raises(ValueError):
            check_context(4)
        with pytest.raises(ValueError):
            Scalar(1, 1, 8)

    def test_as_fraction_rejects_floats(self):
        with pytest.raises(TypeError):
            as_fraction(0.5)


class TestArithmetic:
    def test_componentwise_addition(self):
        assert s(1, 2, 3) + s(4, 5, 3) == s(5, 7, 3)

    def test_sqrt_squares_to_d(self):
        r = Scalar.sqrt(3)
        assert r * r == Scalar.of(3, 3)

    def test_inverse_of_one_plus_sqrt3(self):
        x = s(1, 1, 3)
        assert x.inverse() == s(Fraction(-1, 2), Fraction(1, 2), 3)
        assert x * x.inverse() == Scalar.one(3)

    def test_division_by_zero(self):
        with pytest.raises(ZeroDivisionError):
            Scalar.one(2) / Scalar.zero(2)

    def test_mixed_context_rejected(self):
        with pytest.raises(FieldMismatchError):
            s(0, 1, 2) + s(0, 1, 3)

    def test_rational_literals_mix_in(self):
        assert s(1, 1, 5) + 1 == s(2, 1, 5)
        assert 2 * s(1, 1, 5) == s(2, 2, 5)
        assert 1 / Scalar.sqrt(5) == s(0, Fraction(1, 5), 5)

    def test_conjugate_and_norm(self):
        x = s(2, 3, 5)
        assert x.conjugate() == s(2, -3, 5)
        assert x.norm() == 4 - 9 * 5

    def test_powers(self):
        x = s(1, 1, 2)
        assert x ** 0 == Scalar.one(2)
        assert x ** 3 == x * x * x
        assert x ** -2 == (x * x).inverse()

    def test_seeded_inverse_and_cancellation_sweep(self):
        rng = random.Random(20260817)
        for _ in range(1000):
            d = rng.choice([1, 2, 3, 5])
            a = Scalar(Fraction(rng.randint(-30, 30), rng.randint(1, 12)),
                       Fraction(rng.randint(-30, 30), rng.randint(1, 12)), d)
            b = Scalar(Fraction(rng.randint(-30, 30), rng.randint(1, 12)),
                       Fraction(rng.randint(-30, 30), rng.randint(1, 12)), d)
            assert (a + b) - b == a
            if not b.is_zero():
                assert (a / b) * b == a


fractions = st.fractions(min_value=-1000, max_value=1000, max_denominator=100)


def scalars(d):
    return st.builds(lambda r, i: Scalar(r, i, d), fractions, fractions)


class TestFieldAxioms:
    @given(scalars(2), scalars(2), scalars(2))
    @settings(max_examples=200)
    def test_ring_axioms(self, a, b, c):
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a + b == b + a
        assert a * b == b * a

    @given(scalars(3))
    @settings(max_examples=200)
    def test_inverses(self, a):
        assert a + (-a) == Scalar.zero(3)
        if not a.is_zero():
            assert a * a.inverse() == Scalar.one(3)


class TestSerialization:
    def test_integer_form(self):
        assert scalar_to_json(Scalar.of(3, 1)) == 3
        assert scalar_from_json(3, 1) == Scalar.of(3, 1)

    def test_fraction_form(self):
        assert scalar_to_json(Scalar.of(Fraction(-1, 2), 1)) == "-1/2"
        assert scalar_from_json("-1/2", 1) == Scalar.of(Fraction(-1, 2), 1)

    def test_pair_form(self):
        x = s(Fraction(1, 2), Fraction(-2, 3), 3)
        assert scalar_to_json(x) == ["1/2", "-2/3"]
        assert scalar_from_json(["1/2", "-2/3"], 3) == x

    def test_round_trip_random(self):
        rng = random.Random(5)
        for _ in range(200):
            d = rng.choice([1, 2, 3])
            x = Scalar(Fraction(rng.randint(-9, 9), rng.randint(1, 9)),
                       Fraction(rng.randint(-9, 9), rng.randint(1, 9)), d)
            assert scalar_from_json(scalar_to_json(x), d) == x

    def test_malformed_inputs(self):
        with pytest.raises(ParseError):
            scalar_from_json("1/0", 1)
        with pytest.raises(ParseError):
            scalar_from_json({"rat": 1}, 1)
        with pytest.raises(ParseError):
            scalar_from_json([1, 2, 3], 3)
        with pytest.raises(ParseError):
            scalar_from_json(0.5, 1)

    def test_irrational_part_needs_context(self):
        with pytest.raises(ParseError):
            scalar_from_json(["1/2", "1/3"], 1)
