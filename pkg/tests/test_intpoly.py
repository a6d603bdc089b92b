import math
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from cartan_entropy import (
    DegreeTooLarge,
    FieldElement,
    IntPolynomial,
    InvalidInput,
    NotSquarefree,
    NotTotallyReal,
    NumberField,
    discriminant,
    element_norm,
    find_real_roots,
    format_polynomial,
    is_irreducible,
    parse_polynomial,
)


class TestParsing:
    def test_standard_text(self):
        f = parse_polynomial("x^4 - x^3 - 3*x^2 + x + 1")
        assert f.coeffs == (1, 1, -3, -1, 1)
        assert f.degree == 4

    def test_implicit_multiplication(self):
        f = parse_polynomial("x^4 - x^3 - 3x^2 + x + 1")
        assert f.coeffs == (1, 1, -3, -1, 1)

    def test_coefficient_list(self):
        f = parse_polynomial("[1,1,-3,-1,1]")
        assert f.coeffs == (1, 1, -3, -1, 1)

    def test_negative_leading_terms(self):
        assert parse_polynomial("-x + 2").coeffs == (2, -1)
        assert parse_polynomial("x^2").coeffs == (0, 0, 1)

    def test_round_trip_through_text(self):
        for coeffs in [(1, -2, -1, 1), (4, 0, -6, 0, 1), (0, 1)]:
            f = IntPolynomial(coeffs)
            assert parse_polynomial(format_polynomial(f)).coeffs == f.coeffs

    def test_rejects_garbage(self):
        for text in ["x^^2", "", "x**2 +", "[1, 1.5]", "y^2 - 1"]:
            with pytest.raises(InvalidInput):
                parse_polynomial(text)


class TestDiscriminant:
    def test_known_values(self):
        assert discriminant(IntPolynomial((-1, -3, 0, 1))) == 81
        assert discriminant(IntPolynomial((1, 1, -3, -1, 1))) == 725
        assert discriminant(IntPolynomial((-2, 0, 1))) == 8

    def test_matches_sympy_on_random_cubics(self):
        xs = sympy.symbols("x")
        for coeffs in [(1, -2, -1, 1), (-1, -3, 0, 1), (3, 1, -2, 1)]:
            f = IntPolynomial(coeffs)
            expr = sum(c * xs**i for i, c in enumerate(coeffs))
            assert discriminant(f) == sympy.discriminant(expr, xs)

    @given(st.lists(st.integers(-5, 5), min_size=2, max_size=4))
    @settings(max_examples=40, deadline=None)
    def test_matches_sympy_property(self, lower):
        coeffs = tuple(lower) + (1,)
        f = IntPolynomial(coeffs)
        xs = sympy.symbols("x")
        expr = sum(c * xs**i for i, c in enumerate(coeffs))
        assert discriminant(f) == sympy.discriminant(expr, xs)


class TestIrreducibility:
    def test_reducible_cubic(self):
        assert not is_irreducible(IntPolynomial((1, -1, -1, 1)))

    def test_irreducible_cubic(self):
        assert is_irreducible(IntPolynomial((1, -2, -1, 1)))

    def test_quadratic(self):
        assert is_irreducible(IntPolynomial((-2, 0, 1)))

    def test_degree_cap(self):
        coeffs = (2,) + (0,) * 16 + (1,)
        with pytest.raises(DegreeTooLarge):
            is_irreducible(IntPolynomial(coeffs))

    def test_agrees_with_sympy_on_small_cubics(self):
        xs = sympy.symbols("x")
        for a in range(-2, 3):
            for b in range(-2, 3):
                for c in range(-2, 3):
                    f = IntPolynomial((c, b, a, 1))
                    expr = xs**3 + a * xs**2 + b * xs + c
                    expected = sympy.Poly(expr, xs).is_irreducible
                    assert is_irreducible(f) == expected, f.coeffs

    def test_agrees_with_sympy_on_sample_quartics(self):
        xs = sympy.symbols("x")
        samples = [
            (1, 1, -3, -1, 1), (1, 0, -4, 0, 1), (4, 0, -6, 0, 1),
            (1, 0, 2, 0, 1), (0, 1, 1, 1, 1), (-1, -1, 3, 1, 1),
            (1, 0, 0, 0, 1), (2, 0, -4, 0, 1), (1, 2, 1, 2, 1),
        ]
        for coeffs in samples:
            f = IntPolynomial(coeffs)
            expr = sum(c * xs**i for i, c in enumerate(coeffs))
            assert is_irreducible(f) == sympy.Poly(expr, xs).is_irreducible


class TestRealRoots:
    def test_sqrt_two(self):
        emb = find_real_roots(IntPolynomial((-2, 0, 1)))
        assert emb.roots == pytest.approx([-math.sqrt(2), math.sqrt(2)],
                                          abs=1e-12)

    def test_quartic_has_four_increasing_roots(self):
        emb = find_real_roots(IntPolynomial((1, 1, -3, -1, 1)))
        assert len(emb.roots) == 4
        assert list(emb.roots) == sorted(emb.roots)

    def test_residuals_small(self):
        f = IntPolynomial((-1, -2, 7, 2, -7, -1, 1))
        emb = find_real_roots(f)
        for r in emb.roots:
            val = sum(c * r**i for i, c in enumerate(f.coeffs))
            assert abs(val) <= 1e-12 * (1 + max(abs(c) for c in f.coeffs))

    def test_complex_roots_rejected(self):
        with pytest.raises(NotTotallyReal):
            find_real_roots(IntPolynomial((1, 0, 1)))

    def test_repeated_roots_rejected(self):
        with pytest.raises(NotSquarefree):
            find_real_roots(IntPolynomial((1, -2, 1)))


class TestElementNorm:
    def test_norm_of_one(self):
        f = IntPolynomial((1, 1, -3, -1, 1))
        assert element_norm(f, FieldElement.from_ints([1, 0, 0, 0])) == 1

    def test_norm_of_generator_is_constant_term_sign(self):
        f = IntPolynomial((1, 1, -3, -1, 1))
        assert element_norm(f, FieldElement.from_ints([0, 1, 0, 0])) == 1

    def test_norm_of_rational_integer(self):
        f = IntPolynomial((1, -2, -1, 1))
        assert element_norm(f, FieldElement.from_ints([2, 0, 0])) == 8

    @given(st.lists(st.integers(-3, 3), min_size=3, max_size=3))
    @settings(max_examples=40, deadline=None)
    def test_norm_equals_product_of_conjugates(self, coords):
        f = IntPolynomial((1, -2, -1, 1))
        el = FieldElement.from_ints(coords)
        exact = element_norm(f, el)
        emb = find_real_roots(f)
        prod = 1.0
        for r in emb.roots:
            prod *= sum(float(c) * r**i for i, c in enumerate(el.coeffs))
        assert exact == pytest.approx(prod, rel=1e-8, abs=1e-8)

    def test_norm_multiplicative(self):
        f = IntPolynomial((1, -2, -1, 1))
        nf = NumberField(f, find_real_roots(f))
        a = FieldElement.from_ints([1, 1, 0])
        b = FieldElement.from_ints([0, -1, 2])
        ab = nf.mul(a, b)
        assert element_norm(f, ab) == element_norm(f, a) * element_norm(f, b)


class TestFieldArithmetic:
    def test_multiplication_reduces_mod_f(self):
        f = IntPolynomial((-2, 0, 1))
        nf = NumberField(f, find_real_roots(f))
        lam = FieldElement.from_ints([0, 1])
        sq = nf.mul(lam, lam)
        assert tuple(sq.coeffs) == (Fraction(2), Fraction(0))
