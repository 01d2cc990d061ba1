"""Exact polynomial arithmetic: ring axioms, determinants, division, and
linear factorization."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from saitostrata.algebra import (MultiPoly, LinearForm, FactoredDeterminant,
                                 UNKNOWN, poly_det, det_cofactor, det_bareiss,
                                 divide_exact, try_divide, factor_linear,
                                 NotDivisible, IncompleteFactorization)

NVARS = 3


def _poly(terms):
    return MultiPoly(NVARS, terms)


@st.composite
def polys(draw, max_terms=5, max_exp=3):
    nterms = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(nterms):
        e = tuple(draw(st.integers(0, max_exp)) for _ in range(NVARS))
        c = Fraction(draw(st.integers(-9, 9)), draw(st.integers(1, 4)))
        if c:
            terms[e] = c
    return _poly(terms)


class TestRingAxioms:
    @given(polys(), polys())
    def test_addition_commutes(self, p, q):
        assert p + q == q + p

    @given(polys(), polys(), polys())
    def test_addition_associates(self, p, q, r):
        assert (p + q) + r == p + (q + r)

    @given(polys(), polys())
    def test_multiplication_commutes(self, p, q):
        assert p * q == q * p

    @settings(max_examples=50)
    @given(polys(max_terms=3), polys(max_terms=3), polys(max_terms=3))
    def test_multiplication_associates(self, p, q, r):
        assert (p * q) * r == p * (q * r)

    @given(polys(), polys(), polys())
    def test_distributivity(self, p, q, r):
        assert p * (q + r) == p * q + p * r

    @given(polys())
    def test_additive_inverse(self, p):
        assert (p - p).is_zero()

    @given(polys())
    def test_one_is_neutral(self, p):
        assert p * MultiPoly.const(NVARS, 1) == p


class TestCalculus:
    @given(polys(), polys())
    def test_leibniz_rule(self, p, q):
        for i in range(NVARS):
            lhs = (p * q).diff(i)
            rhs = p.diff(i) * q + p * q.diff(i)
            assert lhs == rhs

    @given(polys())
    def test_evaluate_matches_substitute(self, p):
        pt = [Fraction(1, 2), Fraction(-2), Fraction(3)]
        consts = [MultiPoly.const(NVARS, x) for x in pt]
        subbed = p.substitute(consts)
        assert subbed.is_zero() or subbed.is_constant()
        val = Fraction(0) if subbed.is_zero() else subbed.constant_value()
        assert val == p.evaluate(pt)

    def test_set_vars_zero_reindexes(self):
        p = _poly({(1, 0, 2): Fraction(3), (0, 1, 0): Fraction(1)})
        q = p.set_vars_zero([1], [0, 2])
        assert q == MultiPoly(2, {(1, 2): Fraction(3)})


class TestDivision:
    @given(polys(max_terms=4), polys(max_terms=4))
    def test_product_division_round_trip(self, p, q):
        if q.is_zero():
            return
        assert divide_exact(p * q, q) == p

    def test_not_divisible(self):
        x = MultiPoly.variable(NVARS, 0)
        y = MultiPoly.variable(NVARS, 1)
        with pytest.raises(NotDivisible):
            divide_exact(x * x + y, x)
        assert try_divide(x * x + y, x) is None

    def test_zero_divisor(self):
        with pytest.raises(ZeroDivisionError):
            divide_exact(MultiPoly.const(NVARS, 1), MultiPoly.zero(NVARS))


class TestDeterminants:
    def _random_matrix(self, rng, n):
        def entry():
            terms = {}
            for _ in range(rng.randint(1, 3)):
                e = tuple(rng.randint(0, 2) for _ in range(NVARS))
                terms[e] = Fraction(rng.randint(-5, 5))
            return _poly({e: c for e, c in terms.items() if c})
        return [[entry() for _ in range(n)] for _ in range(n)]

    def test_bareiss_agrees_with_cofactor(self):
        rng = random.Random(7)
        for n in (1, 2, 3, 4):
            for _ in range(4):
                m = self._random_matrix(rng, n)
                assert det_bareiss(m) == det_cofactor(m)

    def test_poly_det_alternating(self):
        rng = random.Random(11)
        m = self._random_matrix(rng, 3)
        swapped = [m[1], m[0], m[2]]
        assert poly_det(swapped) == -poly_det(m)

    def test_singular_matrix(self):
        x = MultiPoly.variable(NVARS, 0)
        m = [[x, x, x], [x, x, x], [x, x, x]]
        for n in (det_bareiss, det_cofactor):
            assert n(m).is_zero()


class TestLinearForm:
    def test_canonical_scale_contract(self):
        vec = [Fraction(-3, 4), Fraction(1, 2), Fraction(0)]
        form, scale = LinearForm.canonical(vec)
        assert form.coeffs[0] > 0
        assert [scale * c for c in form.coeffs] == vec

    def test_rejects_zero_and_imprimitive(self):
        with pytest.raises(ValueError):
            LinearForm([0, 0])
        with pytest.raises(ValueError):
            LinearForm([2, 4])
        with pytest.raises(ValueError):
            LinearForm([-1, 2])


class TestFactorLinear:
    def test_recovers_product(self):
        f1 = LinearForm([1, 0, 1])
        f2 = LinearForm([0, 1, -1])
        p = (f1.as_poly() ** 2) * f2.as_poly() * Fraction(7, 3)
        fd = factor_linear(p, [f1, f2, LinearForm([1, 1, 1])])
        assert fd.coefficient == Fraction(7, 3)
        assert fd.factors == {f1: 2, f2: 1}
        assert fd.expand() == p

    def test_incomplete_factorization_reports_cofactor(self):
        f1 = LinearForm([1, 0, 0])
        irred = _poly({(0, 2, 0): Fraction(1), (0, 0, 2): Fraction(1)})
        p = f1.as_poly() * irred
        with pytest.raises(IncompleteFactorization) as exc:
            factor_linear(p, [f1])
        assert exc.value.partial == {f1: 1}
        assert exc.value.cofactor == irred

    def test_zero_polynomial_rejected(self):
        with pytest.raises(ValueError):
            factor_linear(MultiPoly.zero(NVARS), [LinearForm([1, 0, 0])])


class TestFactoredDeterminant:
    def test_degree_multiset_evaluate(self):
        f1, f2 = LinearForm([1, -1]), LinearForm([1, 1])
        fd = FactoredDeterminant(Fraction(-2), {f1: 2, f2: 3})
        assert fd.degree() == 5
        assert fd.exponents_sorted() == [2, 3]
        assert fd.multiset() == frozenset({((1, -1), 2), ((1, 1), 3)})
        pt = [Fraction(3), Fraction(1)]
        assert fd.evaluate(pt) == Fraction(-2) * 2 ** 2 * 4 ** 3

    def test_unknown_coefficient_blocks_expansion(self):
        fd = FactoredDeterminant(UNKNOWN, {LinearForm([1, 0]): 1})
        with pytest.raises(ValueError):
            fd.expand()
        with pytest.raises(ValueError):
            fd.evaluate([1, 1])

    def test_rejects_bad_exponents(self):
        with pytest.raises(ValueError):
            FactoredDeterminant(1, {LinearForm([1, 0]): 0})
