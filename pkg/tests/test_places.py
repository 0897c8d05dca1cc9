import pytest
from hypothesis import given, settings, strategies as st

from ffell.algebra import Poly, PrimeField, factor
from ffell.places import (INF, Place, RationalFunction, count_places,
                          enumerate_places, reduce_at, residue_field,
                          residue_of_t, valuation)

F5 = PrimeField(5)
F7 = PrimeField(7)


def t_poly(F):
    return Poly.t(F)


class TestValuation:
    def test_finite_multiplicity(self):
        t = t_poly(F5)
        f = t ** 2 * (t - 1) ** 9
        assert valuation(f, Place.rational(F5, 0)) == 2

    def test_infinity_degree_count(self):
        t = t_poly(F5)
        f = t ** 2 * (t - 1) ** 9
        assert valuation(f, Place.infinity(F5)) == -11

    def test_degree_two_factors(self):
        t = t_poly(F7)
        f = RationalFunction(t ** 2 + 1, t - 2)
        _, facs = factor(t ** 2 + 1)
        for pi, _ in facs:
            assert valuation(f, Place.finite(F7, pi)) == 1

    def test_zero(self):
        assert valuation(Poly(F5, []), Place.rational(F5, 1)) == INF

    @settings(max_examples=40, deadline=None)
    @given(st.sampled_from([5, 7]), st.data())
    def test_valuation_is_a_valuation(self, p, data):
        F = PrimeField(p)

        def rand_rf():
            num = Poly(F, [data.draw(st.integers(0, p - 1)) for _ in range(4)])
            den = Poly(F, [data.draw(st.integers(0, p - 1)) for _ in range(3)])
            if not num or not den:
                return None
            return RationalFunction(num, den)

        f, g = rand_rf(), rand_rf()
        if f is None or g is None:
            return
        places = [Place.infinity(F)] + [Place.rational(F, a) for a in range(p)]
        for x in places:
            assert valuation(f * g, x) == valuation(f, x) + valuation(g, x)
            s = f + g
            if s:
                assert valuation(s, x) >= min(valuation(f, x), valuation(g, x))

    @settings(max_examples=30, deadline=None)
    @given(st.sampled_from([5, 7]), st.data())
    def test_product_formula(self, p, data):
        F = PrimeField(p)
        num = Poly(F, [data.draw(st.integers(0, p - 1)) for _ in range(5)])
        den = Poly(F, [data.draw(st.integers(0, p - 1)) for _ in range(4)])
        if not num or not den:
            return
        f = RationalFunction(num, den)
        if not f:
            return
        total = -valuation(f, Place.infinity(F))  # deg num - deg den
        seen = 0
        for g in (f.num, f.den):
            sign = 1 if g is f.num else -1
            if g.degree >= 1:
                _, facs = factor(g)
                for pi, m in facs:
                    seen += sign * m * int(pi.degree)
        assert seen == total  # sum over finite places of v_x(f) deg x = -v_oo(f)


class TestEnumeratePlaces:
    def test_q5_d1(self):
        ps = list(enumerate_places(F5, 1))
        assert len(ps) == 6
        assert ps[0].is_infinite

    def test_q5_d2(self):
        ps = list(enumerate_places(F5, 2))
        assert len(ps) == 6 + 10
        assert count_places(5, 2) == 10

    def test_q7_d1(self):
        assert len(list(enumerate_places(F7, 1))) == 8

    @pytest.mark.parametrize("q", [5, 7, 11])
    @pytest.mark.parametrize("d", [1, 2, 3, 4])
    def test_necklace_counts(self, q, d):
        F = PrimeField(q)
        got = sum(1 for x in enumerate_places(F, d) if x.degree == d
                  and not x.is_infinite)
        assert got == count_places(q, d)

    def test_no_duplicates(self):
        ps = list(enumerate_places(F5, 3))
        assert len(ps) == len(set(ps))


class TestResidue:
    def test_evaluate(self):
        x = Place.rational(F5, 3)
        assert reduce_at(t_poly(F5) ** 2, x) == F5(4)

    def test_infinity_leading_ratio(self):
        t = t_poly(F5)
        f = RationalFunction(2 * t ** 2 + 1, t ** 2 - 1)
        assert reduce_at(f, Place.infinity(F5)) == F5(2)

    def test_degree_two_minimal_polynomial(self):
        _, facs = factor(Poly(F5, [2, 0, 1]))
        pi = facs[0][0]
        x = Place.finite(F5, pi)
        K = residue_field(x)
        assert K.order == 25
        a = residue_of_t(x)
        # the image of t satisfies its own minimal polynomial t^2 + 2
        assert a * a + 2 == K.zero

    def test_pole_rejected(self):
        t = t_poly(F5)
        with pytest.raises(ValueError):
            reduce_at(RationalFunction(Poly(F5, [1]), t), Place.rational(F5, 0))

    def test_ring_morphism(self):
        x = Place.rational(F7, 2)
        t = t_poly(F7)
        f = RationalFunction(t + 1, t - 1)
        g = RationalFunction(t ** 2 + 3)
        assert reduce_at(f * g, x) == reduce_at(f, x) * reduce_at(g, x)
        assert reduce_at(f + g, x) == reduce_at(f, x) + reduce_at(g, x)

    def test_cancellation_before_reduction(self):
        t = t_poly(F5)
        f = RationalFunction(t * (t - 1), t)  # equals t-1, integral at t=0
        assert reduce_at(f, Place.rational(F5, 0)) == F5(-1)
