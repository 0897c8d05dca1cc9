import dataclasses
from fractions import Fraction

import pytest

from ffell.algebra import Poly, PrimeField
from ffell.families import (FAMILIES, epsilon_law_check, load_family_file,
                            verify_profile)
from ffell.lfunction import global_invariants

ALL_IDS = {"intro_N5", "odd_1mod8", "odd_3mod8", "odd_5mod8", "odd_7mod8",
           "even_0mod8", "even_2mod8", "even_4mod8", "even_6mod8",
           "case1_2ns", "case2_3ns", "case3_5ns", "case4_7ns"}


class TestRegistry:
    def test_all_families_present(self):
        assert set(FAMILIES) == ALL_IDS

    def test_conditions(self):
        assert {FAMILIES[f].condition for f in ALL_IDS} == {"A", "B", "C"}
        assert FAMILIES["case1_2ns"].condition == "B"
        assert FAMILIES["even_6mod8"].condition == "C"
        assert FAMILIES["odd_7mod8"].condition == "A"

    def test_h_degrees_bounded(self):
        for fid, fam in FAMILIES.items():
            for n in (fam.nmin, fam.nmin + 1):
                if fam.nmax is not None and n > fam.nmax:
                    continue
                num, den = fam.h_pair(n)
                assert len(num) - 1 <= 4 and len(den) - 1 <= 4, fid

    def test_n_out_of_range(self):
        with pytest.raises(ValueError):
            FAMILIES["case1_2ns"].base_coeffs(1)
        with pytest.raises(ValueError):
            FAMILIES["intro_N5"].base_coeffs(1)


class TestBaseModels:
    def test_case1_discriminant_factors(self):
        # Delta = -2^6 3^6 f^6 t^4 (t-1)^3 (t-2)^2
        p, n = 13, 3
        fam = FAMILIES["case1_2ns"]
        E = fam.base_curve(p, n)
        F = PrimeField(p)
        t = Poly.t(F)
        f = Poly(F, [1])
        for v in fam.f_values(n):
            f = f * (t - F(v.numerator) / F(v.denominator))
        expect = (F(-2 ** 6 * 3 ** 6) * f ** 6 * t ** 4
                  * (t - 1) ** 3 * (t - 2) ** 2)
        assert E.delta.coeffs == expect.coeffs

    def test_even_6_discriminant_factors(self):
        # Delta = 2^4 3^6 f^6 t^10 (t-1)^2 (t+1)^2
        p, n = 13, 0
        fam = FAMILIES["even_6mod8"]
        E = fam.base_curve(p, n)
        F = PrimeField(p)
        t = Poly.t(F)
        f = Poly(F, [1])
        for v in fam.f_values(n):
            f = f * (t - F(v.numerator) / F(v.denominator))
        expect = (F(2 ** 4 * 3 ** 6) * f ** 6 * t ** 10
                  * (t - 1) ** 2 * (t + 1) ** 2)
        assert E.delta.coeffs == expect.coeffs

    def test_base_curves_nonisotrivial(self):
        for fid, fam in FAMILIES.items():
            p = next(p for p in (11, 13, 17, 19, 23, 29, 31, 37, 41)
                     if fam.valid_prime(p, fam.nmin))
            fam.base_curve(p, fam.nmin).assert_nonisotrivial()


class TestGrid:
    def test_valid_prime_rejects_excluded(self):
        assert not FAMILIES["case2_3ns"].valid_prime(7, 2)   # 7 | 42
        assert not FAMILIES["intro_N5"].valid_prime(3, 0)
        assert not FAMILIES["intro_N5"].valid_prime(9, 0)    # not prime

    def test_valid_prime_rejects_f_collision(self):
        # h0(3) = h0(4) mod 11 for the N=0 mod 8 family
        assert not FAMILIES["even_0mod8"].valid_prime(11, 1)
        assert FAMILIES["even_0mod8"].valid_prime(19, 1)

    def test_valid_prime_rejects_dead_denominator(self):
        # h(2) = -1/7 for the N=5 mod 8 family dies mod 7
        assert not FAMILIES["odd_5mod8"].valid_prime(7, 1)

    def test_even6_prime_filter_gates_grid_not_instantiation(self):
        fam = FAMILIES["even_6mod8"]
        # members at p = 3 (mod 4) are perfectly good curves (the FE corpus
        # uses them); only the condition-(C) grid excludes such primes
        assert fam.valid_prime(13, 0) and fam.valid_prime(7, 0)
        w = fam.W_set(7, 0)[0]
        assert global_invariants(fam.instantiate(7, 0, w)).epsilon == -1

    def test_W_set_membership(self):
        fam = FAMILIES["intro_N5"]
        p = 11
        W = fam.W_set(p, 0)
        F = PrimeField(p)
        delta = fam.base_curve(p, 0).delta
        for w in range(p):
            beta = F(3) + F(w) ** 2
            ok = bool(beta) and bool(delta(fam.h_mod_p(p, 0, w))) if beta \
                else False
            assert (w in W) == ok

    def test_odd5_W_empty_at_11(self):
        # h is even in u, so every w in F_11 collides with an f-root,
        # a discriminant zero, or the dead denominator
        assert FAMILIES["odd_5mod8"].W_set(11, 1) == []

    def test_instantiate_errors(self):
        fam = FAMILIES["case1_2ns"]
        with pytest.raises(ValueError):
            fam.instantiate(3, 2, 1)        # excluded prime
        p = 7
        bad_w = next(w for w in range(p) if w not in fam.W_set(p, 2))
        with pytest.raises(ValueError):
            fam.instantiate(p, 2, bad_w)

    def test_instantiate_is_twist_of_base(self):
        fam = FAMILIES["odd_3mod8"]
        p, n = 11, 1
        w = fam.W_set(p, n)[0]
        E = fam.instantiate(p, n, w)
        F = PrimeField(p)
        tw = Poly.t(F) - fam.h_mod_p(p, n, w)
        B = fam.base_curve(p, n)
        assert E.a4.coeffs == (B.a4 * tw ** 2).coeffs
        assert E.a6.coeffs == (B.a6 * tw ** 3).coeffs


class TestVerifyProfile:
    def test_intro_passes_with_waivers(self):
        rep = verify_profile("intro_N5", 0, [5, 7], max_w=2)
        assert rep.verdict and rep.waivers

    def test_odd_family_passes(self):
        rep = verify_profile("odd_3mod8", 1, [11, 17], max_w=2)
        assert rep.verdict and not rep.skipped_primes

    def test_case4_parity_profiles(self):
        for n, sym, gamma in ((2, "IV*", 42), (3, "II", 14)):
            rep = verify_profile("case4_7ns", n, [11, 13], max_w=2)
            assert rep.verdict
            for c in rep.cells:
                assert c["invariants"]["gamma"] == gamma
                assert sym in c["invariants"]["kodaira"]

    def test_even6_root_number_skip_reason(self):
        rep = verify_profile("even_6mod8", 0, [7, 13], max_w=2)
        assert rep.verdict
        assert rep.skipped_primes == [
            [7, "root number is -1 for every w at this prime"]]

    def test_case1_unattained_prime_fails(self):
        # the whole W(F_5) has root number -1, so condition (B) has no
        # attaining twist parameter there
        rep = verify_profile("case1_2ns", 2, [5])
        assert not rep.verdict
        assert rep.unattained == [[5, "no w with root number 1"]]
        assert all(all(c["checks"].values()) for c in rep.cells)

    def test_case1_passes_where_attained(self):
        rep = verify_profile("case1_2ns", 2, [7, 11], max_w=4)
        assert rep.verdict

    def test_skipped_primes_reported(self):
        rep = verify_profile("odd_5mod8", 1, [7, 11], max_w=1)
        reasons = dict((p, r) for p, r in rep.skipped_primes)
        assert "degenerate" in reasons[7]
        assert reasons[11] == "empty twist-parameter set W(F_p)"

    def test_parallel_matches_serial(self):
        a = verify_profile("even_4mod8", 1, [11, 17], max_w=2, jobs=1)
        b = verify_profile("even_4mod8", 1, [11, 17], max_w=2, jobs=2)
        assert a.to_json() == b.to_json()

    def test_kodaira_multiset_constant_over_w(self):
        rep = verify_profile("case2_3ns", 2, [11], max_w=None)
        assert rep.verdict and not rep.kodaira_mismatch


class TestEpsilonLaws:
    def test_intro_dichotomy(self):
        fam = FAMILIES["intro_N5"]
        for p in (5, 7, 11):
            for w in fam.W_set(p, 0)[:3]:
                assert epsilon_law_check(fam, p, 0, w) is True

    def test_case1_closed_form(self):
        fam = FAMILIES["case1_2ns"]
        for p in (7, 11):
            for w in fam.W_set(p, 2):
                assert epsilon_law_check(fam, p, 2, w) is True

    def test_even6_legendre_law(self):
        fam = FAMILIES["even_6mod8"]
        for w in fam.W_set(13, 0)[:4]:
            assert epsilon_law_check(fam, 13, 0, w) is True

    def test_no_law_returns_none(self):
        fam = FAMILIES["odd_1mod8"]
        w = fam.W_set(7, 1)[0]
        assert epsilon_law_check(fam, 7, 1, w) is None

    def test_negative_control_h_replaced_by_u(self):
        # replacing the twist map by h(u) = u destroys the square-class
        # telescoping, so the eps = 1 law must fail somewhere
        fam = dataclasses.replace(
            FAMILIES["even_0mod8"],
            h_pair=lambda n: ((Fraction(0), Fraction(1)), (Fraction(1),)))
        results = [epsilon_law_check(fam, 19, 1, w)
                   for w in fam.W_set(19, 1)[:8]]
        assert False in results

    def test_case4_swapped_h_breaks_law(self):
        # the opposite twist-map parity pairing leaves a stray (3/p),
        # which is -1 at p = 19
        def swapped(n):
            c = 14 if n % 2 == 0 else 42
            return ((Fraction(9 * c, 2),),
                    (Fraction(-4 * c), Fraction(0), Fraction(4)))
        fam = dataclasses.replace(FAMILIES["case4_7ns"], h_pair=swapped)
        w = fam.W_set(19, 2)[0]
        E = fam.instantiate(19, 2, w)
        assert global_invariants(E).epsilon == -1
        assert epsilon_law_check(FAMILIES["case4_7ns"], 19, 2,
                                 FAMILIES["case4_7ns"].W_set(19, 2)[0])


EVEN4_FILE = """\
# N = 4 mod 8 family
id = even_4_from_file
condition = C
nmin = 1
exclude = 6
h = [0, 0, -3] / [1]
f = h(i) : 1 .. 4n
a2 = []
a4 = [-27, 30, -3]
a6 = [54, -78, 26, -2]
"""


class TestFamilyFiles:
    def test_round_trip_matches_registered(self, tmp_path):
        path = tmp_path / "fam.txt"
        path.write_text(EVEN4_FILE)
        fam = load_family_file(path)
        ref = FAMILIES["even_4mod8"]
        assert fam.base_coeffs(1) == ref.base_coeffs(1)
        assert fam.W_set(11, 1) == ref.W_set(11, 1)
        assert fam.f_values(2) == ref.f_values(2)

    def test_loaded_family_verifies(self, tmp_path):
        path = tmp_path / "fam.txt"
        path.write_text(EVEN4_FILE)
        fam = load_family_file(path)
        rep = verify_profile(fam, 1, [11], max_w=2)
        # no expected profile in the file: only the recomputed hypotheses,
        # eps law and conditions are checked
        assert rep.verdict

    def test_missing_key_rejected(self, tmp_path):
        path = tmp_path / "fam.txt"
        path.write_text("id = x\ncondition = B\nh = [1]/[1]\n")
        with pytest.raises(ValueError):
            load_family_file(path)

    def test_bad_f_spec_rejected(self, tmp_path):
        path = tmp_path / "fam.txt"
        path.write_text(EVEN4_FILE.replace("f = h(i) : 1 .. 4n",
                                           "f = q(i) : 1 .. 4n"))
        with pytest.raises(ValueError):
            load_family_file(path)

    def test_g_required_when_used(self, tmp_path):
        path = tmp_path / "fam.txt"
        path.write_text(EVEN4_FILE.replace("f = h(i) : 1 .. 4n",
                                           "f = g(i) : 1 .. 4n"))
        with pytest.raises(ValueError):
            load_family_file(path)
