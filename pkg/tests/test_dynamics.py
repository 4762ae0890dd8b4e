import math
import random
from fractions import Fraction

import pytest

from rittdyn.field import INF, gq
from rittdyn.funcalg import Mobius, Poly, RatFunc, compose, conjugate, equal_exact, power_map
from rittdyn.orbifold import (
    GenusClass,
    euler_characteristic,
    normalization_genus_class,
    nu_pair,
)
from rittdyn.dynamics import (
    chebyshev,
    common_iterate_search,
    d_family,
    lattes_doubling,
    make_family,
    orbit,
    orbit_intersect,
    prime_set_check,
    special_detect,
)

from oracles import chebyshev_dict, to_low_first_int_list

Z = RatFunc.x()


class TestFamilies:
    def test_chebyshev_matches_recurrence_oracle(self):
        for n in range(1, 9):
            expected = to_low_first_int_list(chebyshev_dict(n))
            assert chebyshev(n) == RatFunc(Poly(expected))

    def test_d1(self):
        assert equal_exact(d_family(1), (Z**2 + 1) / (2 * Z))

    def test_power_negative(self):
        assert equal_exact(make_family("power", -2), 1 / Z**2)

    def test_lattes_sample_is_degree_9_class_one(self):
        f = make_family("lattes_sample")
        assert f.degree == 9
        _, o2 = nu_pair(f)
        assert o2.signature() == (2, 2, 2, 2)
        assert euler_characteristic(o2) == 0
        assert normalization_genus_class(f) is GenusClass.ONE

    def test_chebyshev_cosine_semiconjugacy(self):
        # |T_n(cos 2 pi t) - cos 2 pi n t| < 1e-10 on 100 samples
        for n in (3, 5, 8):
            tn = chebyshev(n)
            for k in range(100):
                t = (k + 0.5) / 100.0
                lhs = tn.eval_complex(complex(math.cos(2 * math.pi * t)))
                rhs = math.cos(2 * math.pi * n * t)
                assert abs(lhs - rhs) < 1e-10


class TestIdentities:
    def test_chebyshev_multiplicativity(self):
        for m in range(2, 13):
            for n in range(2, 13):
                if m * n <= 24:
                    assert equal_exact(compose(chebyshev(m), chebyshev(n)), chebyshev(m * n))

    def test_d_power_identity(self):
        # D_l = D_(l/d) o z^d for every divisor d of l <= 8
        for l in range(1, 9):
            for d in range(1, l + 1):
                if l % d == 0:
                    assert equal_exact(compose(d_family(l // d), power_map(d)), d_family(l))

    def test_d_chebyshev_identity(self):
        # D_l = eps^l T_(l/d) o D_d(eps z) for eps in Q(i) with eps^(2l) = 1
        from rittdyn.field import UNITS

        for l in range(2, 9):
            for d in range(1, l):
                if l % d != 0:
                    continue
                for eps in UNITS:
                    if not (eps ** (2 * l) == gq(1)):
                        continue
                    scaled = compose(d_family(d), RatFunc(Poly((0, eps))))
                    rhs = RatFunc.const(eps**l) * compose(chebyshev(l // d), scaled)
                    assert equal_exact(d_family(l), rhs)


class TestSpecialDetect:
    def test_power_round_trip(self):
        mu = Mobius(2, 1, 0, 1)  # 2z + 1
        f = conjugate(power_map(3), mu)
        verdict = special_detect(f)
        assert verdict.kind == "power_conjugate"
        assert verdict.witness["exponent"] == 3

    def test_reciprocal_power(self):
        verdict = special_detect(power_map(-2))
        assert verdict.kind == "power_conjugate"
        assert verdict.witness["exponent"] == -2

    def test_chebyshev_detected(self):
        for n in (2, 3, 4, 6):
            verdict = special_detect(chebyshev(n))
            assert verdict.kind == "chebyshev_conjugate"
            assert verdict.witness["sign"] == 1

    def test_negative_chebyshev(self):
        verdict = special_detect(-1 * chebyshev(5))
        assert verdict.kind == "chebyshev_conjugate"

    def test_conjugated_chebyshev_with_irrational_witness(self):
        # 2z^3 - 3z = T3 conjugated by z/sqrt(2): still detected exactly
        f = RatFunc(Poly([0, -3, 0, 2]))
        verdict = special_detect(f)
        assert verdict.kind == "chebyshev_conjugate"

    def test_cubic_non_special(self):
        assert special_detect(Z**3 + Z).kind == "non_special"

    def test_lattes_candidates(self):
        for f in (make_family("lattes_sample"), lattes_doubling()):
            verdict = special_detect(f)
            assert verdict.kind == "lattes_candidate"
            assert verdict.witness["signature"] == (2, 2, 2, 2)

    def test_conjugation_invariance(self):
        rng = random.Random(4)
        samples = [
            power_map(4),
            chebyshev(3),
            lattes_doubling(),
            Z**3 + Z,
        ]
        for f in samples:
            base = special_detect(f).kind
            for _ in range(3):
                while True:
                    a, b, c, d = (gq(rng.randint(-2, 2), rng.randint(-1, 1)) for _ in range(4))
                    if not (a * d - b * c).is_zero():
                        break
                g = conjugate(f, Mobius(a, b, c, d))
                assert special_detect(g).kind == base


class TestOrbits:
    def test_simple_power_orbit(self):
        rec = orbit(power_map(2), gq(2), 5)
        assert [p.re for p in rec.points] == [2, 4, 16, 256, 65536, 4294967296]

    def test_preperiodic_detection(self):
        # 0 -> -1 -> 0 under z^2 - 1
        rec = orbit(Z**2 - 1, gq(0), 10)
        assert rec.preperiodic == (0, 2)

    def test_infinity_is_first_class(self):
        rec = orbit(power_map(2), INF, 4)
        assert rec.preperiodic == (0, 1)

    def test_bit_cap_truncates(self):
        rec = orbit(power_map(2), gq(2), 40, bit_cap=100)
        assert rec.truncated


class TestIntersect:
    def test_power_tower_matches(self):
        rep = orbit_intersect(power_map(2), gq(2), power_map(4), gq(2), 8)
        expected = {(0, 0)} | {(2 * l, l) for l in range(1, 5)}
        assert {(k, l) for k, l, _ in rep.matches} == expected

    def test_two_vs_three_towers(self):
        rep = orbit_intersect(power_map(2), gq(2), power_map(3), gq(2), 8)
        assert {(k, l) for k, l, _ in rep.matches} == {(0, 0)}
        assert "no match" not in rep.within_horizon_note

    def test_quadratic_family_finite(self):
        # starts differ immediately, so the match list stays small and finite
        rep = orbit_intersect(Z**2 + 1, gq(0), Z**2 + 2, gq(0), 10)
        assert len(rep.matches) <= 2

    def test_note_wording(self):
        rep = orbit_intersect(Z**2 + 1, gq(5), Z**2 + 2, gq(7), 6)
        if not rep.matches:
            assert rep.within_horizon_note == "no match within horizon 6"


class TestCommonIterate:
    def test_power_towers(self):
        assert common_iterate_search(power_map(2), power_map(8), 5) == (3, 1)

    def test_chebyshev_mismatch(self):
        assert common_iterate_search(chebyshev(2), chebyshev(3), 6) is None

    def test_iterate_pair(self):
        f = Z**2 + 1
        from rittdyn.funcalg import iterate

        assert common_iterate_search(f, iterate(f, 2), 4) == (2, 1)


class TestPrimeSets:
    def test_examples(self):
        assert prime_set_check(power_map(6), compose(power_map(6), power_map(2)))
        assert not prime_set_check(power_map(4), power_map(6))
        assert prime_set_check(power_map(8), power_map(2))
