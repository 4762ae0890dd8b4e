import math
import random
from fractions import Fraction

import pytest

from rittdyn.field import gq
from rittdyn.fiberprod import (
    bound_c1,
    bound_c2,
    check_bound,
    curve_components,
    genus_bound,
    tameness,
)
from rittdyn.funcalg import Poly, RatFunc, compose, power_map
from rittdyn.orbifold import ramification_portrait

Z = RatFunc.x()


def a23():
    return (Z**2) * ((Z + 1) ** 3)


def random_deg2(rng):
    while True:
        num = Poly([gq(rng.randint(-3, 3), rng.randint(-3, 3)) for _ in range(3)])
        den = Poly([gq(rng.randint(-3, 3), rng.randint(-3, 3)) for _ in range(3)])
        if num.is_zero() or den.is_zero():
            continue
        try:
            f = RatFunc(num, den)
        except ZeroDivisionError:
            continue
        if f.degree == 2:
            return f


def sampled_tame_quartic(rng):
    """A degree-4 rational function with only simple critical values."""
    while True:
        num = Poly([gq(rng.randint(-3, 3)) for _ in range(5)])
        den = Poly([gq(rng.randint(-2, 2)) for _ in range(3)])
        if num.is_zero() or den.is_zero():
            continue
        try:
            f = RatFunc(num, den)
        except ZeroDivisionError:
            continue
        if f.degree != 4:
            continue
        try:
            port = ramification_portrait(f)
        except Exception:
            continue
        if all(tuple(e.partition) == (2, 1, 1) for e in port.branch_points):
            return f


class TestCurveComponents:
    def test_squared_pair(self):
        # z^2 - y^2 = (x - y)(x + y): diagonal plus one more genus-0 piece
        comps = curve_components(power_map(2), power_map(2), seed=0)
        assert len(comps) == 2
        assert comps[0].is_diagonal and comps[0].genus == 0
        assert comps[0].deg_x == comps[0].deg_y == 1
        assert not comps[1].is_diagonal and comps[1].genus == 0

    def test_power_vs_cube(self):
        # x^2 = y^3 is irreducible (cuspidal cubic), genus 0; orbit size 6
        comps = curve_components(power_map(2), power_map(3), seed=0)
        assert len(comps) == 1
        c = comps[0]
        assert c.total_degree == 6 and c.genus == 0
        assert c.deg_x == 3 and c.deg_y == 2
        assert not c.is_diagonal

    def test_a23_self_curve(self):
        comps = curve_components(a23(), a23(), seed=0)
        assert len(comps) == 2
        diag = [c for c in comps if c.is_diagonal]
        rest = [c for c in comps if not c.is_diagonal]
        assert len(diag) == 1 and len(rest) == 1
        assert diag[0].genus == 0 and diag[0].deg_x == diag[0].deg_y == 1
        assert rest[0].genus == 0
        assert rest[0].total_degree == 20

    def test_degree_sum_invariant(self):
        comps = curve_components(power_map(4), power_map(6), seed=0)
        assert sum(c.total_degree for c in comps) == 24

    def test_seed_invariance_of_genera(self):
        for a, b in ((power_map(2), power_map(3)), (a23(), a23())):
            shapes = set()
            for seed in (0, 1, 2):
                comps = curve_components(a, b, seed=seed)
                shapes.add(tuple(sorted((c.total_degree, c.genus) for c in comps)))
            assert len(shapes) == 1

    def test_swap_symmetry(self):
        ab = curve_components(power_map(2), a23(), seed=0)
        ba = curve_components(a23(), power_map(2), seed=0)
        assert sorted((c.total_degree, c.genus) for c in ab) == sorted(
            (c.total_degree, c.genus) for c in ba
        )


class TestTameness:
    def test_degree_two_always_wild(self):
        rng = random.Random(7)
        for _ in range(5):
            f = random_deg2(rng)
            rep = tameness(f, seed=0)
            assert rep.verdict == "wild"
            assert 0 in rep.genera
            assert rep.fast_path is not None

    def test_joukowski_like(self):
        # z + 1/z: the non-diagonal factor is x y = 1, genus 0
        f = Z + 1 / Z
        rep = tameness(f, seed=0)
        assert rep.verdict == "wild"
        assert rep.genera == (0,)

    def test_a23_wild_with_genus_zero_component(self):
        rep = tameness(a23(), seed=0)
        assert rep.verdict == "wild"
        assert rep.genera == (0,)
        # indecomposable and class > 1: no fast path available
        assert rep.fast_path is None

    def test_sampled_tame_quartic(self):
        rng = random.Random(11)
        f = sampled_tame_quartic(rng)
        rep = tameness(f, seed=0)
        assert rep.verdict == "tame"
        assert all(g >= 2 for g in rep.genera)


class TestBounds:
    def test_genus_bound_value(self):
        assert genus_bound(3, 6) == Fraction(-83, 84)

    def test_c1(self):
        assert bound_c1(3) == 504

    def test_c2(self):
        assert abs(bound_c2(3) - math.log2(1008)) < 1e-12

    def test_preconditions(self):
        with pytest.raises(ValueError):
            genus_bound(2, 6)

    def test_graph_dichotomy(self):
        rng = random.Random(11)
        a = sampled_tame_quartic(rng)
        b = compose(a, power_map(2))
        rep = check_bound(a, b, seed=0)
        assert rep.all_hold
        assert rep.graph_witness is not None
        graphs = [ch for ch in rep.checks if ch.is_graph]
        assert graphs and all(ch.component.deg_y == 1 for ch in graphs)

    def test_dichotomy_generic_pair(self):
        rng = random.Random(11)
        a = sampled_tame_quartic(rng)
        rep = check_bound(a, power_map(5), seed=0)
        assert rep.all_hold
