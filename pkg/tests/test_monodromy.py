import math
import random

import pytest

from rittdyn.field import INF, gq
from rittdyn.funcalg import Mobius, Poly, RatFunc, compose, iterate, power_map
from rittdyn.monodromy import MonodromyError, group_order, monodromy, monodromy_pair
from rittdyn.orbifold import ramification_portrait
from rittdyn import permgrp

from oracles import chebyshev_dict, to_low_first_int_list

Z = RatFunc.x()
T3 = RatFunc(Poly(to_low_first_int_list(chebyshev_dict(3))))


class TestMonodromy:
    def test_power_maps_two_cycles(self):
        for n in (2, 3, 5):
            m = monodromy(power_map(n), seed=0)
            assert len(m.permutations) == 2
            assert all(permgrp.cycle_type(p) == (n,) for p in m.permutations)
            assert permgrp.is_identity(permgrp.mult_all(m.permutations, n))

    def test_t3_shapes(self):
        m = monodromy(T3, seed=0)
        types = sorted(permgrp.cycle_type(p) for p in m.permutations)
        assert types == [(2, 1), (2, 1), (3,)]

    def test_a23_matches_portrait(self):
        f = (Z**2) * ((Z + 1) ** 3)
        port = ramification_portrait(f)
        m = monodromy(f, seed=0, portrait=port)
        for v, p in zip(m.branch_points, m.permutations):
            assert permgrp.cycle_type(p) == tuple(port.partition_at(v))

    def test_extra_branch_points_give_identity(self):
        f = power_map(2)
        m = monodromy(f, branch_set=[gq(0), INF, gq(5), gq(0, 3)], seed=0)
        extra = [p for v, p in zip(m.branch_points, m.permutations)
                 if isinstance(v, gq(5).__class__) and v in (gq(5), gq(0, 3))]
        assert extra and all(permgrp.is_identity(p) for p in extra)

    def test_missing_branch_point_rejected(self):
        with pytest.raises(MonodromyError):
            monodromy(power_map(2), branch_set=[INF, gq(7)], seed=0)

    def test_seed_invariance_of_structure(self):
        f = (Z**2) * ((Z + 1) ** 3)
        orders = set()
        typesets = set()
        for seed in (0, 1, 2):
            m = monodromy(f, seed=seed)
            orders.add(group_order(m))
            typesets.add(tuple(sorted(permgrp.cycle_type(p) for p in m.permutations)))
        assert len(orders) == 1 and len(typesets) == 1


class TestGroupOrder:
    def test_cyclic(self):
        for n in range(2, 9):
            assert group_order(monodromy(power_map(n), seed=0)) == n

    def test_t3_full_symmetric(self):
        assert group_order(monodromy(T3, seed=0)) == 6

    def test_generic_quartic_is_symmetric(self):
        # degree 4 with simple critical values generates S4
        rng = random.Random(11)
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
                break
        assert group_order(monodromy(f, seed=0)) == 24

    def test_cap_sentinel(self):
        m = monodromy(T3, seed=0)
        assert group_order(m, cap=5) == "exceeds cap"
        assert group_order(m, cap=6) == 6

    def test_divisibility_sandwich(self):
        for f in (power_map(4), T3, (Z**2) * ((Z + 1) ** 3)):
            m = monodromy(f, seed=0)
            order = group_order(m)
            assert order % f.degree == 0
            assert math.factorial(f.degree) % order == 0


class TestSharedBranchSet:
    def test_pair_shares_base_and_loops(self):
        ma, mb = monodromy_pair(power_map(2), T3, seed=0)
        assert ma.base_point == mb.base_point
        assert len(ma.branch_points) == len(mb.branch_points)

    def test_same_function_shares_labels(self):
        f = (Z**2) * ((Z + 1) ** 3)
        ma, mb = monodromy_pair(f, f, seed=0)
        assert ma is mb


class TestIteratedCurveGenera:
    def test_power_family_keeps_low_genus_components(self):
        # U = z^s o mu: every curve C_(A^d, U), d <= 3, has a genus <= 1 part
        a = power_map(2)
        u = compose(power_map(3), Mobius(1, 1, 0, 1).to_ratfunc())
        from rittdyn.fiberprod import curve_components

        for d in (1, 2, 3):
            comps = curve_components(iterate(a, d), u, seed=0)
            assert any(c.genus <= 1 for c in comps)

    def test_outside_family_gains_genus(self):
        # U = z^3 + z at matched degree: some d <= 3 has all non-graph
        # components of genus >= 2
        a = power_map(2)
        u = Z**3 + Z
        from rittdyn.fiberprod import curve_components
        from rittdyn.decomp import divide_left

        witnessed = False
        for d in (1, 2, 3):
            comps = curve_components(iterate(a, d), u, seed=0)
            non_graph = [c for c in comps if not (c.deg_y == 1 and divide_left(u, iterate(a, d)))]
            if non_graph and all(c.genus >= 2 for c in non_graph):
                witnessed = True
                break
        assert witnessed
