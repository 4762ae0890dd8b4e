import cmath
import math

import numpy as np
import pytest

from rittdyn.field import INF
from rittdyn.funcalg import Poly, RatFunc, power_map
from rittdyn.numerics import (
    LoopPath,
    TrackingError,
    aberth,
    all_roots,
    anchor_fiber,
    build_loops,
    track_fiber,
)
from rittdyn import _tracking_py

from oracles import chebyshev_dict, to_low_first_int_list

T3 = RatFunc(Poly(to_low_first_int_list(chebyshev_dict(3))))


def as_multiset(clusters):
    return sorted((round(c.point.re, 6), round(c.point.im, 6), c.multiplicity) for c in clusters)


class TestAllRoots:
    def test_quadratic(self):
        roots = all_roots(Poly([-1, 0, 1]))
        assert as_multiset(roots) == [(-1.0, 0.0, 1), (1.0, 0.0, 1)]

    def test_factored_cubic_against_exact_factorization(self):
        # z (z+1)^2 (5z+2): exact factorization is the oracle
        p = Poly([0, 1]) * Poly([1, 1]) ** 2 * Poly([2, 5])
        roots = all_roots(p)
        assert as_multiset(roots) == [(-1.0, 0.0, 2), (-0.4, 0.0, 1), (0.0, 0.0, 1)]

    def test_total_degeneracy(self):
        roots = all_roots(Poly.monomial(3))
        assert as_multiset(roots) == [(0.0, 0.0, 3)]

    def test_residuals_certified(self):
        # random-ish polynomial with mild coefficients
        p = Poly([3, -2, 0, 1, 5, 1])
        roots = all_roots(p, tol=1e-8)
        cc = p.to_complex_coeffs()
        for rc in roots:
            val = abs(np.polyval(cc[::-1], rc.point.value))
            scale = sum(abs(c) * max(1.0, abs(rc.point.value)) ** k for k, c in enumerate(cc))
            assert val <= 1e-8 * scale

    def test_gaussian_integer_roots(self):
        # (z-i)(z+i)(z-1) over Q(i)
        from rittdyn.field import gq

        p = Poly([gq(0, -1), gq(1), gq(0, -1), gq(1)])  # (z^2+1)(z - i) expanded
        roots = all_roots(p)
        vals = sorted((round(c.point.re, 8), round(c.point.im, 8)) for c in roots)
        assert vals == [(0.0, -1.0), (0.0, 1.0), (0.0, 1.0)] or len(roots) == 2


class TestAberth:
    def test_wilkinson_small(self):
        cs = [1.0]
        poly = np.poly(np.arange(1, 9))[::-1]  # roots 1..8, low-first
        roots = sorted(aberth(poly).real)
        assert np.allclose(roots, np.arange(1, 9), atol=1e-7)


def square_loop(center, radius):
    c = complex(center)
    pts = [c + radius, c + radius * 1j, c - radius, c - radius * 1j, c + radius]
    return LoopPath(tuple(pts), c)


class TestTrackFiber:
    def test_square_root_sheet_exchange(self):
        f = power_map(2)
        loop = LoopPath.keyhole(anchor=2.0, center=0.0, radius=0.5)
        fiber = anchor_fiber(f, 2.0)
        perm = track_fiber(f, loop, fiber)
        assert sorted(perm) == [0, 1] and perm != (0, 1)

    def test_cube_root_cycle(self):
        f = power_map(3)
        loop = LoopPath.keyhole(anchor=2.0, center=0.0, radius=0.5)
        fiber = anchor_fiber(f, 2.0)
        perm = track_fiber(f, loop, fiber)
        assert cycle_type(perm) == [3]

    def test_chebyshev_loop_matches_bruteforce_continuation(self):
        # oracle: waypoint-granularity continuation via numpy roots
        loop = LoopPath.keyhole(anchor=0.3 + 0.9j, center=1.0, radius=0.25)
        fiber = anchor_fiber(T3, loop.anchor)
        perm = track_fiber(T3, loop, fiber)
        assert cycle_type(perm) == [2, 1]
        assert perm == bruteforce_perm(T3, loop, fiber)

    def test_contractible_loop_identity(self):
        # square around the anchor itself: avoids the branch point at 0
        f = power_map(3)
        loop = square_loop(2.0, 0.3)
        fiber = anchor_fiber(f, 2.0 + 0.3)  # anchor of the square is c + radius
        perm = track_fiber(f, loop, fiber)
        assert perm == (0, 1, 2)

    def test_reversal_gives_inverse(self):
        loop = LoopPath.keyhole(anchor=0.3 + 0.9j, center=1.0, radius=0.25)
        fiber = anchor_fiber(T3, loop.anchor)
        p = track_fiber(T3, loop, fiber)
        q = track_fiber(T3, loop.reversed(), fiber)
        n = len(p)
        assert all(q[p[i]] == i for i in range(n))

    def test_kernels_agree(self):
        f = T3
        loop = LoopPath.keyhole(anchor=0.3 + 0.9j, center=-1.0, radius=0.25)
        fiber = anchor_fiber(f, loop.anchor)
        from rittdyn import numerics

        perm_active = track_fiber(f, loop, fiber)
        saved = numerics._kernel
        try:
            numerics._kernel = _tracking_py
            perm_pure = track_fiber(f, loop, fiber)
        finally:
            numerics._kernel = saved
        assert perm_active == perm_pure

    def test_separation_precondition(self):
        f = power_map(2)
        loop = LoopPath.keyhole(anchor=2.0, center=0.0, radius=0.5)
        with pytest.raises(TrackingError):
            track_fiber(f, loop, [1.0 + 0j, 1.0 + 1e-13j])


def cycle_type(perm):
    n = len(perm)
    seen = [False] * n
    out = []
    for i in range(n):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        out.append(length)
    return sorted(out, reverse=True)


def bruteforce_perm(f, loop, fiber):
    """Waypoint-by-waypoint nearest-point continuation using numpy roots."""
    pn, pd = f.numeric_coeffs()
    d = max(len(pn), len(pd))
    pn = pn + [0j] * (d - len(pn))
    pd = pd + [0j] * (d - len(pd))
    current = [s.value if hasattr(s, "value") else complex(s) for s in fiber]
    start = list(current)
    for w in loop.waypoints[1:]:
        cs = [a - w * b for a, b in zip(pn, pd)][::-1]
        roots = list(np.roots(cs))
        nxt = []
        for z in current:
            k = min(range(len(roots)), key=lambda t: abs(roots[t] - z))
            nxt.append(roots.pop(k))
        current = nxt
    perm = []
    for z in current:
        perm.append(min(range(len(start)), key=lambda t: abs(start[t] - z)))
    return tuple(perm)


class TestLoops:
    def test_build_loops_closed_and_ordered(self):
        sys0 = build_loops([1.0, -1.0], include_inf=True, seed=0)
        assert len(sys0.loops) == 3
        for loop in sys0.loops:
            assert loop.waypoints[0] == loop.waypoints[-1] == sys0.anchor
        assert sys0.values[-1] is INF

    def test_determinism(self):
        a = build_loops([1.0, -1.0, 3.0 + 1.0j], include_inf=False, seed=5)
        b = build_loops([1.0, -1.0, 3.0 + 1.0j], include_inf=False, seed=5)
        assert a.anchor == b.anchor
        assert all(x.waypoints == y.waypoints for x, y in zip(a.loops, b.loops))
