"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines as they complete.
"""

import functools
import json
import math
import random
import time
from fractions import Fraction

import pytest

from rittdyn import corpus
from rittdyn.cli import execute
from rittdyn.decomp import (
    divide_left,
    engstrom_split,
    induced_stabilization,
    poly_decompose,
)
from rittdyn.dynamics import (
    chebyshev,
    common_iterate_search,
    d_family,
    make_family,
    orbit_intersect,
    prime_set_check,
)
from rittdyn.field import UNITS, gq
from rittdyn.fiberprod import bound_c1, bound_c2, check_bound, curve_components, genus_bound, tameness
from rittdyn.funcalg import Mobius, Poly, RatFunc, compose, equal_exact, power_map
from rittdyn.monodromy import group_order, monodromy
from rittdyn.orbifold import (
    GenusClass,
    euler_characteristic,
    normalization_genus_class,
    nu_pair,
    ramification_portrait,
)
from rittdyn import permgrp

Z = RatFunc.x()


def criterion(num, title):
    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException:
                print(f"ACCEPTANCE {num:02d} {title}: FAIL")
                raise
            print(f"ACCEPTANCE {num:02d} {title}: PASS")

        return run

    return wrap


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


@criterion(1, "degree-2 wildness")
def test_criterion_01_degree_two_wildness():
    rng = random.Random(20260808)
    t0 = time.perf_counter()
    for k in range(20):
        f = random_deg2(rng)
        rep = tameness(f, seed=0)
        assert rep.verdict == "wild", f"sample {k} ({f!r}) not wild"
        witnesses = [
            c for c in rep.components if not c.is_diagonal and c.genus == 0
        ]
        assert witnesses, f"sample {k} has no non-diagonal genus-0 component"
        assert all(isinstance(c.genus, int) for c in rep.components)
    elapsed = time.perf_counter() - t0
    assert elapsed <= 10.0, f"took {elapsed:.1f}s (limit 10s)"


@criterion(2, "A_23 worked example")
def test_criterion_02_a23_example():
    t0 = time.perf_counter()
    a = (Z**2) * ((Z + 1) ** 3)
    x = (1 - Z**2) / (Z**5 - 1)
    z_par = (Z**3) * x
    # (a) shared composition
    assert equal_exact(compose(a, x), compose(a, z_par))
    # (b) Z = X o (1/z)
    assert equal_exact(z_par, compose(x, power_map(-1)))
    # (c) signature and chi
    _, o2 = nu_pair(a)
    assert o2.signature() == (6, 5, 2)
    assert euler_characteristic(o2) == Fraction(-2, 15)
    # (d) normalization class
    assert normalization_genus_class(a) is GenusClass.GREATER_THAN_ONE
    # (e) curve components
    comps = curve_components(a, a, seed=0)
    assert len(comps) == 2
    diag = [c for c in comps if c.is_diagonal]
    other = [c for c in comps if not c.is_diagonal]
    assert len(diag) == 1 and len(other) == 1
    assert other[0].genus == 0 and other[0].total_degree == 20
    elapsed = time.perf_counter() - t0
    assert elapsed <= 30.0, f"took {elapsed:.1f}s (limit 30s)"


@criterion(3, "orbifold classifier")
def test_criterion_03_classifier():
    for n in range(2, 9):
        assert normalization_genus_class(power_map(n)) is GenusClass.ZERO
        assert normalization_genus_class(chebyshev(n)) is GenusClass.ZERO
    lattes = make_family("lattes_sample")
    _, o2 = nu_pair(lattes)
    assert normalization_genus_class(lattes) is GenusClass.ONE
    assert o2.signature() == (2, 2, 2, 2)
    a23 = (Z**2) * ((Z + 1) ** 3)
    assert normalization_genus_class(a23) is GenusClass.GREATER_THAN_ONE


@criterion(4, "monodromy validity gates")
def test_criterion_04_monodromy_gates():
    t0 = time.perf_counter()
    for name, f in sorted(corpus.functions().items()):
        if f.degree > 8:
            continue
        port = ramification_portrait(f)
        m = monodromy(f, seed=0, portrait=port)
        # product-one
        prod = permgrp.mult_all(m.permutations, m.degree)
        assert permgrp.is_identity(prod), f"product-one fails for {name}"
        # transitivity
        assert permgrp.is_transitive(m.generators(), m.degree), f"transitivity fails for {name}"
        # cycle types agree with the portrait
        for v, p in zip(m.branch_points, m.permutations):
            assert permgrp.cycle_type(p) == tuple(port.partition_at(v)), (
                f"cycle type mismatch for {name} over {v}"
            )
    for n in range(2, 9):
        assert group_order(monodromy(power_map(n), seed=0)) == n
    assert group_order(monodromy(chebyshev(3), seed=0)) == 6
    elapsed = time.perf_counter() - t0
    assert elapsed <= 60.0, f"took {elapsed:.1f}s (limit 60s)"


@criterion(5, "decomposition suite")
def test_criterion_05_decompositions():
    # z^6 and T6: exactly two nontrivial classes each
    for f in (power_map(6), chebyshev(6)):
        classes = [c for c in poly_decompose(f) if not c.is_trivial]
        assert len(classes) == 2
        assert sorted(c.degrees() for c in classes) == [(2, 3), (3, 2)]
        for c in classes:
            assert equal_exact(c.recompose(), f)

    # Engstrom splitting on 10 constructed instances
    rng = random.Random(77)
    count = 0
    while count < 10:
        u = Poly([gq(rng.randint(-2, 2)), gq(rng.randint(-2, 2)), gq(1)])
        a_t = Poly([0, gq(rng.randint(-2, 2)), gq(1)])
        d_t = Poly([0, gq(rng.randint(-2, 2)), gq(1)])
        v = Poly([0, gq(rng.randint(-2, 2)), gq(1)])
        a = RatFunc(u.compose(a_t))
        d = RatFunc(u.compose(d_t))
        c = RatFunc(d_t.compose(v))
        b = RatFunc(a_t.compose(v))
        if not equal_exact(compose(a, c), compose(d, b)):
            continue
        uu, vv, at2, ct2, dt2, bt2 = engstrom_split(a, c, d, b)
        assert uu.degree == math.gcd(a.degree, d.degree)
        assert vv.degree == math.gcd(c.degree, b.degree)
        assert equal_exact(compose(uu, at2), a)
        assert equal_exact(compose(uu, dt2), d)
        assert equal_exact(compose(ct2, vv), c)
        assert equal_exact(compose(bt2, vv), b)
        assert equal_exact(compose(at2, ct2), compose(dt2, bt2))
        count += 1

    # divide_left round trips on 20 random polynomial pairs
    rng = random.Random(99)
    done = 0
    while done < 20:
        d_p = Poly([gq(rng.randint(-3, 3)) for _ in range(rng.randint(2, 3))] + [gq(rng.randint(1, 3))])
        r_p = Poly([gq(rng.randint(-3, 3)) for _ in range(rng.randint(2, 3))] + [gq(rng.randint(1, 3))])
        if d_p.degree < 1 or r_p.degree < 1 or d_p.degree + r_p.degree < 3:
            continue
        a = RatFunc(d_p.compose(r_p))
        got = divide_left(a, RatFunc(d_p))
        assert got is not None
        assert equal_exact(compose(RatFunc(d_p), got), a)
        done += 1


@criterion(6, "stabilization of iterates")
def test_criterion_06_stabilization():
    t0 = time.perf_counter()
    rep = induced_stabilization(Z**2 + 1, 3, seed=0)
    assert rep.stable_n == 1
    assert rep.status == "stabilized"
    for d in (2, 3):
        for info in rep.levels[d]:
            assert 1 in info.induced_from, f"level-{d} class not induced from level 1"

    rep6 = induced_stabilization(power_map(6), 2, seed=0)
    assert rep6.status == "not stabilized"
    not_induced = [i for i in rep6.levels[2] if 1 not in i.induced_from]
    assert not_induced, "z^6 must report non-induced classes at level 2"
    elapsed = time.perf_counter() - t0
    assert elapsed <= 60.0, f"took {elapsed:.1f}s (limit 60s)"


@criterion(7, "bound formulas and the dichotomy")
def test_criterion_07_bounds():
    assert genus_bound(3, 6) == Fraction(-83, 84)
    assert bound_c1(3) == 504
    assert abs(bound_c2(3) - math.log2(1008)) < 1e-12

    # dichotomy across every component the suite computes with a tame left function
    tame4 = corpus.get("tame4")
    assert tameness(tame4, seed=0).is_tame
    pairs = [
        (tame4, compose(tame4, power_map(2))),  # graph case B = A o S
        (tame4, power_map(5)),
        (tame4, chebyshev(3)),
        (tame4, tame4),
    ]
    for a, b in pairs:
        rep = check_bound(a, b, seed=0)
        assert rep.all_hold, f"dichotomy fails for ({a!r}, {b!r})"
    graph_rep = check_bound(tame4, compose(tame4, power_map(2)), seed=0)
    assert graph_rep.graph_witness is not None
    assert any(ch.is_graph and ch.component.deg_y == 1 for ch in graph_rep.checks)


@criterion(8, "dynamics experiments")
def test_criterion_08_dynamics():
    t0 = time.perf_counter()
    rep = orbit_intersect(power_map(2), gq(2), power_map(4), gq(2), 8)
    assert {(k, l) for k, l, _ in rep.matches} == {(0, 0)} | {(2 * l, l) for l in range(1, 5)}

    rep23 = orbit_intersect(power_map(2), gq(2), power_map(3), gq(2), 8)
    assert {(k, l) for k, l, _ in rep23.matches} == {(0, 0)}

    assert common_iterate_search(power_map(2), power_map(8), 5) == (3, 1)

    # prime-set consistency over the experiment corpus
    experiments = [
        (power_map(2), gq(2), power_map(4), gq(2)),
        (power_map(2), gq(2), power_map(3), gq(2)),
        (power_map(2), gq(2), power_map(8), gq(2)),
        (Z**2 + 1, gq(0), Z**2 + 2, gq(0)),
        (chebyshev(2), gq(3), chebyshev(4), gq(3)),
        (power_map(3), gq(2), power_map(9), gq(2)),
        (chebyshev(2), gq(2), chebyshev(3), gq(2)),
        (Z**2 - 1, gq(0), Z**2 + 1, gq(0)),
    ]
    for a, x1, b, x2 in experiments:
        rep = orbit_intersect(a, x1, b, x2, 12)
        if len(rep.matches) >= 5:
            assert prime_set_check(a, b), (
                f"{len(rep.matches)} matches but prime sets differ for ({a!r}, {b!r})"
            )
    elapsed = time.perf_counter() - t0
    assert elapsed <= 30.0, f"took {elapsed:.1f}s (limit 30s)"


@criterion(9, "identity suite")
def test_criterion_09_identities():
    for m in range(2, 13):
        for n in range(2, 13):
            if m * n <= 24:
                assert equal_exact(compose(chebyshev(m), chebyshev(n)), chebyshev(m * n))
    for l in range(1, 9):
        for d in range(1, l + 1):
            if l % d == 0:
                assert equal_exact(compose(d_family(l // d), power_map(d)), d_family(l))
    # half-angle family against Chebyshev, over Q(i) where the unit applies
    for l in range(2, 9):
        for d in range(1, l):
            if l % d:
                continue
            for eps in UNITS:
                if eps ** (2 * l) == gq(1):
                    scaled = compose(d_family(d), RatFunc(Poly((0, eps))))
                    rhs = RatFunc.const(eps**l) * compose(chebyshev(l // d), scaled)
                    assert equal_exact(d_family(l), rhs)
    for n in (2, 3, 5, 8):
        tn = chebyshev(n)
        for k in range(100):
            t = (k + 0.37) / 100.0
            lhs = tn.eval_complex(complex(math.cos(2 * math.pi * t)))
            assert abs(lhs - math.cos(2 * math.pi * n * t)) < 1e-10


@criterion(10, "determinism")
def test_criterion_10_determinism(capsys):
    # identical seeds give byte-identical JSON (timing aside)
    for argv in (
        ["monodromy", "a_23", "--seed", "3", "--json"],
        ["tame", "jk", "--seed", "1", "--json"],
        ["decompose", "t6", "--seed", "2", "--json"],
    ):
        outs = []
        for _ in range(2):
            assert execute(argv) == 0
            out = capsys.readouterr().out
            outs.append(out[: out.rindex(', "timing_ms"')])
        assert outs[0] == outs[1], f"nondeterministic output for {argv}"

    # genus and component counts invariant across three seeds
    for name in ("a_23", "jk", "z6", "t4", "tame4"):
        f = corpus.get(name)
        shapes = set()
        for seed in (0, 1, 2):
            comps = curve_components(f, f, seed=seed)
            shapes.add(tuple(sorted((c.total_degree, c.genus, c.is_diagonal) for c in comps)))
        assert len(shapes) == 1, f"component data varies across seeds for {name}"
