"""Components and genera of the curve A(x) - B(y) = 0, tameness verdicts,
and the genus lower-bound formulas with their dichotomy check.

Components are never computed by symbolic bivariate factorization: they are
the orbits of the diagonal monodromy action on pair labels, computed over a
shared branch set with a shared base point, and each genus comes from
Riemann-Hurwitz applied to the cycle structure on the orbit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .funcalg import RatFunc, compose, equal_exact
from .monodromy import MonodromyData, monodromy_pair
from .orbifold import GenusClass, normalization_genus_class, ramification_portrait
from . import decomp, permgrp


class FiberProductError(RuntimeError):
    pass


@dataclass(frozen=True)
class FiberComponent:
    """One irreducible component of the fiber product of A and B."""

    pair_orbit: tuple  # sorted tuple of (i, j) labels
    total_degree: int
    deg_x: int  # degree of the projection to the source of A
    deg_y: int  # degree of the projection to the source of B
    genus: int
    is_diagonal: bool


def _diagonal_orbits(ma: MonodromyData, mb: MonodromyData):
    n, m = ma.degree, mb.degree
    perms = []
    for pa, pb in zip(ma.permutations, mb.permutations):
        perms.append(tuple(pa[p // m] * m + pb[p % m] for p in range(n * m)))
    orbs = permgrp.orbits(perms, n * m)
    return perms, orbs


def curve_components(a: RatFunc, b: RatFunc, seed: int = 0) -> list:
    """Irreducible components of A(x) - B(y) = 0 with exact genera.

    The two monodromies run over the union branch set from one base point;
    components are the orbits of the diagonal action on pair labels, and
    each genus comes from the cycle counts of the action on that orbit.
    """
    if a.degree < 2 or b.degree < 2:
        raise ValueError("curve components need degrees >= 2")
    ma, mb = monodromy_pair(a, b, seed=seed)
    return components_from_monodromy(ma, mb)


def components_from_monodromy(ma: MonodromyData, mb: MonodromyData) -> list:
    n, m = ma.degree, mb.degree
    perms, orbs = _diagonal_orbits(ma, mb)
    same = ma is mb
    out = []
    total = 0
    for orb in orbs:
        size = len(orb)
        total += size
        if size % n or size % m:
            raise FiberProductError(
                f"orbit size {size} is not divisible by both degrees {n}, {m}"
            )
        index = {p: k for k, p in enumerate(orb)}
        chi = 2 * size
        for g in perms:
            restricted = tuple(index[g[p]] for p in orb)
            chi -= size - permgrp.cycle_count(restricted)
        if chi % 2:
            raise FiberProductError("odd Euler characteristic on a component")
        genus = 1 - chi // 2
        if genus < 0:
            raise FiberProductError(
                f"negative genus {genus} on an orbit of size {size}"
            )
        is_diag = same and all(p // m == p % m for p in orb)
        out.append(
            FiberComponent(
                pair_orbit=tuple((p // m, p % m) for p in orb),
                total_degree=size,
                deg_x=size // n,
                deg_y=size // m,
                genus=genus,
                is_diagonal=is_diag,
            )
        )
    if total != n * m:
        raise FiberProductError("orbits do not partition the pair labels")
    out.sort(key=lambda c: (not c.is_diagonal, c.total_degree, c.pair_orbit))
    return out


@dataclass(frozen=True)
class TamenessReport:
    verdict: str  # "tame" | "wild"
    components: tuple  # FiberComponent list for A(x) - A(y) = 0
    genera: tuple  # genera of the non-diagonal components
    fast_path: str | None  # a right-factor reason, when one fired
    seed: int

    @property
    def is_tame(self):
        return self.verdict == "tame"


def tameness(a: RatFunc, seed: int = 0) -> TamenessReport:
    """Tameness verdict with full component evidence.

    The right-factor fast path (normalization genus <= 1 for A itself or a
    compositional right factor discovered through a block system) is
    reported when it fires, but the component list is always computed so
    the evidence exhibits the low-genus factor explicitly.
    """
    if a.degree < 2:
        raise ValueError("tameness needs degree >= 2")
    fast = None
    cls = normalization_genus_class(a)
    if cls is not GenusClass.GREATER_THAN_ONE:
        fast = f"normalization genus class of A is {cls.value}"
    else:
        fast = _right_factor_fast_path(a, seed)

    comps = curve_components(a, a, seed=seed)
    genera = tuple(c.genus for c in comps if not c.is_diagonal)
    wild = any(g <= 1 for g in genera)
    if fast is not None and not wild:
        raise FiberProductError(
            "fast path claims wildness but all non-diagonal components have genus >= 2"
        )
    return TamenessReport(
        verdict="wild" if wild else "tame",
        components=tuple(comps),
        genera=genera,
        fast_path=fast,
        seed=seed,
    )


def _right_factor_fast_path(a: RatFunc, seed: int):
    try:
        from .monodromy import monodromy

        mono = monodromy(a, seed=seed)
        for labels in decomp.block_systems(mono):
            cls = decomp.right_factor_from_blocks(a, mono, labels, seed)
            if cls.exact and cls.V.degree >= 2:
                vclass = normalization_genus_class(cls.V)
                if vclass is not GenusClass.GREATER_THAN_ONE:
                    return (
                        f"right factor of degree {cls.V.degree} has "
                        f"normalization genus class {vclass.value}"
                    )
    except Exception:
        return None
    return None


# -- Theorem-style bounds ---------------------------------------------------------


def genus_bound(n: int, m: int) -> Fraction:
    """Lower bound (m/n! - 84 n + 168)/84 for non-graph components."""
    if n < 3:
        raise ValueError("the bound needs deg A >= 3 (tame functions have degree >= 3)")
    if m < 2:
        raise ValueError("the bound needs deg B >= 2")
    return (Fraction(m, math.factorial(n)) - 84 * n + 168) / 84


def bound_c1(n: int) -> int:
    """Degree cap 84 (n - 2) n! for reduced left factors of iterates."""
    return 84 * (n - 2) * math.factorial(n)


def bound_c2(m: int) -> float:
    """Iterate threshold log2(84 (m - 1) m!)."""
    return math.log2(84 * (m - 1) * math.factorial(m))


@dataclass(frozen=True)
class BoundCheck:
    component: FiberComponent
    bound: Fraction
    bound_satisfied: bool
    is_graph: bool
    dichotomy_holds: bool


@dataclass(frozen=True)
class BoundReport:
    checks: tuple
    graph_witness: RatFunc | None  # S with B = A o S when a graph component exists
    all_hold: bool


def check_bound(a: RatFunc, b: RatFunc, seed: int = 0) -> BoundReport:
    """Verify the genus dichotomy on every component of A(x) - B(y) = 0.

    Every component must either meet the genus lower bound or be the graph
    x - S(y) = 0 (projection to the B-side of degree one, certified by an
    exact left division B = A o S).
    """
    bound = genus_bound(a.degree, b.degree)
    comps = curve_components(a, b, seed=seed)
    witness = None
    if any(c.deg_y == 1 for c in comps):
        witness = decomp.divide_left(b, a, seed)
    checks = []
    for c in comps:
        ok_bound = Fraction(c.genus) >= bound
        is_graph = c.deg_y == 1 and witness is not None
        checks.append(
            BoundCheck(
                component=c,
                bound=bound,
                bound_satisfied=ok_bound,
                is_graph=is_graph,
                dichotomy_holds=ok_bound or is_graph,
            )
        )
    return BoundReport(
        checks=tuple(checks),
        graph_witness=witness,
        all_hold=all(ch.dichotomy_holds for ch in checks),
    )
