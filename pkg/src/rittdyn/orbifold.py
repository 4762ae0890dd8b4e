"""Ramification portraits and sphere orbifolds.

A portrait records every branch value of a rational function together with
the partition of local degrees over it.  Partitions are always exact
integers; branch values themselves are exact elements of Q(i) u {inf}
whenever they can be identified exactly (verified, never guessed), and
numeric cluster centers otherwise.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

from .field import (
    GaussianRational,
    INF,
    gq,
    point_to_complex,
    rationalize_complex,
)
from .funcalg import Poly, RatFunc, gcd, local_multiplicities, squarefree_decomposition
from .numerics import DEFAULT_OPTIONS, aberth


class PortraitError(RuntimeError):
    """Internal consistency failure while assembling a portrait."""


@dataclass(frozen=True)
class FiberPoint:
    point: object  # GaussianRational | INF | complex
    local_degree: int

    @property
    def exact(self):
        return self.point is INF or isinstance(self.point, GaussianRational)


@dataclass(frozen=True)
class BranchEntry:
    value: object  # GaussianRational | INF | complex
    partition: tuple
    fiber: tuple  # tuple of FiberPoint

    @property
    def exact(self):
        return self.value is INF or isinstance(self.value, GaussianRational)

    @property
    def is_branch(self):
        return any(p > 1 for p in self.partition)


@dataclass(frozen=True)
class RamificationPortrait:
    degree: int
    branch_points: tuple  # BranchEntry for every branch value

    def partition_at(self, value, tol=1e-7):
        for e in self.branch_points:
            if _points_match(e.value, value, tol):
                return e.partition
        return tuple([1] * self.degree)

    def branch_values_complex(self):
        return [point_to_complex(e.value) for e in self.branch_points]

    def has_infinite_branch_value(self):
        return any(e.value is INF for e in self.branch_points)


@dataclass(frozen=True)
class Orbifold:
    """Finite multiset of ramification indices nu >= 2 on the sphere."""

    support: tuple  # tuple of (point, nu)

    def __post_init__(self):
        if any(nu < 2 for _, nu in self.support):
            raise ValueError("orbifold support requires nu >= 2")

    def signature(self):
        return Signature(tuple(sorted((nu for _, nu in self.support), reverse=True)))

    def nu_at(self, point, tol=1e-7):
        for p, nu in self.support:
            if _points_match(p, point, tol):
                return nu
        return 1


@dataclass(frozen=True)
class Signature:
    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(sorted(self.values, reverse=True)))

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return len(self.values)

    def __eq__(self, other):
        if isinstance(other, Signature):
            return self.values == other.values
        if isinstance(other, (tuple, list, set, frozenset)):
            return self.values == tuple(sorted(other, reverse=True))
        return NotImplemented

    def __hash__(self):
        return hash(self.values)

    def __repr__(self):
        return "{" + ",".join(str(v) for v in self.values) + "}"


class GenusClass(enum.Enum):
    ZERO = "zero"
    ONE = "one"
    GREATER_THAN_ONE = "greater_than_one"


def _points_match(a, b, tol=1e-7):
    if a is INF or b is INF:
        return a is b or (
            not isinstance(a, GaussianRational)
            and not isinstance(b, GaussianRational)
            and _num_inf(a)
            and _num_inf(b)
        )
    if isinstance(a, GaussianRational) and isinstance(b, GaussianRational):
        return a == b
    za, zb = point_to_complex(a), point_to_complex(b)
    return abs(za - zb) <= tol * max(1.0, abs(za))

def _num_inf(p):
    if p is INF:
        return True
    try:
        z = complex(p)
    except TypeError:
        return False
    return not (math.isfinite(z.real) and math.isfinite(z.imag))


# -- portrait construction ----------------------------------------------------


def _exact_partition(f: RatFunc, w) -> tuple:
    """Exact fiber of a finite w in Q(i): list of (point-or-None, degree).

    Points are exact when a squarefree factor root lies in Q(i); otherwise
    the factor's numeric roots are used.
    """
    n = f.degree
    r = f.num - f.den.scale(w if isinstance(w, GaussianRational) else gq(w))
    fiber = []
    parts = []
    for factor, mult in squarefree_decomposition(r):
        pts = _factor_points(factor)
        for p in pts:
            fiber.append(FiberPoint(p, mult))
            parts.append(mult)
    extra = n - (int(r.degree) if not r.is_zero() else 0)
    if r.is_zero():
        raise PortraitError("constant function in portrait computation")
    if extra > 0:
        fiber.append(FiberPoint(INF, extra))
        parts.append(extra)
    return tuple(sorted(parts, reverse=True)), tuple(fiber)


def _factor_points(factor: Poly):
    """Roots of a squarefree exact factor, exact where rationalizable."""
    d = int(factor.degree)
    if d == 0:
        return []
    if d == 1:
        return [(-factor.coeff(0)) / factor.coeff(1)]
    out = []
    for z in aberth(factor.to_complex_coeffs()):
        cand = rationalize_complex(z)
        if cand is not None and factor.eval(cand).is_zero():
            out.append(cand)
        else:
            out.append(complex(z))
    return out


def _numeric_fiber(f: RatFunc, w, tol=1e-5):
    """Clustered numeric fiber of a finite numeric value w."""
    pn, pd = f.numeric_coeffs()
    d = max(len(pn), len(pd))
    pn = pn + [0j] * (d - len(pn))
    pd = pd + [0j] * (d - len(pd))
    roots = sorted(aberth([a - w * b for a, b in zip(pn, pd)]), key=lambda z: (z.real, z.imag))
    groups = []
    for z in roots:
        for g in groups:
            if abs(z - g[0]) <= tol * max(1.0, abs(z)):
                g.append(z)
                break
        else:
            groups.append([z])
    fiber = tuple(FiberPoint(sum(g) / len(g), len(g)) for g in groups)
    parts = tuple(sorted((len(g) for g in groups), reverse=True))
    return parts, fiber


def _infinity_entry(f: RatFunc):
    n = f.degree
    fiber = []
    parts = []
    for factor, mult in squarefree_decomposition(f.den):
        for p in _factor_points(factor):
            fiber.append(FiberPoint(p, mult))
            parts.append(mult)
    extra = n - (int(f.den.degree) if not f.den.is_zero() else 0)
    if extra > 0:
        fiber.append(FiberPoint(INF, extra))
        parts.append(extra)
    return BranchEntry(INF, tuple(sorted(parts, reverse=True)), tuple(fiber))


def ramification_portrait(f: RatFunc, options=DEFAULT_OPTIONS) -> RamificationPortrait:
    """Branch values of f with the local-degree partition over each.

    The Riemann-Hurwitz identity is verified exactly before returning.
    """
    if f.degree < 2:
        raise ValueError("portrait requires degree >= 2")
    n = f.degree
    p, q = f.num, f.den

    entries = {}

    inf_entry = _infinity_entry(f)
    entries["inf"] = inf_entry

    exact_values = []

    w0 = f.eval_exact(INF)
    if w0 is not INF:
        exact_values.append(w0)

    # finite critical points: roots of the derivative numerator, poles removed
    w = p.derivative() * q - p * q.derivative()
    if not w.is_zero():
        g = gcd(w, q)
        while g.degree > 0:
            w = w // g
            g = gcd(w, q)

    exact_crit = []  # (point, local_degree)
    numeric_crit = []
    if not w.is_constant():
        for factor, mult in squarefree_decomposition(w):
            for z in aberth(factor.to_complex_coeffs()):
                cand = rationalize_complex(z)
                if cand is not None and factor.eval(cand).is_zero():
                    exact_crit.append((cand, mult + 1))
                else:
                    numeric_crit.append((complex(z), mult + 1))

    for c, _ in exact_crit:
        v = f.eval_exact(c)
        if v is INF:
            raise PortraitError("pole escaped the derivative-numerator cleanup")
        if v not in exact_values:
            exact_values.append(v)

    for v in exact_values:
        key = ("exact", v)
        if key not in entries:
            parts, fiber = _exact_partition(f, v)
            entries[key] = BranchEntry(v, parts, fiber)

    # numeric critical values, skipping any that an exact entry already covers
    leftovers = []
    for z, deg in numeric_crit:
        val = f.eval_complex(z)
        if any(
            _points_match(e.value, val)
            for e in entries.values()
        ):
            continue
        leftovers.append((val, z, deg))

    clusters = []
    for val, z, deg in sorted(leftovers, key=lambda t: (t[0].real, t[0].imag)):
        for cl in clusters:
            if abs(cl[0][0] - val) <= 1e-7 * max(1.0, abs(val)):
                cl.append((val, z, deg))
                break
        else:
            clusters.append([(val, z, deg)])

    for cl in clusters:
        center = sum(v for v, _, _ in cl) / len(cl)
        cand = rationalize_complex(center)
        if cand is not None:
            parts, fiber = _exact_partition(f, cand)
            if any(x > 1 for x in parts):
                entries[("exact", cand)] = BranchEntry(cand, parts, fiber)
                continue
        expected = sorted([deg for _, _, deg in cl] + [1] * (n - sum(deg for _, _, deg in cl)), reverse=True)
        parts, fiber = _numeric_fiber(f, center)
        if list(parts) != expected:
            raise PortraitError(
                f"fiber clustering over numeric branch value {center} gave partition "
                f"{list(parts)}, critical-point data expected {expected}"
            )
        entries[("num", center)] = BranchEntry(center, parts, fiber)

    branch = tuple(
        e for e in entries.values() if e.is_branch
    )
    defect = sum(n - len(e.partition) for e in branch)
    if defect != 2 * n - 2:
        raise PortraitError(
            f"Riemann-Hurwitz defect {defect} != {2 * n - 2}; "
            "clustering tolerance is likely too coarse for this function"
        )
    return RamificationPortrait(n, branch)


# -- orbifolds ----------------------------------------------------------------


def nu_pair(f: RatFunc, portrait: RamificationPortrait | None = None):
    """The source and target orbifolds (O1, O2) attached to f."""
    if portrait is None:
        portrait = ramification_portrait(f)
    target = []
    source = []
    for e in portrait.branch_points:
        nu2 = _lcm(e.partition)
        if nu2 >= 2:
            target.append((e.value, nu2))
        for fp in e.fiber:
            nu1, rem = divmod(nu2, fp.local_degree)
            if rem != 0:
                raise PortraitError(
                    f"nu1 integrality failed over {e.value}: lcm {nu2} vs local degree {fp.local_degree}"
                )
            if nu1 >= 2:
                source.append((fp.point, nu1))
    return Orbifold(tuple(source)), Orbifold(tuple(target))


def _lcm(parts):
    out = 1
    for p in parts:
        out = out * p // math.gcd(out, p)
    return out


def euler_characteristic(o: Orbifold) -> Fraction:
    """chi = 2 + sum over support of (1/nu - 1), exactly."""
    chi = Fraction(2)
    for _, nu in o.support:
        chi += Fraction(1, nu) - 1
    return chi


#: Signatures with chi = 0 (torus quotients).
ZERO_CHI_SIGNATURES = (
    (2, 2, 2, 2),
    (3, 3, 3),
    (4, 4, 2),
    (6, 3, 2),
)


def signature_has_zero_chi(sig) -> bool:
    return tuple(Signature(tuple(sig)).values) in ZERO_CHI_SIGNATURES


def signature_has_positive_chi(sig) -> bool:
    """Membership in the chi > 0 list: {n,n}, {2,2,n}, {2,3,3}, {2,3,4}, {2,3,5}."""
    vals = tuple(Signature(tuple(sig)).values)
    if len(vals) == 2 and vals[0] == vals[1] and vals[0] >= 2:
        return True
    if len(vals) == 3:
        a, b, c = vals
        if (b, c) == (2, 2) and a >= 2:
            return True
        if vals in ((3, 3, 2), (4, 3, 2), (5, 3, 2)):
            return True
    return False


def normalization_genus_class(f: RatFunc, portrait=None) -> GenusClass:
    """Genus class of the normalization, classified by the sign of chi(O2).

    Cross-validated against the explicit signature lists for chi > 0 and
    chi = 0.
    """
    if f.degree < 2:
        raise ValueError("genus classification requires degree >= 2")
    _, o2 = nu_pair(f, portrait)
    chi = euler_characteristic(o2)
    sig = o2.signature()
    in_pos = signature_has_positive_chi(sig)
    in_zero = signature_has_zero_chi(sig)
    if (chi > 0) != in_pos or (chi == 0) != in_zero:
        raise PortraitError(
            f"signature {sig} inconsistent with chi = {chi}; portrait is suspect"
        )
    if chi > 0:
        return GenusClass.ZERO
    if chi == 0:
        return GenusClass.ONE
    return GenusClass.GREATER_THAN_ONE
