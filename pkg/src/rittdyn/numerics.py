"""Complex floating-point layer: certified root finding, loop construction,
and fiber tracking along loops.

The tracking inner loop lives in a compiled Cython kernel when available;
set RITTDYN_PURE=1 to force the pure Python twin.  Both implement the same
contract and every result is deterministic for a fixed (input, seed,
tolerance) triple.
"""

from __future__ import annotations

import cmath
import math
import os
from dataclasses import dataclass, field, replace

import numpy as np

from .field import INF
from .funcalg import Poly, RatFunc, squarefree_decomposition

if os.environ.get("RITTDYN_PURE"):
    from . import _tracking_py as _kernel
else:
    try:
        from . import _tracking as _kernel  # type: ignore[attr-defined]
    except ImportError:
        from . import _tracking_py as _kernel

KERNEL_IMPL = _kernel.IMPL


class NumericsError(RuntimeError):
    pass


class RootFindingError(NumericsError):
    pass


class TrackingError(NumericsError):
    pass


@dataclass(frozen=True)
class ComplexPoint:
    """A complex value with an attached error radius."""

    re: float
    im: float
    error_radius: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.re) and math.isfinite(self.im) and math.isfinite(self.error_radius)):
            raise ValueError("ComplexPoint components must be finite")
        if self.error_radius < 0:
            raise ValueError("error radius must be nonnegative")

    @property
    def value(self) -> complex:
        return complex(self.re, self.im)

    @staticmethod
    def of(z: complex, error_radius: float = 0.0) -> "ComplexPoint":
        z = complex(z)
        return ComplexPoint(z.real, z.imag, error_radius)


@dataclass(frozen=True)
class RootCluster:
    point: ComplexPoint
    multiplicity: int


@dataclass(frozen=True)
class TrackOptions:
    rtol: float = 1e-11
    min_step: float = 2.0**-20
    max_newton: int = 14
    collision_tol: float = 1e-9
    match_ratio: float = 0.1  # nearest / second-nearest acceptance threshold
    cluster_rtol: float = 1e-8
    root_tol: float = 1e-10

    def with_tol(self, tol):
        if tol is None:
            return self
        return replace(self, root_tol=tol, cluster_rtol=max(tol, 1e-12))


DEFAULT_OPTIONS = TrackOptions()


# -- numeric root finding -----------------------------------------------------


def aberth(coeffs, maxit=150, tol=1e-13):
    """All roots of a complex-coefficient polynomial (low-order first).

    Simultaneous Aberth-Ehrlich iteration with a companion-matrix fallback;
    intended for squarefree input, where convergence is quadratic.
    """
    cs = np.asarray(coeffs, dtype=complex)
    if cs.size == 0 or not np.any(cs != 0):
        raise ValueError("root finding needs a nonzero polynomial")
    while cs.size and cs[-1] == 0:
        cs = cs[:-1]
    n = cs.size - 1
    if n < 1:
        return np.zeros(0, dtype=complex)
    nzero = 0
    while cs[nzero] == 0:
        nzero += 1
    if nzero:
        inner = aberth(cs[nzero:], maxit, tol)
        return np.concatenate([np.zeros(nzero, dtype=complex), inner])
    if n == 1:
        return np.array([-cs[0] / cs[1]])

    lead = cs[-1]
    radius = 1.0 + max(abs(cs[:-1] / lead))
    angles = 2.0 * np.pi * np.arange(n) / n + 0.376
    z = radius * np.exp(1j * angles)

    dcs = cs[1:] * np.arange(1, n + 1)
    ok = False
    for _ in range(maxit):
        p = np.polyval(cs[::-1], z)
        dp = np.polyval(dcs[::-1], z)
        with np.errstate(divide="ignore", invalid="ignore"):
            newton = np.where(dp != 0, p / dp, 0.0)
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, np.inf)
        s = np.sum(1.0 / diff, axis=1)
        denom = 1.0 - newton * s
        denom = np.where(denom == 0, 1.0, denom)
        step = newton / denom
        z = z - step
        if np.all(np.abs(step) <= tol * (1.0 + np.abs(z))):
            ok = True
            break
    if not ok or not np.all(np.isfinite(z)):
        z = np.roots(cs[::-1])
    # Newton polish
    for _ in range(3):
        p = np.polyval(cs[::-1], z)
        dp = np.polyval(dcs[::-1], z)
        with np.errstate(divide="ignore", invalid="ignore"):
            corr = np.where(dp != 0, p / dp, 0.0)
        z = z - corr
    return z


def _residual_scale(coeffs, z):
    return sum(abs(c) * max(1.0, abs(z)) ** k for k, c in enumerate(coeffs))


def all_roots(p: Poly, tol: float | None = None, options: TrackOptions = DEFAULT_OPTIONS):
    """Roots of an exact polynomial with multiplicity, residual-certified.

    Multiplicity structure is taken exactly from squarefree decomposition;
    nearby roots from different squarefree parts are merged into clusters
    with combined multiplicity and a reported cluster radius.
    """
    options = options.with_tol(tol)
    if p.is_zero() or p.degree < 1:
        raise ValueError("all_roots needs a nonconstant polynomial")
    found = []
    for factor, mult in squarefree_decomposition(p):
        cc = factor.to_complex_coeffs()
        roots = aberth(cc)
        worst = 0.0
        for z in roots:
            res = abs(np.polyval(cc[::-1], z)) / _residual_scale(cc, z)
            worst = max(worst, res)
        if worst > options.root_tol:
            raise RootFindingError(
                f"root residual {worst:.3e} above tolerance {options.root_tol:.3e} "
                f"for squarefree factor of degree {int(factor.degree)}"
            )
        found.extend((complex(z), mult, worst) for z in roots)

    # single-linkage clustering
    clusters: list[list[tuple[complex, int, float]]] = []
    for item in sorted(found, key=lambda t: (t[0].real, t[0].imag)):
        for cl in clusters:
            if any(abs(item[0] - other[0]) <= options.cluster_rtol * max(1.0, abs(item[0])) for other in cl):
                cl.append(item)
                break
        else:
            clusters.append([item])

    out = []
    for cl in clusters:
        center = sum(z for z, _, _ in cl) / len(cl)
        radius = max((abs(z - center) for z, _, _ in cl), default=0.0)
        worst = max(r for _, _, r in cl)
        mult = sum(m for _, m, _ in cl)
        out.append(RootCluster(ComplexPoint.of(center, radius + worst), mult))
    out.sort(key=lambda rc: (rc.point.re, rc.point.im))
    assert sum(rc.multiplicity for rc in out) == int(p.degree)
    return out


# -- loops ---------------------------------------------------------------------


@dataclass(frozen=True)
class LoopPath:
    """A closed polyline in the base sphere, anchored at the base point."""

    waypoints: tuple
    around: object = None  # the branch value the loop encircles (complex or INF)

    def __post_init__(self):
        if len(self.waypoints) < 3:
            raise ValueError("a loop needs at least three waypoints")
        if self.waypoints[0] != self.waypoints[-1]:
            raise ValueError("loop must be closed at the anchor")

    @property
    def anchor(self) -> complex:
        return self.waypoints[0]

    def reversed(self) -> "LoopPath":
        return LoopPath(tuple(reversed(self.waypoints)), self.around)

    @staticmethod
    def keyhole(anchor, center, radius, circle_segments=24, max_step=None):
        """Spoke from the anchor, counterclockwise circle, spoke back."""
        anchor = complex(anchor)
        center = complex(center)
        direction = (anchor - center) / abs(anchor - center)
        start = center + radius * direction
        phi0 = cmath.phase(direction)
        circle = [
            center + radius * cmath.exp(1j * (phi0 + 2.0 * math.pi * k / circle_segments))
            for k in range(circle_segments + 1)
        ]
        spoke_in = _subdivide(anchor, start, max_step)
        spoke_out = list(reversed(spoke_in))
        return LoopPath(tuple(spoke_in + circle[1:] + spoke_out[1:]), center)

    @staticmethod
    def clockwise_circle(anchor, center, circle_segments=48, around=INF):
        """Full clockwise circle through the anchor, for the loop at infinity."""
        anchor = complex(anchor)
        center = complex(center)
        radius = abs(anchor - center)
        phi0 = cmath.phase(anchor - center)
        pts = [
            center + radius * cmath.exp(1j * (phi0 - 2.0 * math.pi * k / circle_segments))
            for k in range(circle_segments + 1)
        ]
        pts[0] = anchor
        pts[-1] = anchor
        return LoopPath(tuple(pts), around)


def _subdivide(a, b, max_step):
    if max_step is None or abs(b - a) <= max_step:
        return [a, b]
    n = int(math.ceil(abs(b - a) / max_step))
    return [a + (b - a) * k / n for k in range(n + 1)]


@dataclass(frozen=True)
class LoopSystem:
    anchor: complex
    loops: tuple  # LoopPath in composition order; .around identifies each
    values: tuple  # branch values in the same order (complex entries, INF last if present)


def _segment_point_distance(a, b, p):
    ab = b - a
    denom = abs(ab) ** 2
    if denom == 0:
        return abs(p - a)
    t = ((p - a) * ab.conjugate()).real / denom
    t = min(1.0, max(0.0, t))
    return abs(p - (a + t * ab))


def build_loops(finite_values, include_inf, seed=0, circle_segments=24, attempts=400):
    """Keyhole loop system around the given branch values.

    Finite loops are ordered by the angle of the branch value as seen from
    the base point (ties by modulus); the loop around infinity, when asked
    for, is a big clockwise circle appended last.  The composite of all
    loops in this order is contractible, which is what the product-one
    monodromy check downstream relies on.
    """
    finite_values = [complex(v) for v in finite_values]
    if not finite_values:
        raise NumericsError("loop construction needs at least one finite branch value")
    rng = _seeded(seed)
    c = sum(finite_values) / len(finite_values)
    r_out = max(abs(v - c) for v in finite_values)
    base_radius = 2.5 * max(r_out, 0.5) + 1.0

    base_radii = []
    for i, v in enumerate(finite_values):
        others = [abs(v - w) for j, w in enumerate(finite_values) if j != i]
        base_radii.append(0.25 * min(others) if others else 0.5)

    # default keyhole radius is a quarter of the nearest-neighbour distance;
    # crowded configurations retry with shrunken circles (same homotopy classes)
    anchor = None
    radii = base_radii
    for shrink in (1.0, 0.5, 0.25, 0.1, 0.04):
        radii = [r * shrink for r in base_radii]
        for _ in range(attempts):
            theta = 2.0 * math.pi * rng.random()
            cand = c + base_radius * cmath.exp(1j * theta)
            good = True
            for i, v in enumerate(finite_values):
                stop = v + radii[i] * (cand - v) / abs(cand - v)
                for j, w in enumerate(finite_values):
                    if j == i:
                        continue
                    if _segment_point_distance(cand, stop, w) < 1.2 * radii[j]:
                        good = False
                        break
                if not good:
                    break
            if good:
                anchor = cand
                break
        if anchor is not None:
            break
    if anchor is None:
        raise NumericsError("could not place a base point clear of all keyhole disks")

    ref = cmath.phase(c - anchor) if abs(c - anchor) > 0 else 0.0
    order = sorted(
        range(len(finite_values)),
        key=lambda i: (_rel_angle(finite_values[i], anchor, ref), abs(finite_values[i] - anchor)),
    )
    max_step = 0.2 * base_radius
    loops = [
        LoopPath.keyhole(anchor, finite_values[i], radii[i], circle_segments, max_step)
        for i in order
    ]
    values = [finite_values[i] for i in order]
    if include_inf:
        loops.append(LoopPath.clockwise_circle(anchor, c, 2 * circle_segments))
        values.append(INF)
    return LoopSystem(anchor, tuple(loops), tuple(values))


def _rel_angle(v, anchor, ref):
    a = cmath.phase(v - anchor) - ref
    while a <= -math.pi:
        a += 2.0 * math.pi
    while a > math.pi:
        a -= 2.0 * math.pi
    return a


def _seeded(seed):
    import random

    # string seeds hash deterministically in random.Random (sha512 based)
    return random.Random(f"rittdyn-loops-{seed}")


# -- fiber tracking --------------------------------------------------------------


def _chordal_pair(z1, c1, z2, c2):
    """Chordal distance between chart-tagged points."""
    a1, b1 = (z1, 1.0) if c1 == 0 else (1.0, z1)
    a2, b2 = (z2, 1.0) if c2 == 0 else (1.0, z2)
    num = 2.0 * abs(a1 * b2 - a2 * b1)
    den = math.sqrt((abs(a1) ** 2 + abs(b1) ** 2) * (abs(a2) ** 2 + abs(b2) ** 2))
    return num / den


def _coeff_arrays(f: RatFunc):
    pn, pd = f.numeric_coeffs()
    d = max(len(pn), len(pd))
    pn = pn + [0j] * (d - len(pn))
    pd = pd + [0j] * (d - len(pd))
    rpn = list(reversed(pn))
    rpd = list(reversed(pd))
    return (
        np.ascontiguousarray(pn, dtype=complex),
        np.ascontiguousarray(pd, dtype=complex),
        np.ascontiguousarray(rpn, dtype=complex),
        np.ascontiguousarray(rpd, dtype=complex),
    )


def anchor_fiber(f: RatFunc, w: complex, options: TrackOptions = DEFAULT_OPTIONS):
    """The deg(f) preimages of w, or None if w is too close to degenerate."""
    pn, pd = f.numeric_coeffs()
    d = max(len(pn), len(pd))
    pn = pn + [0j] * (d - len(pn))
    pd = pd + [0j] * (d - len(pd))
    cs = [a - w * b for a, b in zip(pn, pd)]
    scale = max(abs(x) for x in cs)
    if scale == 0 or abs(cs[-1]) < 1e-9 * scale:
        return None
    roots = aberth(cs)
    if len(roots) != d - 1:
        return None
    return np.asarray(sorted(roots, key=lambda z: (z.real, z.imag)), dtype=complex)


def track_fiber(f: RatFunc, loop: LoopPath, start_fiber, options: TrackOptions = DEFAULT_OPTIONS):
    """Permutation of fiber indices induced by tracking along the loop.

    start_fiber must be the full fiber of the loop anchor.  Returns a tuple
    p with p[i] = index of the start point the strand from start_fiber[i]
    ends at.
    """
    starts = [s.value if isinstance(s, ComplexPoint) else complex(s) for s in start_fiber]
    n = len(starts)
    if n != f.degree:
        raise TrackingError(f"start fiber has {n} points, expected {f.degree}")
    for i in range(n):
        for j in range(i + 1, n):
            if _chordal_pair(starts[i], 0, starts[j], 0) <= 10.0 * options.rtol:
                raise TrackingError("start fiber points are not separated by 10x tracking tolerance")

    pn, pd, rpn, rpd = _coeff_arrays(f)
    wpts = np.ascontiguousarray(loop.waypoints, dtype=complex)
    tracked = []
    for i, z in enumerate(starts):
        z0, chart0 = (z, 0) if abs(z) <= 2.0 else (1.0 / z, 1)
        status, arc, vals, charts = _kernel.track_path(
            pn, pd, rpn, rpd, wpts, z0, chart0,
            options.rtol, options.min_step, options.max_newton,
        )
        if status != 0:
            raise TrackingError(
                f"step-size underflow for strand {i} on arc {arc} of the loop around {loop.around}"
            )
        tracked.append((vals, charts))

    n_w = len(loop.waypoints)
    for k in range(n_w):
        for i in range(n):
            for j in range(i + 1, n):
                d = _chordal_pair(tracked[i][0][k], tracked[i][1][k], tracked[j][0][k], tracked[j][1][k])
                if d <= options.collision_tol:
                    raise TrackingError(
                        f"fiber collision between strands {i} and {j} at waypoint {k} "
                        f"of the loop around {loop.around}"
                    )

    perm = [-1] * n
    used = set()
    for i in range(n):
        ze, ce = tracked[i][0][-1], tracked[i][1][-1]
        dists = sorted(
            ((_chordal_pair(ze, ce, s, 0), j) for j, s in enumerate(starts)),
        )
        d1, j1 = dists[0]
        d2 = dists[1][0] if n > 1 else 1.0
        if d2 == 0 or d1 / d2 >= options.match_ratio:
            raise TrackingError(
                f"ambiguous endpoint matching for strand {i} on the loop around {loop.around} "
                f"(nearest {d1:.3e}, second {d2:.3e})"
            )
        if j1 in used:
            raise TrackingError(f"two strands matched to start point {j1}")
        used.add(j1)
        perm[i] = j1
    return tuple(perm)
