"""Monodromy of a rational function as explicit permutations.

Loops are keyholes around the finite branch values plus, when infinity is a
branch value (or was requested), a big clockwise circle; composed left to
right in the loop order the product is contractible, so the permutation
product must be the identity.  That identity, transitivity, and agreement
of cycle types with the ramification portrait are all verified before any
result is returned.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .field import INF, GaussianRational, point_to_complex
from .numerics import (
    DEFAULT_OPTIONS,
    TrackingError,
    anchor_fiber,
    build_loops,
    track_fiber,
)
from .orbifold import RamificationPortrait, ramification_portrait, _points_match
from . import permgrp


class MonodromyError(RuntimeError):
    """A verification gate failed; the message names the check."""


@dataclass(frozen=True)
class MonodromyData:
    degree: int
    base_point: complex
    branch_points: tuple  # values in loop order (GaussianRational | complex | INF)
    permutations: tuple  # one permutation per branch point, same order
    fiber: tuple  # the labeled anchor fiber (complex values)
    seed: int

    def generators(self):
        return [p for p in self.permutations if not permgrp.is_identity(p)]

    def permutation_at(self, value, tol=1e-7):
        for v, p in zip(self.branch_points, self.permutations):
            if _points_match(v, value, tol):
                return p
        return permgrp.identity(self.degree)


def _match_or_none(values, v, tol=1e-7):
    for w in values:
        if _points_match(w, v, tol):
            return w
    return None


def monodromy(
    f,
    branch_set=None,
    seed: int = 0,
    options=DEFAULT_OPTIONS,
    portrait: RamificationPortrait | None = None,
    attempts: int = 8,
) -> MonodromyData:
    """Monodromy permutations of f over its branch points.

    branch_set, when given, must contain every branch point of f; extra
    points are allowed and produce identity permutations.  Deterministic
    for fixed (f, branch_set, seed).
    """
    if portrait is None:
        portrait = ramification_portrait(f, options)
    actual = list(portrait.branch_points)

    if branch_set is None:
        values = [e.value for e in actual]
    else:
        values = list(branch_set)
        for e in actual:
            if _match_or_none(values, e.value) is None:
                raise MonodromyError(
                    f"branch_set is missing the branch point {e.value}"
                )

    finite_vals = [v for v in values if v is not INF]
    include_inf = any(v is INF for v in values)

    last_err = None
    for attempt in range(attempts):
        sub_seed = seed * 1009 + attempt
        try:
            system = build_loops(
                [point_to_complex(v) for v in finite_vals], include_inf, seed=sub_seed
            )
            fiber = anchor_fiber(f, system.anchor, options)
            if fiber is None:
                raise TrackingError("anchor fiber is degenerate at this base point")
            perms = tuple(
                track_fiber(f, loop, fiber, options) for loop in system.loops
            )
        except TrackingError as err:
            last_err = err
            continue
        # reorder the given values to the loop order
        ordered_values = []
        for v in system.values:
            if v is INF:
                ordered_values.append(INF)
            else:
                src = _match_or_none(values, v)
                ordered_values.append(src if src is not None else v)
        data = MonodromyData(
            degree=f.degree,
            base_point=system.anchor,
            branch_points=tuple(ordered_values),
            permutations=perms,
            fiber=tuple(complex(z) for z in fiber),
            seed=seed,
        )
        _verify(data, portrait)
        return data
    raise MonodromyError(f"loop tracking failed after {attempts} base points: {last_err}")


def _verify(data: MonodromyData, portrait: RamificationPortrait):
    n = data.degree
    prod = permgrp.mult_all(data.permutations, n)
    if not permgrp.is_identity(prod):
        raise MonodromyError(
            "product-one check failed: composite of loop permutations is "
            + permgrp.format_cycles(prod)
        )
    gens = data.generators()
    if not permgrp.is_transitive(gens, n):
        raise MonodromyError("transitivity check failed: fiber action is not transitive")
    for v, p in zip(data.branch_points, data.permutations):
        expected = tuple(portrait.partition_at(v))
        got = permgrp.cycle_type(p)
        if got != expected:
            raise MonodromyError(
                f"cycle-type check failed over {v}: permutation has type {got}, "
                f"portrait partition is {expected}"
            )


def monodromy_pair(fa, fb, seed: int = 0, options=DEFAULT_OPTIONS, attempts: int = 8):
    """Monodromies of two functions over the union branch set with shared loops.

    Both results use the same base point and the same loops, which is what
    makes the diagonal pair action on labels well defined.  When fa and fb
    are the same function the identical MonodromyData object is returned
    twice, so the fiber labeling agrees pointwise.
    """
    pa = ramification_portrait(fa, options)
    same = fa == fb
    pb = pa if same else ramification_portrait(fb, options)

    union = [e.value for e in pa.branch_points]
    for e in pb.branch_points:
        if _match_or_none(union, e.value) is None:
            union.append(e.value)

    last_err = None
    for attempt in range(attempts):
        sub_seed = seed * 1009 + attempt
        finite_vals = [v for v in union if v is not INF]
        include_inf = any(v is INF for v in union)
        try:
            system = build_loops(
                [point_to_complex(v) for v in finite_vals], include_inf, seed=sub_seed
            )
            datas = []
            for f, portrait in ((fa, pa),) if same else ((fa, pa), (fb, pb)):
                fiber = anchor_fiber(f, system.anchor, options)
                if fiber is None:
                    raise TrackingError("anchor fiber degenerate")
                perms = tuple(track_fiber(f, loop, fiber, options) for loop in system.loops)
                ordered = []
                for v in system.values:
                    src = INF if v is INF else _match_or_none(union, v)
                    ordered.append(src if src is not None else v)
                data = MonodromyData(
                    degree=f.degree,
                    base_point=system.anchor,
                    branch_points=tuple(ordered),
                    permutations=perms,
                    fiber=tuple(complex(z) for z in fiber),
                    seed=seed,
                )
                _verify(data, portrait)
                datas.append(data)
        except TrackingError as err:
            last_err = err
            continue
        if same:
            return datas[0], datas[0]
        return datas[0], datas[1]
    raise MonodromyError(f"shared-loop tracking failed after {attempts} base points: {last_err}")


def group_order(m: MonodromyData, cap: int | None = None):
    """Order of the generated permutation group, or "exceeds cap"."""
    order = permgrp.group_order(m.generators(), m.degree)
    if order % m.degree != 0 or math.factorial(m.degree) % order != 0:
        raise MonodromyError(
            f"group order {order} fails the divisibility sandwich for degree {m.degree}"
        )
    if cap is not None and order > cap:
        return "exceeds cap"
    return order
