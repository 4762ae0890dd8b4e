"""Named families, special-function detection, exact orbits, and the
orbit-intersection experiments.

All orbit points are exact elements of Q(i) u {inf}; experiments report
"no match within horizon" semantics and never claim finiteness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .field import GaussianRational, INF, ONE, UNITS, ZERO, gq
from .funcalg import (
    Mobius,
    Poly,
    RatFunc,
    compose,
    conjugate,
    equal_exact,
    iterate,
    power_map,
)
from .orbifold import (
    GenusClass,
    ZERO_CHI_SIGNATURES,
    ramification_portrait,
    normalization_genus_class,
)
from .decomp import poly_conjugate_over_c


def chebyshev(n: int) -> RatFunc:
    """T_n with T_n(cos t) = cos nt, by the recurrence."""
    if n < 0:
        raise ValueError("chebyshev needs n >= 0")
    t0, t1 = Poly.one(), Poly.x()
    if n == 0:
        return RatFunc(t0)
    for _ in range(n - 1):
        t0, t1 = t1, Poly((0, 2)) * t1 - t0
    return RatFunc(t1)


def d_family(s: int) -> RatFunc:
    """D_s = (z^s + z^(-s))/2, a degree-2s companion of the Chebyshevs."""
    if s < 1:
        raise ValueError("D_s needs s >= 1")
    return RatFunc(Poly.monomial(2 * s) + Poly.one(), Poly.monomial(s, 2))


def lattes_multiplication_by_3() -> RatFunc:
    """The tripling Lattes map on the curve w^2 = z^3 - z (degree 9).

    Its orbifold O2 has signature {2,2,2,2} with Euler characteristic 0,
    so the normalization-genus classifier puts it in class one.
    """
    x = Poly.x()
    psi3 = Poly((-1, 0, -6, 0, 3))  # 3x^4 - 6x^2 - 1
    even = Poly((1, 0, -5, 0, -5, 0, 1))  # x^6 - 5x^4 - 5x^2 + 1
    num = x * psi3 * psi3 - Poly((0, -8, 0, 8)) * even  # x psi3^2 - 8(x^3 - x) even
    return RatFunc(num, psi3 * psi3)


def lattes_doubling() -> RatFunc:
    """The doubling Lattes map (z^2+1)^2 / (4z(z^2-1)) on the same curve."""
    num = (Poly.monomial(2) + Poly.one()) ** 2
    den = Poly((0, -4, 0, 4))
    return RatFunc(num, den)


def make_family(kind: str, param: int | None = None) -> RatFunc:
    """Construct a named family member: power n, chebyshev n, D s, or the
    Lattes sample."""
    kind = kind.lower()
    if kind == "power":
        if param is None:
            raise ValueError("power needs an exponent")
        return power_map(param)
    if kind == "chebyshev":
        if param is None or param < 1:
            raise ValueError("chebyshev needs n >= 1")
        return chebyshev(param)
    if kind in ("d", "d_family"):
        if param is None or param < 1:
            raise ValueError("D_s needs s >= 1")
        return d_family(param)
    if kind == "lattes_sample":
        return lattes_multiplication_by_3()
    if kind == "lattes_doubling":
        return lattes_doubling()
    raise ValueError(f"unknown family kind {kind!r}")


# -- special-function detection -----------------------------------------------------


@dataclass(frozen=True)
class SpecialVerdict:
    kind: str  # power_conjugate | chebyshev_conjugate | lattes_candidate | non_special
    witness: dict

    @property
    def is_special(self):
        return self.kind != "non_special"


def _fixes_both_ramification_points(f: RatFunc, entries):
    """Exact fixed/swapped decision for the two totally ramified points.

    The finite ramification points are roots of an exact polynomial s, so
    f(p) = p at both is a divisibility statement, never a numeric one.
    """
    pts = []
    inf_count = 0
    s = Poly.one()
    for e in entries:
        fp = e.fiber[0]
        if fp.point is INF:
            inf_count += 1
        elif isinstance(fp.point, GaussianRational):
            s = s * Poly((-fp.point, ONE))
            pts.append(fp.point)
        else:
            return None, None  # ramification point not identified exactly
    fixed = True
    if inf_count:
        fixed = fixed and (f.eval_exact(INF) is INF)
    if int(s.degree) >= 1:
        diff = f.num - Poly((0, 1)) * f.den
        fixed = fixed and (diff % s).is_zero()
    if fixed:
        return True, False
    # swap needs branch values = ramification points as sets (z^-n shape)
    vals_inf = sum(1 for e in entries if e.value is INF)
    finite_vals = [e.value for e in entries if e.value is not INF]
    if vals_inf != inf_count or sorted(
        (v.re, v.im) for v in finite_vals if isinstance(v, GaussianRational)
    ) != sorted((p.re, p.im) for p in pts) or len(finite_vals) != len(pts):
        return False, False
    ff = compose(f, f)
    swapped_ok = True
    if inf_count:
        swapped_ok = swapped_ok and (ff.eval_exact(INF) is INF)
        swapped_ok = swapped_ok and all(f.eval_exact(p) is INF for p in pts)
    if int(s.degree) >= 1:
        diff2 = ff.num - Poly((0, 1)) * ff.den
        swapped_ok = swapped_ok and (diff2 % s).is_zero()
    return False, swapped_ok


def special_detect(f: RatFunc) -> SpecialVerdict:
    """Classify f as power/Chebyshev conjugate, Lattes candidate, or neither.

    Power and Chebyshev conjugacy are decided exactly; the Lattes check is
    the self-covering condition over a zero-chi orbifold on the postcritical
    set, also exact, and the verdict wording stays "candidate" because the
    elliptic curve itself is never constructed.
    """
    if f.degree < 2:
        raise ValueError("special detection needs degree >= 2")
    n = f.degree
    portrait = ramification_portrait(f)
    entries = portrait.branch_points

    # power: two branch values, both totally ramified
    if len(entries) == 2 and all(e.partition == (n,) for e in entries):
        fixed, swapped = _fixes_both_ramification_points(f, entries)
        if fixed:
            return SpecialVerdict("power_conjugate", _power_witness(f, entries, n))
        if swapped:
            return SpecialVerdict("power_conjugate", _power_witness(f, entries, -n))

    # chebyshev: a totally ramified fixed point moved to infinity leaves
    # a polynomial conjugate to T_n or -T_n
    cheb_witness = _chebyshev_witness(f, portrait)
    if cheb_witness is not None:
        return SpecialVerdict("chebyshev_conjugate", cheb_witness)

    lattes = _lattes_witness(f, portrait)
    if lattes is not None:
        return SpecialVerdict("lattes_candidate", lattes)
    return SpecialVerdict("non_special", {})


def _power_witness(f: RatFunc, entries, signed_n):
    witness = {"exponent": signed_n}
    pts = [e.fiber[0].point for e in entries]
    exact_pts = [p for p in pts if p is INF or isinstance(p, GaussianRational)]
    if len(exact_pts) == 2:
        third = _fresh_exact_point(f, exact_pts)
        try:
            mu = Mobius.from_three_points((exact_pts[0], exact_pts[1], third), (ZERO, INF, ONE))
            g = conjugate(f, mu.inverse())
            # g is now ramified exactly over {0, inf} with those points fixed
            # or swapped, hence a monomial c z^(+-n)
            witness["mobius"] = mu
            witness["monomial"] = g
            assert _is_monomial_like(g)
        except ValueError:
            pass
    return witness


def _is_monomial_like(g: RatFunc):
    num_terms = sum(1 for c in g.num.coeffs if not c.is_zero())
    den_terms = sum(1 for c in g.den.coeffs if not c.is_zero())
    return num_terms == 1 and den_terms == 1


def _fresh_exact_point(f, used):
    k = 1
    while True:
        cand = gq(k)
        if all(not (cand == u) for u in used if u is not INF):
            return cand
        k += 1


def _chebyshev_witness(f: RatFunc, portrait):
    """Move a totally ramified fixed point to infinity, then compare with
    +-T_n by the exact polynomial conjugacy test."""
    n = f.degree
    for e in portrait.branch_points:
        if e.partition != (n,):
            continue
        q = e.fiber[0].point
        v = e.value
        if q is INF and v is INF:
            poly = f
        elif isinstance(q, GaussianRational) and isinstance(v, GaussianRational) and q == v:
            mu = Mobius(ZERO, ONE, ONE, -q)  # z -> 1/(z - q) sends q to inf
            poly = conjugate(f, mu.inverse())
        else:
            continue
        if not poly.is_polynomial():
            continue
        for sign, target in ((1, chebyshev(n)), (-1, -1 * chebyshev(n))):
            if poly_conjugate_over_c(poly.num, target.num):
                return {"sign": sign, "degree": n, "polynomial_form": poly}
    return None


def _postcritical_set(f: RatFunc, portrait, cap=6):
    values = []
    for e in portrait.branch_points:
        if not e.exact:
            return None
        values.append(e.value)
    seen = list(values)
    frontier = list(values)
    while frontier:
        nxt = []
        for p in frontier:
            img = f.eval_exact(p)
            if not any(img == s if s is not INF else img is INF for s in seen):
                seen.append(img)
                nxt.append(img)
            if len(seen) > cap:
                return None
        frontier = nxt
    return seen


def _exact_local_degrees(f: RatFunc, value, support):
    """(degrees of support points in the fiber of value, leftover partition)."""
    n = f.degree
    if value is INF:
        base = f.den
    else:
        base = f.num - f.den.scale(value)
    drop = n - (int(base.degree) if not base.is_constant() else 0)
    support_degrees = {}
    for s in support:
        d = drop if s is INF else base.order_at(s)
        if d:
            support_degrees[_key(s)] = d
    from .funcalg import local_multiplicities

    parts = list(local_multiplicities(base)) if not base.is_constant() else []
    if drop > 0:
        parts.append(drop)
    for s in support:
        d = support_degrees.get(_key(s), 0)
        if d:
            parts.remove(d)
    return support_degrees, parts


def _key(p):
    return "inf" if p is INF else p


def _lattes_witness(f: RatFunc, portrait):
    support = _postcritical_set(f, portrait)
    if support is None or not (3 <= len(support) <= 4):
        return None
    for sig in ZERO_CHI_SIGNATURES:
        if len(sig) != len(support):
            continue
        for assignment in _distinct_assignments(sig, len(support)):
            nu = {_key(p): v for p, v in zip(support, assignment)}
            if _covering_condition(f, support, nu):
                return {
                    "signature": tuple(sorted(assignment, reverse=True)),
                    "support": tuple(support),
                    "nu": nu,
                }
    return None


def _distinct_assignments(sig, count):
    import itertools

    seen = set()
    for perm in itertools.permutations(sig, count):
        if perm not in seen:
            seen.add(perm)
            yield perm


def _covering_condition(f: RatFunc, support, nu):
    """nu(f(z)) = nu(z) * deg_z f for every z, checked over exact fibers."""
    keys = {_key(p) for p in support}
    for v in support:
        support_degrees, leftover = _exact_local_degrees(f, v, support)
        target_nu = nu[_key(v)]
        for p in support:
            d = support_degrees.get(_key(p), 0)
            if d == 0:
                continue
            if nu[_key(p)] * d != target_nu:
                return False
        for d in leftover:
            if d != target_nu:
                return False
    # support must be forward invariant and contain every critical value with
    # nu >= 2; both hold by construction of the postcritical set
    return True


# -- orbits ------------------------------------------------------------------------


@dataclass(frozen=True)
class OrbitRecord:
    start: object
    points: tuple  # exact orbit points, index k = f^k(start)
    preperiodic: tuple | None  # (tail, period) when an exact repeat closed the orbit
    truncated: bool  # a bit-size cap stopped the orbit early

    def point_at(self, k: int):
        if k < len(self.points):
            return self.points[k]
        if self.preperiodic is None:
            raise IndexError("orbit not computed that far")
        tail, period = self.preperiodic
        return self.points[tail + (k - tail) % period]


#: Default cap on the exact size of one orbit point.
ORBIT_BIT_CAP = 2**16


def orbit(f: RatFunc, start, horizon: int, bit_cap: int = ORBIT_BIT_CAP) -> OrbitRecord:
    """The exact forward orbit start, f(start), ..., up to horizon steps.

    Stops early on an exact repeat (preperiodicity) or when a point exceeds
    the bit-size cap (reported as truncation).
    """
    p = start if start is INF else (start if isinstance(start, GaussianRational) else gq(start))
    points = [p]
    seen = {_orbit_key(p): 0}
    truncated = False
    preperiodic = None
    for k in range(1, horizon + 1):
        p = f.eval_exact(points[-1])
        key = _orbit_key(p)
        if key in seen:
            tail = seen[key]
            preperiodic = (tail, len(points) - tail)
            break
        if p is not INF and p.bit_size() > bit_cap:
            truncated = True
            break
        seen[key] = len(points)
        points.append(p)
    return OrbitRecord(start, tuple(points), preperiodic, truncated)


def _orbit_key(p):
    return "inf" if p is INF else (p.re, p.im)


@dataclass(frozen=True)
class IntersectReport:
    matches: tuple  # (k, l, point) with A^k(x1) = B^l(x2)
    horizon: int
    truncated: bool

    @property
    def within_horizon_note(self):
        if self.matches:
            return f"{len(self.matches)} matches within horizon {self.horizon}"
        return f"no match within horizon {self.horizon}"


def orbit_intersect(a: RatFunc, x1, b: RatFunc, x2, horizon: int,
                    bit_cap: int = ORBIT_BIT_CAP) -> IntersectReport:
    """All exact coincidences A^k(x1) = B^l(x2) with k, l <= horizon."""
    if a.degree < 2 or b.degree < 2:
        raise ValueError("orbit experiments need degrees >= 2")
    oa = orbit(a, x1, horizon, bit_cap)
    ob = orbit(b, x2, horizon, bit_cap)
    index_a = {}
    for k in range(horizon + 1):
        try:
            index_a.setdefault(_orbit_key(oa.point_at(k)), []).append(k)
        except IndexError:
            break
    matches = []
    for l in range(horizon + 1):
        try:
            p = ob.point_at(l)
        except IndexError:
            break
        for k in index_a.get(_orbit_key(p), ()):
            matches.append((k, l, p))
    matches.sort(key=lambda t: (t[0], t[1]))
    return IntersectReport(tuple(matches), horizon, oa.truncated or ob.truncated)


def common_iterate_search(a: RatFunc, b: RatFunc, bound: int, guard=None):
    """First (k, l) with A^k = B^l exactly, scanning only degree-compatible
    pairs with k <= bound; None if none exists in range."""
    if a.degree < 2 or b.degree < 2:
        raise ValueError("common iterates need degrees >= 2")
    da, db = a.degree, b.degree
    for k in range(1, bound + 1):
        target = da**k
        l = round(math.log(target, db))
        for cand in (l - 1, l, l + 1):
            if cand >= 1 and db**cand == target:
                if equal_exact(iterate(a, k, guard=guard), iterate(b, cand, guard=guard)):
                    return (k, cand)
    return None


def prime_divisors(n: int):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def prime_set_check(a: RatFunc, b: RatFunc) -> bool:
    """True iff deg A and deg B have the same prime divisors."""
    if a.degree < 2 or b.degree < 2:
        raise ValueError("prime set check needs degrees >= 2")
    return prime_divisors(a.degree) == prime_divisors(b.degree)
