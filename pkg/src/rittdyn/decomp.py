"""Decomposition theory: exact polynomial decomposition, block-system
factor reconstruction for rational functions, left/right division,
Engstrom splitting, induced-decomposition analysis of iterates, and
elementary-transformation equivalence classes.

Polynomial decompositions are normalized so the right factor is monic and
fixes 0; each equivalence class then has exactly one representative, which
makes class comparison a structural equality.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .field import (
    GaussianRational,
    INF,
    ONE,
    UNITS,
    ZERO,
    gq,
    rationalize_complex,
)
from .funcalg import (
    Mobius,
    Poly,
    RatFunc,
    compose,
    conjugate,
    equal_exact,
    iterate,
)
from .monodromy import MonodromyData, monodromy
from .numerics import DEFAULT_OPTIONS, TrackingError, aberth, anchor_fiber
from .orbifold import ramification_portrait
from . import permgrp


class DecompositionError(RuntimeError):
    pass


class ConjugacyUndecidable(RuntimeError):
    """Raised when exact conjugacy testing would need data outside Q(i)."""


def divisors(n):
    out = [d for d in range(1, n + 1) if n % d == 0]
    return out


def nth_roots_in_qi(x: GaussianRational, k: int):
    """All y in Q(i) with y^k = x, found numerically and verified exactly."""
    if k < 1:
        raise ValueError("k must be positive")
    if x.is_zero():
        return [ZERO]
    z = x.to_complex()
    r = abs(z) ** (1.0 / k)
    theta = cmath.phase(z)
    out = []
    for j in range(k):
        w = r * cmath.exp(1j * (theta + 2.0 * math.pi * j) / k)
        cand = rationalize_complex(w, max_den=10**9, tol=1e-7)
        if cand is not None and cand**k == x and cand not in out:
            out.append(cand)
    # positive-real roots first, so divide_left prefers the natural branch
    return sorted(out, key=lambda c: (-c.re, -c.im))


def qi_nullspace(rows):
    """Basis of the nullspace of an exact matrix over Q(i)."""
    if not rows:
        return []
    m = [list(r) for r in rows]
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, len(m)):
            if not m[i][c].is_zero():
                pivot = i
                break
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = m[r][c].inverse()
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and not m[i][c].is_zero():
                factor = m[i][c]
                m[i] = [a - factor * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [ZERO] * ncols
        vec[fc] = ONE
        for row_idx, pc in enumerate(pivots):
            vec[pc] = -m[row_idx][fc]
        basis.append(vec)
    return basis


@dataclass(frozen=True)
class DecompClass:
    """A decomposition f = U o V up to Mobius equivalence."""

    U: RatFunc | None
    V: RatFunc | None
    block_labels: tuple | None = None
    exact: bool = True

    @property
    def is_trivial(self):
        return self.exact and (self.U.degree == 1 or self.V.degree == 1)

    def recompose(self):
        return compose(self.U, self.V)

    def degrees(self):
        return (self.U.degree, self.V.degree) if self.exact else None


# -- exact polynomial decomposition ---------------------------------------------


def _as_poly(f) -> Poly:
    if isinstance(f, Poly):
        return f
    if isinstance(f, RatFunc):
        if not f.is_polynomial():
            raise ValueError("polynomial expected")
        return f.num
    raise TypeError("polynomial expected")


def candidate_right_factor(p: Poly, s: int) -> Poly:
    """The unique monic 0-fixed candidate of degree s for p = U o V.

    Determined by the top s coefficients of p; whether it really divides
    is decided by poly_divide_right.
    """
    n = int(p.degree)
    if n % s:
        raise ValueError("s must divide deg p")
    r = n // s
    lead = p.leading()
    v = [ZERO] * (s + 1)
    v[s] = ONE
    for i in range(1, s):
        current = Poly(v) ** r
        c = lead * current.coeff(n - i)
        v[s - i] = (p.coeff(n - i) - c) / (lead * r)
    return Poly(v)


def poly_divide_right(p: Poly, v: Poly) -> Poly | None:
    """U with U o v = p, by expanding p in the base v; None if impossible."""
    if v.degree < 1:
        raise ValueError("right factor must be nonconstant")
    out = []
    rem = p
    while not rem.is_zero():
        q, r = rem.divmod(v)
        if not r.is_constant():
            return None
        out.append(r.coeff(0) if not r.is_zero() else ZERO)
        rem = q
    u = Poly(out)
    if u.compose(v) != p:
        return None
    return u


def poly_decompose(f) -> list:
    """All decomposition classes of a polynomial, one per divisor split.

    Right factors are in the normal form (monic, fixing 0); the list is
    complete and duplicate-free, and includes the two trivial splits.
    """
    p = _as_poly(f)
    n = int(p.degree)
    if n < 2:
        raise ValueError("decomposition needs degree >= 2")
    out = []
    for s in divisors(n):
        v = candidate_right_factor(p, s)
        u = poly_divide_right(p, v)
        if u is not None:
            out.append(DecompClass(RatFunc(u), RatFunc(v)))
    return out


def normalize_poly_pair(u: RatFunc, v: RatFunc):
    """Bring a polynomial decomposition to the (monic, 0-fixed) normal form."""
    vp = v.num
    lead = vp.leading()
    shift = vp.coeff(0)
    # v_norm = (v - v(0)) / lead;  u_norm = u o (lead z + v(0))
    v_norm = (vp - Poly.const(shift)).scale(lead.inverse())
    mu = Poly((shift, lead))
    u_norm = u.num.compose(mu)
    return RatFunc(u_norm), RatFunc(Poly(v_norm.coeffs))


# -- affine and Mobius symmetries --------------------------------------------------


def poly_affine_symmetries(u: Poly):
    """All affine s with u o s = u, over Q(i)."""
    g = int(u.degree)
    lead = u.leading()
    out = []
    for a in UNITS:
        if a**g != ONE:
            continue
        # coefficient of z^(g-1) forces b
        c1 = u.coeff(g - 1)
        b = (c1 * (ONE - a ** (g - 1))) / (lead * gq(g) * a ** (g - 1))
        sigma = Poly((b, a))
        if u.compose(sigma) == u:
            out.append(sigma)
    return out


# -- left and right division ------------------------------------------------------


def divide_left(a: RatFunc, d: RatFunc, seed: int = 0) -> RatFunc | None:
    """R with d o R = a, or None.

    Exact coefficient solving for polynomials; numeric continuation plus
    rationalization (verified exactly) in the rational case.
    """
    sols = divide_left_all(a, d, seed)
    return sols[0] if sols else None


def divide_left_all(a: RatFunc, d: RatFunc, seed: int = 0) -> list:
    if a.degree % d.degree:
        return []
    if a.is_polynomial() and d.is_polynomial():
        return _poly_divide_left_all(a.num, d.num)
    return _rational_divide_left_all(a, d, seed)


def divide_left_report(a: RatFunc, d: RatFunc, seed: int = 0) -> dict:
    """divide_left with status: exact solutions, or a numeric-only witness.

    A numeric-only witness means a branch of d^(-1) o a fit a rational
    function to working precision but its coefficients did not rationalize
    (or did not verify exactly).
    """
    if a.degree % d.degree:
        return {"solutions": [], "status": "none", "numeric_witness": None}
    if a.is_polynomial() and d.is_polynomial():
        sols = _poly_divide_left_all(a.num, d.num)
        witness = None
        if not sols:
            # leading coefficient needs a root outside Q(i); report it
            ratio = (a.num.leading() / d.num.leading()).to_complex()
            witness = {"leading_coefficient_root": ratio ** (1.0 / d.degree)}
        return {
            "solutions": sols,
            "status": "exact" if sols else ("numeric-only" if witness else "none"),
            "numeric_witness": witness,
        }
    sols, witness = _rational_divide_left_impl(a, d, seed)
    status = "exact" if sols else ("numeric-only" if witness else "none")
    return {"solutions": sols, "status": status, "numeric_witness": witness}


def _poly_divide_left_all(a: Poly, d: Poly) -> list:
    n, dd = int(a.degree), int(d.degree)
    k = n // dd
    out = []
    for lead in nth_roots_in_qi(a.leading() / d.leading(), dd):
        r = [ZERO] * (k + 1)
        r[k] = lead
        slope = d.leading() * gq(dd) * lead ** (dd - 1)
        for i in range(1, k + 1):
            current = d.compose(Poly(r))
            c = current.coeff(n - i)
            r[k - i] = (a.coeff(n - i) - c) / slope
        cand = Poly(r)
        if d.compose(cand) == a:
            out.append(RatFunc(cand))
    return out


def _sample_targets(z0, count, rng):
    out = []
    for _ in range(count):
        rad = 0.4 + 1.6 * rng.random()
        ang = 2.0 * math.pi * rng.random()
        out.append(z0 + rad * cmath.exp(1j * ang))
    return out


def _rational_divide_left_all(a: RatFunc, d: RatFunc, seed: int = 0, attempts: int = 4) -> list:
    return _rational_divide_left_impl(a, d, seed, attempts)[0]


def _rational_divide_left_impl(a: RatFunc, d: RatFunc, seed: int = 0, attempts: int = 4):
    """Numeric branches of d^(-1) o a, interpolated and rationalized.

    Sample paths are only used when their image under a stays clear of the
    branch values of d; tracking along such a path cannot hop sheets.
    Returns (exact solutions, numeric-only witness or None).
    """
    from .numerics import _coeff_arrays, _kernel

    k = a.degree // d.degree
    pn, pd, rpn, rpd = _coeff_arrays(d)
    try:
        branch_vals = [
            complex(v)
            for v in ramification_portrait(d).branch_values_complex()
            if abs(v) < 1e12
        ]
    except Exception:
        branch_vals = []
    rng = _seeded_rng(seed, "divleft")
    sols = []
    numeric_witness = None
    for attempt in range(attempts):
        z0 = complex(0.37 + 0.61j) + 0.5 * complex(rng.random() - 0.5, rng.random() - 0.5)
        w0 = a.eval_complex(z0)
        if not (abs(w0) < 1e8):
            continue
        fiber = anchor_fiber(d, w0)
        if fiber is None:
            continue
        targets = _sample_targets(z0, 4 * k + 16, rng)
        good_paths = []
        for zt in targets:
            seg = [z0 + (zt - z0) * t / 32.0 for t in range(33)]
            wpts = np.asarray([a.eval_complex(z) for z in seg], dtype=complex)
            if not np.all(np.isfinite(wpts.view(float))):
                continue
            if any(
                min(abs(w - bv) for w in wpts) < 0.03 * (1.0 + abs(bv))
                for bv in branch_vals
            ):
                continue
            good_paths.append((zt, wpts))
        for start in fiber:
            samples = [(z0, complex(start))]
            for zt, wpts in good_paths:
                zc, chart = (complex(start), 0) if abs(start) <= 2.0 else (1.0 / complex(start), 1)
                status, _, vals, charts = _kernel.track_path(
                    pn, pd, rpn, rpd, wpts, zc, chart,
                    DEFAULT_OPTIONS.rtol, DEFAULT_OPTIONS.min_step, DEFAULT_OPTIONS.max_newton,
                )
                if status != 0:
                    continue
                zend, cend = vals[-1], charts[-1]
                if cend == 1:
                    if abs(zend) < 1e-12:
                        continue
                    zend = 1.0 / zend
                if abs(zend) > 1e7:
                    continue
                samples.append((zt, zend))
            if len(samples) < 2 * k + 4:
                continue
            cand, numeric_fit = _fit_rational_detailed(samples, k)
            if cand is None:
                if numeric_fit is not None and numeric_witness is None:
                    numeric_witness = numeric_fit
                continue
            if equal_exact(compose(d, cand), a) and all(not equal_exact(cand, s) for s in sols):
                sols.append(cand)
            elif numeric_witness is None:
                numeric_witness = {"num": [complex(x) for x in cand.num.to_complex_coeffs()],
                                   "den": [complex(x) for x in cand.den.to_complex_coeffs()]}
        if sols:
            break
    return sols, (None if sols else numeric_witness)


def _fit_rational(samples, deg) -> RatFunc | None:
    return _fit_rational_detailed(samples, deg)[0]


def _fit_rational_detailed(samples, deg):
    """Least-squares fit of w = R(z) with deg R = deg, rationalized and exact.

    The fitted vector is unique up to scale for a function of exact degree
    deg, so normalizing the denominator to be monic makes the coefficients
    canonical and rationalizable.  Returns (exact function or None,
    numeric fit dict when a clean fit resisted rationalization).
    """
    rows = []
    for z, w in samples:
        row = [z**j for j in range(deg + 1)] + [-w * z**j for j in range(deg + 1)]
        norm = max(abs(x) for x in row)
        if norm == 0 or not math.isfinite(norm):
            continue
        rows.append([x / norm for x in row])
    if len(rows) < 2 * deg + 2:
        return None, None
    mat = np.asarray(rows, dtype=complex)
    _, sv, vh = np.linalg.svd(mat)
    if sv[-2] < 1e-6:  # nullspace not one-dimensional: degree too high
        return None, None
    if sv[-1] > 1e-6:
        return None, None
    vec = vh[-1].conj()
    num = vec[: deg + 1]
    den = vec[deg + 1 :]
    # canonical scale: monic denominator at its true numeric degree
    lead_idx = None
    for j in range(deg, -1, -1):
        if abs(den[j]) > 1e-6:
            lead_idx = j
            break
    if lead_idx is None:
        return None, None
    lead = den[lead_idx]
    num = num / lead
    den = den / lead
    fit = {"num": [complex(x) for x in num], "den": [complex(x) for x in den],
           "residual": float(sv[-1])}
    num_q = [rationalize_complex(c, max_den=10**7, tol=1e-5) for c in num]
    den_q = [rationalize_complex(c, max_den=10**7, tol=1e-5) for c in den]
    if any(c is None for c in num_q) or any(c is None for c in den_q):
        return None, fit
    try:
        cand = RatFunc(Poly(num_q), Poly(den_q))
    except ZeroDivisionError:
        return None, fit
    if cand.degree != deg:
        return None, fit
    return cand, None


def divide_right(a: RatFunc, w: RatFunc) -> RatFunc | None:
    """U with U o w = a, or None; exact in all cases.

    Right division is unique when it exists.  For rational w this is a
    linear problem in the coefficients of U and is solved exactly.
    """
    if a.degree % w.degree:
        return None
    if a.is_polynomial() and w.is_polynomial():
        u = poly_divide_right(a.num, w.num)
        return RatFunc(u) if u is not None else None
    k = a.degree // w.degree
    # unknown U = (sum u_j t^j) / (sum v_j t^j); clear denominators:
    #   (sum u_j Wp^j Wq^(k-j)) * Aq == (sum v_j Wp^j Wq^(k-j)) * Ap
    wp, wq = w.num, w.den
    powers = []
    for j in range(k + 1):
        powers.append(wp**j * wq ** (k - j))
    lhs = [p * a.den for p in powers]
    rhs = [p * a.num for p in powers]
    max_len = max(max(len(p.coeffs) for p in lhs), max(len(p.coeffs) for p in rhs))
    rows = []
    for c in range(max_len):
        rows.append([p.coeff(c) for p in lhs] + [-p.coeff(c) for p in rhs])
    for vec in qi_nullspace(rows):
        num = Poly(vec[: k + 1])
        den = Poly(vec[k + 1 :])
        if den.is_zero() or num.is_zero():
            continue
        try:
            cand = RatFunc(num, den)
        except ZeroDivisionError:
            continue
        if cand.degree == k and equal_exact(compose(cand, w), a):
            return cand
    return None


# -- Engstrom's theorem -------------------------------------------------------------


def engstrom_split(a, c, d, b):
    """Split A o C = D o B into U, V, and inner polynomials.

    Returns (U, V, A~, C~, D~, B~) with A = U o A~, D = U o D~, C = C~ o V,
    B = B~ o V, A~ o C~ = D~ o B~, deg U = gcd(deg A, deg D) and
    deg V = gcd(deg C, deg B).
    """
    a, c, d, b = (x if isinstance(x, RatFunc) else RatFunc(x) for x in (a, c, d, b))
    for x in (a, c, d, b):
        if not x.is_polynomial():
            raise DecompositionError("engstrom_split requires polynomials")
    if not equal_exact(compose(a, c), compose(d, b)):
        raise DecompositionError("precondition A o C = D o B fails")
    gu = math.gcd(a.degree, d.degree)
    gv = math.gcd(c.degree, b.degree)

    va = candidate_right_factor(a.num, a.degree // gu)
    ua = poly_divide_right(a.num, va)
    if ua is None:
        raise DecompositionError("left gcd factor of A is not realizable over Q(i)")
    u = RatFunc(ua)
    a_t = RatFunc(va)
    d_t = divide_left(d, u)
    if d_t is None:
        raise DecompositionError("U does not left-divide D over Q(i)")

    vc = candidate_right_factor(c.num, gv)
    c_t = poly_divide_right(c.num, vc)
    vb = candidate_right_factor(b.num, gv)
    b_t = poly_divide_right(b.num, vb)
    if c_t is None or b_t is None or vc != vb:
        raise DecompositionError("common right gcd factor of C and B not found")
    v = RatFunc(vc)
    c_t = RatFunc(c_t)
    b_t = RatFunc(b_t)

    lhs = compose(a_t, c_t)
    if not equal_exact(lhs, compose(d_t, b_t)):
        fixed = False
        for sigma in poly_affine_symmetries(ua):
            d_try = RatFunc(sigma.compose(d_t.num))
            if equal_exact(lhs, compose(d_try, b_t)):
                d_t = d_try
                fixed = True
                break
        if not fixed:
            raise DecompositionError("inner equality not realizable over Q(i)")
    assert u.degree == gu and v.degree == gv
    return u, v, a_t, c_t, d_t, b_t


# -- conjugacy ------------------------------------------------------------------------


def _center_poly(p: Poly):
    """Translate so the z^(n-1) coefficient vanishes: returns f(z+b) - b."""
    n = int(p.degree)
    b = -p.coeff(n - 1) / (p.leading() * gq(n))
    return p.shift_root(b) - Poly.const(b)


def poly_conjugate_over_c(f, g) -> bool:
    """Exact decision of Mobius conjugacy over C for polynomials.

    After centering both, conjugacy by z -> a z requires g_k = f_k a^(k-1)
    for every k; existence of a complex a is equivalent to an exact
    power-product identity among the coefficient ratios, so no root
    extraction is needed.
    """
    p, q = _as_poly(f), _as_poly(g)
    if p.degree != q.degree or p.degree < 2:
        return p == q
    pc, qc = _center_poly(p), _center_poly(q)
    n = int(pc.degree)
    ratios = {}
    for k in range(n + 1):
        a, b = pc.coeff(k), qc.coeff(k)
        if a.is_zero() != b.is_zero():
            return False
        if a.is_zero():
            continue
        if k == 1:
            if a != b:
                return False
            continue
        ratios[k - 1] = b / a
    # exists a with a^e = r_e for all exponents e  <=>  the Bezout product
    # w = prod r_e^(m_e) (with sum m_e e = d = gcd) satisfies w^(e/d) = r_e
    exps = sorted(ratios)
    d, coeffs = _gcd_combo(exps)
    w = ONE
    for e, m in zip(exps, coeffs):
        w = w * ratios[e] ** m
    return all(w ** (e // d) == ratios[e] for e in exps)


def _gcd_combo(nums):
    """gcd of nums together with Bezout coefficients (iterated)."""
    d = nums[0]
    coeffs = [1] + [0] * (len(nums) - 1)
    for idx in range(1, len(nums)):
        g, x, y = _ext_gcd(d, nums[idx])
        coeffs = [c * x for c in coeffs[:idx]] + [y] + [0] * (len(nums) - idx - 1)
        d = g
    return d, coeffs


def _ext_gcd(a, b):
    if b == 0:
        return a, 1, 0
    g, x, y = _ext_gcd(b, a % b)
    return g, y, x - (a // b) * y


def rational_conjugacy(f: RatFunc, g: RatFunc):
    """A Mobius mu with mu^(-1) o f o mu = g, or None; exact.

    Works through branch-point alignment, so it needs at least three branch
    values, all exactly identified.  Raises ConjugacyUndecidable otherwise
    (polynomial pairs should use poly_conjugate_over_c instead).
    """
    if f.degree != g.degree:
        return None
    pf = ramification_portrait(f)
    pg = ramification_portrait(g)
    if sorted(e.partition for e in pf.branch_points) != sorted(
        e.partition for e in pg.branch_points
    ):
        return None
    if len(pf.branch_points) < 3:
        raise ConjugacyUndecidable("fewer than three branch values")
    if not all(e.exact for e in pf.branch_points) or not all(e.exact for e in pg.branch_points):
        raise ConjugacyUndecidable("branch values outside Q(i)")
    gv = [e for e in pg.branch_points]
    fv = [e for e in pf.branch_points]
    three = gv[:3]
    candidates = []
    for img0 in fv:
        for img1 in fv:
            for img2 in fv:
                if len({id(img0), id(img1), id(img2)}) != 3:
                    continue
                if (
                    three[0].partition != img0.partition
                    or three[1].partition != img1.partition
                    or three[2].partition != img2.partition
                ):
                    continue
                candidates.append((img0.value, img1.value, img2.value))
    src = tuple(e.value for e in three)
    for dst in candidates:
        try:
            mu = Mobius.from_three_points(src, dst)
        except ValueError:
            continue
        if equal_exact(conjugate(f, mu), g):
            return mu
    return None


def are_conjugate(f: RatFunc, g: RatFunc) -> bool:
    """Exact Mobius conjugacy over C where decidable."""
    if f.is_polynomial() and g.is_polynomial():
        return poly_conjugate_over_c(f, g)
    if f.is_polynomial() != g.is_polynomial():
        # a polynomial is conjugate to a non-polynomial only through a
        # totally ramified finite fixed point; portrait alignment covers it
        pass
    return rational_conjugacy(f, g) is not None


# -- decompositions of rational functions via block systems ---------------------------


def _seeded_rng(seed, tag):
    import random

    return random.Random(f"rittdyn-{tag}-{seed}")


def right_factor_from_blocks(f: RatFunc, mono: MonodromyData, labels, seed=0, attempts=5):
    """Exact right factor of f realizing the given block system, or None.

    The block sum u(z) = sum over the block of z of 1/(z' - t0) is a
    Mobius translate of the true factor, and is canonically normalized, so
    its denominator-monic coefficients live in Q(i) and can be recovered
    from a least-squares fit and verified exactly.
    """
    from .numerics import _coeff_arrays, _kernel

    n = f.degree
    blocks = permgrp.labels_to_blocks(labels)
    block_of = {}
    for b_idx, blk in enumerate(blocks):
        for i in blk:
            block_of[i] = b_idx
    # blocks are the fibers of the right factor: block size = its degree
    deg_v = len(blocks[0])

    pn, pd, rpn, rpd = _coeff_arrays(f)
    rng = _seeded_rng(seed, f"blocks-{labels}")
    anchor = mono.base_point
    base_fiber = [complex(z) for z in mono.fiber]

    for attempt in range(attempts):
        t0 = complex(rng.randint(2, 9), rng.randint(1, 7)) / (1 + rng.randint(0, 3))
        samples = []
        # sample base values in a safe disk around the anchor
        count = (2 * deg_v + 8 + n - 1) // n + 2
        offsets = [0.0] + [
            (0.25 + 0.5 * rng.random()) * cmath.exp(2j * math.pi * rng.random())
            for _ in range(count - 1)
        ]
        ok = True
        for off in offsets:
            target = anchor + off
            seg = [anchor + (target - anchor) * t / 16.0 for t in range(17)]
            wpts = np.asarray(seg, dtype=complex)
            fiber_t = []
            for z in base_fiber:
                zc, chart = (z, 0) if abs(z) <= 2.0 else (1.0 / z, 1)
                status, _, vals, charts = _kernel.track_path(
                    pn, pd, rpn, rpd, wpts, zc, chart,
                    DEFAULT_OPTIONS.rtol, DEFAULT_OPTIONS.min_step, DEFAULT_OPTIONS.max_newton,
                )
                if status != 0:
                    ok = False
                    break
                zend, cend = vals[-1], charts[-1]
                fiber_t.append((zend, cend))
            if not ok:
                break
            for i, (zend, cend) in enumerate(fiber_t):
                val = 0j
                good = True
                for j in blocks[block_of[i]]:
                    zj, cj = fiber_t[j]
                    if cj == 1:
                        if abs(zj) < 1e-10:
                            good = False
                            break
                        zj = 1.0 / zj
                    val += 1.0 / (zj - t0)
                if cend == 1:
                    if abs(zend) < 1e-10:
                        good = False
                    else:
                        zend = 1.0 / zend
                if good and abs(zend) < 1e7:
                    samples.append((zend, val))
        if not ok or len(samples) < 2 * deg_v + 4:
            continue
        cand = _fit_rational(samples, deg_v)
        if cand is None:
            continue
        u = divide_right(f, cand)
        if u is not None:
            return DecompClass(u, cand, block_labels=labels)
    return DecompClass(None, None, block_labels=labels, exact=False)


def decompositions_from_monodromy(f: RatFunc, mono: MonodromyData | None = None, seed=0):
    """Nontrivial decomposition classes of a rational function via block systems."""
    if mono is None:
        mono = monodromy(f, seed=seed)
    systems = permgrp.all_block_systems(mono.generators(), f.degree)
    return [right_factor_from_blocks(f, mono, labels, seed) for labels in systems]


def block_systems(mono: MonodromyData):
    """All nontrivial block systems of the monodromy action."""
    return permgrp.all_block_systems(mono.generators(), mono.degree)


# -- decompositions of iterates -----------------------------------------------------


@dataclass(frozen=True)
class IterateClassInfo:
    cls: DecompClass
    induced_from: tuple  # levels N < d whose decompositions induce this class


@dataclass(frozen=True)
class StabilizationReport:
    function: RatFunc
    d_max: int
    levels: dict  # d -> list of IterateClassInfo
    stable_n: int | None  # least N with every later class induced from level N
    status: str  # "stabilized" | "not stabilized" | "incomplete"
    note: str = ""


def _classes_of(f: RatFunc, seed=0):
    if f.is_polynomial():
        return poly_decompose(f)
    return [c for c in decompositions_from_monodromy(f, seed=seed)]


def _is_induced_from(a: RatFunc, iterates, cls: DecompClass, d: int, n_level: int, seed=0):
    """Divide-left decision: is the class at level d induced by level n_level."""
    if not cls.exact:
        return False
    x, y = cls.U, cls.V
    target = iterates[n_level]
    for k1 in range(0, d - n_level + 1):
        k2 = d - n_level - k1
        if x.degree % (a.degree**k1) or y.degree % (a.degree**k2):
            continue
        if k1 == 0:
            x_candidates = [x]
        else:
            x_candidates = divide_left_all(x, iterates[k1], seed)
        if not x_candidates:
            continue
        if k2 == 0:
            y_prime = y
        else:
            y_prime = divide_right(y, iterates[k2])
        if y_prime is None:
            continue
        for x_prime in x_candidates:
            if equal_exact(compose(x_prime, y_prime), target):
                return True
    return False


def induced_stabilization(a: RatFunc, d_max: int, seed: int = 0, guard=None) -> StabilizationReport:
    """Decomposition classes of the iterates of a, with induced verdicts.

    Reports the least N such that every class at levels in (N, d_max] is
    induced by a decomposition of the N-th iterate, or "not stabilized".
    The enumeration is exact for polynomials and goes through monodromy
    block systems for rational functions.
    """
    if a.degree < 2:
        raise ValueError("stabilization needs degree >= 2")
    iterates = {0: RatFunc.x()}
    for d in range(1, d_max + 1):
        iterates[d] = iterate(a, d, guard=guard)

    levels = {}
    incomplete = False
    for d in range(1, d_max + 1):
        infos = []
        for cls in _classes_of(iterates[d], seed):
            if not cls.exact:
                incomplete = True
                infos.append(IterateClassInfo(cls, ()))
                continue
            induced = tuple(
                n_level
                for n_level in range(1, d)
                if _is_induced_from(a, iterates, cls, d, n_level, seed)
            )
            infos.append(IterateClassInfo(cls, induced))
        levels[d] = infos

    stable_n = None
    for n_level in range(1, d_max):
        if all(
            n_level in info.induced_from
            for d in range(n_level + 1, d_max + 1)
            for info in levels[d]
            if info.cls.exact
        ) and not incomplete:
            stable_n = n_level
            break

    if incomplete:
        status = "incomplete"
    elif stable_n is not None:
        status = "stabilized"
    else:
        status = "not stabilized"
    note = "" if not incomplete else "some classes have numeric-only factors"
    return StabilizationReport(a, d_max, levels, stable_n, status, note)


# -- elementary transformations and equivalence classes ------------------------------


@dataclass(frozen=True)
class ChainEdge:
    """One elementary transformation: reps[src] = U o V, transformed = V o U.

    transformed equals reps[dst] when the edge discovered a new class and is
    Mobius-conjugate to reps[dst] otherwise.
    """

    src: int
    dst: int
    U: RatFunc
    V: RatFunc
    transformed: RatFunc


@dataclass(frozen=True)
class EquivClassReport:
    representatives: list
    edges: list
    count: int
    status: str  # "closed" | "lower_bound"
    undecided: int = 0

    @property
    def d_value(self):
        return self.count


def equivalence_classes(a: RatFunc, depth: int = 4, seed: int = 0) -> EquivClassReport:
    """BFS over elementary transformations, quotiented by conjugacy.

    Every reported adjacency carries its (U, V) witness and is re-verified
    by composition when the edge is created.
    """
    if a.degree < 2:
        raise ValueError("equivalence classes need degree >= 2")
    reps = [a]
    edges = []
    frontier = [0]
    undecided = 0
    closed = False
    for _round in range(depth):
        new_frontier = []
        for idx in frontier:
            f = reps[idx]
            for cls in _classes_of(f, seed):
                if not cls.exact:
                    undecided += 1
                    continue
                if cls.is_trivial:
                    continue
                transformed = compose(cls.V, cls.U)
                assert equal_exact(compose(cls.U, cls.V), f)
                match = None
                for r_idx, rep in enumerate(reps):
                    try:
                        if are_conjugate(transformed, rep):
                            match = r_idx
                            break
                    except ConjugacyUndecidable:
                        undecided += 1
                if match is None:
                    reps.append(transformed)
                    new_idx = len(reps) - 1
                    edges.append(ChainEdge(idx, new_idx, cls.U, cls.V, transformed))
                    new_frontier.append(new_idx)
                else:
                    if match != idx and not any(
                        e.src == idx and e.dst == match for e in edges
                    ):
                        edges.append(ChainEdge(idx, match, cls.U, cls.V, transformed))
        if not new_frontier:
            closed = True
            break
        frontier = new_frontier
    status = "closed" if closed and undecided == 0 else ("closed" if closed else "lower_bound")
    if undecided:
        status = "lower_bound"
    return EquivClassReport(reps, edges, len(reps), status, undecided)
