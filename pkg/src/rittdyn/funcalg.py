"""Exact algebra of polynomials and rational functions over Q(i).

Polynomials store coefficients lowest degree first.  Rational functions are
kept in canonical form (numerator and denominator coprime, denominator
monic) so that equality is structural.  All values are immutable and all
operations are pure.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .field import GaussianRational, INF, ONE, ZERO, gq

NEG_INF = float("-inf")

#: Default cap on the degree of any constructed function.
DEGREE_GUARD = 2**10


class DegreeGuardError(ValueError):
    """Raised when an operation would exceed the configured degree guard."""

    def __init__(self, required, guard):
        super().__init__(
            f"operation needs degree {required}, above the degree guard {guard}; "
            f"pass guard={required} or more to allow it"
        )
        self.required = required
        self.guard = guard


def _as_gq(x):
    if type(x) is GaussianRational:
        return x
    return GaussianRational(x)


class Poly:
    """Dense polynomial over Q(i), low-order coefficients first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [_as_gq(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero():
        return Poly(())

    @staticmethod
    def one():
        return Poly((ONE,))

    @staticmethod
    def x():
        return Poly((ZERO, ONE))

    @staticmethod
    def const(c):
        return Poly((c,))

    @staticmethod
    def monomial(n, c=ONE):
        return Poly((ZERO,) * n + (_as_gq(c),))

    # -- structure ---------------------------------------------------------

    @property
    def degree(self):
        """Degree, or -inf for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def is_zero(self):
        return not self.coeffs

    def is_constant(self):
        return len(self.coeffs) <= 1

    def leading(self):
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coeff(self, k):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else ZERO

    def is_monic(self):
        return bool(self.coeffs) and self.coeffs[-1] == ONE

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __bool__(self):
        return bool(self.coeffs)

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(_as_gq(other))
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, c in enumerate(b):
            out[k] = out[k] + c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(_as_gq(other))
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(_as_gq(other))
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly.zero()
        out = [ZERO] * (len(a) + len(b) - 1)
        for i, ci in enumerate(a):
            if ci.is_zero():
                continue
            for j, cj in enumerate(b):
                out[i + j] = out[i + j] + ci * cj
        return Poly(out)

    __rmul__ = __mul__

    def scale(self, c):
        c = _as_gq(c)
        return Poly([a * c for a in self.coeffs])

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative polynomial power")
        result = Poly.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def divmod(self, other):
        """Exact Euclidean division: self = q*other + r with deg r < deg other."""
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        d = len(other.coeffs) - 1
        lead_inv = other.leading().inverse()
        quot = [ZERO] * max(0, len(rem) - d)
        for k in range(len(rem) - 1, d - 1, -1):
            c = rem[k]
            if c.is_zero():
                continue
            q = c * lead_inv
            quot[k - d] = q
            for j, oc in enumerate(other.coeffs):
                rem[k - d + j] = rem[k - d + j] - q * oc
        return Poly(quot), Poly(rem)

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def monic(self):
        if self.is_zero():
            return self
        return self.scale(self.leading().inverse())

    def derivative(self):
        return Poly([c * k for k, c in enumerate(self.coeffs)][1:])

    def eval(self, z):
        """Exact evaluation at a GaussianRational."""
        z = _as_gq(z)
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def eval_complex(self, z):
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * z + c.to_complex()
        return acc

    def compose(self, other):
        """self(other(z)) by Horner's rule on polynomials."""
        acc = Poly.zero()
        for c in reversed(self.coeffs):
            acc = acc * other + Poly.const(c)
        return acc

    def reversed_coeffs(self, length=None):
        """Coefficients of z^n * self(1/z), zero padded to the given length."""
        n = length if length is not None else len(self.coeffs)
        cs = list(self.coeffs) + [ZERO] * (n - len(self.coeffs))
        return Poly(list(reversed(cs)))

    def shift_root(self, c):
        """self(z + c)."""
        return self.compose(Poly((_as_gq(c), ONE)))

    def order_at(self, z0):
        """Multiplicity of z0 as a root (0 if not a root)."""
        p = self
        z0 = _as_gq(z0)
        k = 0
        while not p.is_zero() and p.eval(z0).is_zero():
            p = p // Poly((-z0, ONE))
            k += 1
        return k

    def to_complex_coeffs(self):
        return [c.to_complex() for c in self.coeffs]

    def __repr__(self):
        return f"Poly({render_poly(self)!r})"


def gcd(a: Poly, b: Poly) -> Poly:
    """Monic polynomial gcd over Q(i)."""
    while not b.is_zero():
        a, b = b, a % b
        if not b.is_zero():
            b = b.monic()
    return a.monic() if not a.is_zero() else a


def squarefree_decomposition(p: Poly):
    """Yun's algorithm: list of (factor, multiplicity), factors squarefree,
    pairwise coprime, with p = lc * prod factor^multiplicity."""
    if p.is_constant():
        return []
    p = p.monic()
    dp = p.derivative()
    a = gcd(p, dp)
    b = p // a
    c = dp // a
    d = c - b.derivative()
    out = []
    m = 1
    while b.degree > 0:
        a = gcd(b, d)
        if a.degree > 0:
            out.append((a.monic(), m))
        b = b // a
        d = (d // a) - b.derivative()
        m += 1
    return out


def local_multiplicities(p: Poly):
    """Multiset of root multiplicities of p (degree many entries in total)."""
    parts = []
    for factor, mult in squarefree_decomposition(p):
        parts.extend([mult] * int(factor.degree))
    return sorted(parts, reverse=True)


class RatFunc:
    """Rational function over Q(i) in canonical form."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, guard=None):
        if not isinstance(num, Poly):
            num = Poly.const(_as_gq(num)) if not isinstance(num, (list, tuple)) else Poly(num)
        if den is None:
            den = Poly.one()
        elif not isinstance(den, Poly):
            den = Poly.const(_as_gq(den)) if not isinstance(den, (list, tuple)) else Poly(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        g = gcd(num, den)
        if g.degree > 0:
            num = num // g
            den = den // g
        lead_inv = den.leading().inverse()
        num = num.scale(lead_inv)
        den = den.scale(lead_inv)
        deg = max(num.degree, den.degree)
        limit = guard if guard is not None else DEGREE_GUARD
        if deg != NEG_INF and deg > limit:
            raise DegreeGuardError(int(deg), limit)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RatFunc is immutable")

    @staticmethod
    def x():
        return RatFunc(Poly.x())

    @staticmethod
    def const(c):
        return RatFunc(Poly.const(_as_gq(c)))

    @property
    def degree(self):
        return max(self.num.degree, self.den.degree)

    def is_polynomial(self):
        return self.den.degree == 0

    def is_constant(self):
        return self.num.is_constant() and self.den.is_constant()

    def __eq__(self, other):
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    # -- evaluation ----------------------------------------------------------

    def eval_exact(self, p):
        """Exact evaluation at a point of Q(i) U {inf}."""
        if p is INF:
            dn, dd = self.num.degree, self.den.degree
            if dn > dd:
                return INF
            if dn < dd:
                return ZERO
            return self.num.leading() / self.den.leading()
        p = _as_gq(p)
        d = self.den.eval(p)
        if d.is_zero():
            return INF
        return self.num.eval(p) / d

    def eval_complex(self, z):
        d = self.den.eval_complex(z)
        n = self.num.eval_complex(z)
        if d == 0:
            return complex("inf")
        return n / d

    def value_at_infinity(self):
        return self.eval_exact(INF)

    # -- algebra ---------------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, RatFunc):
            other = RatFunc.const(_as_gq(other))
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        if not isinstance(other, RatFunc):
            other = RatFunc.const(_as_gq(other))
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, RatFunc):
            other = RatFunc.const(_as_gq(other))
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, RatFunc):
            other = RatFunc.const(_as_gq(other))
        if other.num.is_zero():
            raise ZeroDivisionError("division by the zero function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        if not isinstance(other, RatFunc):
            other = RatFunc.const(_as_gq(other))
        return other / self

    def __pow__(self, n):
        if not isinstance(n, int):
            raise TypeError("integer exponent required")
        if n == 0:
            return RatFunc.const(ONE)
        if n < 0:
            return RatFunc(self.den, self.num) ** (-n)
        return RatFunc(self.num**n, self.den**n)

    def derivative(self):
        n, d = self.num, self.den
        return RatFunc(n.derivative() * d - n * d.derivative(), d * d)

    def compose(self, other, guard=None):
        return compose(self, other, guard=guard)

    def flip(self):
        """The function f(1/z), i.e. precomposition with the coordinate flip."""
        n = max(len(self.num.coeffs), len(self.den.coeffs))
        return RatFunc(self.num.reversed_coeffs(n), self.den.reversed_coeffs(n))

    def postflip(self):
        """The function 1/f(z)."""
        return RatFunc(self.den, self.num)

    def numeric_coeffs(self):
        return self.num.to_complex_coeffs(), self.den.to_complex_coeffs()

    def __repr__(self):
        return f"RatFunc({render_ratfunc(self)!r})"


class Mobius:
    """Degree-one rational map, stored as an invertible 2x2 matrix over Q(i)."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d):
        a, b, c, d = _as_gq(a), _as_gq(b), _as_gq(c), _as_gq(d)
        if (a * d - b * c).is_zero():
            raise ValueError("Mobius transformation must be invertible")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)

    def __setattr__(self, name, value):
        raise AttributeError("Mobius is immutable")

    @staticmethod
    def identity():
        return Mobius(1, 0, 0, 1)

    @staticmethod
    def from_ratfunc(f: RatFunc):
        if f.degree != 1:
            raise ValueError("Mobius requires a degree-1 function")
        return Mobius(f.num.coeff(1), f.num.coeff(0), f.den.coeff(1), f.den.coeff(0))

    def to_ratfunc(self):
        return RatFunc(Poly((self.b, self.a)), Poly((self.d, self.c)))

    def __call__(self, p):
        if p is INF:
            if self.c.is_zero():
                return INF
            return self.a / self.c
        p = _as_gq(p)
        den = self.c * p + self.d
        if den.is_zero():
            return INF
        return (self.a * p + self.b) / den

    def inverse(self):
        return Mobius(self.d, -self.b, -self.c, self.a)

    def __matmul__(self, other):
        """Composition self(other(z))."""
        return Mobius(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def normalized(self):
        """Scale so the first nonzero entry of (a, b, c, d) is 1."""
        for e in (self.a, self.b, self.c, self.d):
            if not e.is_zero():
                inv = e.inverse()
                return Mobius(self.a * inv, self.b * inv, self.c * inv, self.d * inv)
        raise ValueError("degenerate Mobius")

    def __eq__(self, other):
        if not isinstance(other, Mobius):
            return NotImplemented
        s, o = self.normalized(), other.normalized()
        return (s.a, s.b, s.c, s.d) == (o.a, o.b, o.c, o.d)

    def __hash__(self):
        s = self.normalized()
        return hash((s.a, s.b, s.c, s.d))

    @staticmethod
    def to_zero_one_inf(p0, p1, p2):
        """The Mobius map sending (p0, p1, p2) to (0, 1, inf)."""
        pts = (p0, p1, p2)
        if len({p if p is INF else _as_gq(p) for p in pts}) != 3:
            raise ValueError("points must be distinct")
        # rows of the matrix for z -> ((z-p0)(p1-p2)) / ((z-p2)(p1-p0))
        if p0 is INF:
            # z -> (p1-p2)/(z-p2)
            p1, p2 = _as_gq(p1), _as_gq(p2)
            return Mobius(ZERO, p1 - p2, ONE, -p2)
        if p1 is INF:
            p0, p2 = _as_gq(p0), _as_gq(p2)
            return Mobius(ONE, -p0, ONE, -p2)
        if p2 is INF:
            p0, p1 = _as_gq(p0), _as_gq(p1)
            return Mobius(ONE, -p0, ZERO, p1 - p0)
        p0, p1, p2 = _as_gq(p0), _as_gq(p1), _as_gq(p2)
        return Mobius(p1 - p2, -p0 * (p1 - p2), p1 - p0, -p2 * (p1 - p0))

    @staticmethod
    def from_three_points(src, dst):
        """The Mobius map sending src[k] to dst[k] for k = 0, 1, 2."""
        return Mobius.to_zero_one_inf(*dst).inverse() @ Mobius.to_zero_one_inf(*src)

    def __repr__(self):
        return f"Mobius({self.a}, {self.b}, {self.c}, {self.d})"


# -- the operations of the module ---------------------------------------------


def compose(f: RatFunc, g: RatFunc, guard=None) -> RatFunc:
    """Exact composition f(g(z)) in canonical form."""
    if f.is_constant() or g.is_constant():
        raise ValueError("compose requires nonconstant functions")
    n = max(len(f.num.coeffs), len(f.den.coeffs)) - 1
    gp, gq_ = g.num, g.den
    # homogenized Horner in (gp, gq_): sum a_k gp^k gq_^(n-k)
    powers_q = [Poly.one()]
    for _ in range(n):
        powers_q.append(powers_q[-1] * gq_)

    def hom(p: Poly) -> Poly:
        acc = Poly.zero()
        gp_pow = Poly.one()
        for k in range(n + 1):
            c = p.coeff(k)
            if not c.is_zero():
                acc = acc + (gp_pow * powers_q[n - k]).scale(c)
            if k < n:
                gp_pow = gp_pow * gp
        return acc

    result = RatFunc(hom(f.num), hom(f.den), guard=guard)
    assert result.degree == f.degree * g.degree, "composition degree mismatch"
    return result


def iterate(f: RatFunc, d: int, guard=None) -> RatFunc:
    """The d-fold iterate of f, with the degree guard enforced up front."""
    if d < 1:
        raise ValueError("iterate requires d >= 1")
    if d == 1:
        return f
    if f.degree < 2:
        raise ValueError("iterate requires degree >= 2")
    limit = guard if guard is not None else DEGREE_GUARD
    required = f.degree**d
    if required > limit:
        raise DegreeGuardError(required, limit)
    out = f
    for _ in range(d - 1):
        out = compose(out, f, guard=limit)
    return out


def conjugate(f: RatFunc, mu) -> RatFunc:
    """mu^(-1) o f o mu; degree is preserved."""
    if isinstance(mu, RatFunc):
        mu = Mobius.from_ratfunc(mu)
    m = mu.to_ratfunc()
    minv = mu.inverse().to_ratfunc()
    return compose(minv, compose(f, m))


def equal_exact(f: RatFunc, g: RatFunc) -> bool:
    """True iff the canonical forms are identical."""
    return f == g


def derivative(f: RatFunc) -> RatFunc:
    return f.derivative()


def power_map(n: int) -> RatFunc:
    """z^n for n >= 1, or 1/z^|n| for n <= -1."""
    if n == 0:
        raise ValueError("power map needs nonzero exponent")
    if n > 0:
        return RatFunc(Poly.monomial(n))
    return RatFunc(Poly.one(), Poly.monomial(-n))


# -- rendering ------------------------------------------------------------------


def render_coeff(c: GaussianRational, *, lead=False):
    s = str(c)
    if c.im and c.re:
        s = f"({s})"
    return s


def render_poly(p: Poly) -> str:
    if p.is_zero():
        return "0"
    terms = []
    for k in range(len(p.coeffs) - 1, -1, -1):
        c = p.coeffs[k]
        if c.is_zero():
            continue
        if k == 0:
            terms.append(render_coeff(c))
            continue
        zpart = "z" if k == 1 else f"z^{k}"
        if c == ONE:
            terms.append(zpart)
        elif c == -ONE:
            terms.append(f"-{zpart}")
        else:
            terms.append(f"{render_coeff(c)}*{zpart}")
    out = terms[0]
    for t in terms[1:]:
        out += t if t.startswith("-") else "+" + t
    return out


def render_ratfunc(f: RatFunc) -> str:
    num = render_poly(f.num)
    if f.is_polynomial():
        return num
    den = render_poly(f.den)
    return f"({num})/({den})"
