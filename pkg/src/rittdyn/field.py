"""Exact arithmetic over the Gaussian rationals Q(i).

GaussianRational is the coefficient field for every exact object in the
package.  Values are immutable; both components are reduced fractions, so
equality and hashing are structural.
"""

from __future__ import annotations

import cmath
from fractions import Fraction


class GaussianRational:
    """A number re + im*i with rational re, im."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", re if type(re) is Fraction else Fraction(re))
        object.__setattr__(self, "im", im if type(im) is Fraction else Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    # -- predicates ------------------------------------------------------

    def is_zero(self):
        return not self.re and not self.im

    def is_rational(self):
        return not self.im

    def is_integer(self):
        return not self.im and self.re.denominator == 1

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return GaussianRational(other.re - self.re, other.im - self.im)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def inverse(self):
        n = self.re * self.re + self.im * self.im
        if not n:
            raise ZeroDivisionError("inverse of zero in Q(i)")
        return GaussianRational(self.re / n, -self.im / n)

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    # -- structure -------------------------------------------------------

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return not self.is_zero()

    def to_complex(self):
        return complex(self.re, self.im)

    __complex__ = to_complex

    def bit_size(self):
        """Total bit length of all numerators and denominators."""
        return (
            self.re.numerator.bit_length()
            + self.re.denominator.bit_length()
            + self.im.numerator.bit_length()
            + self.im.denominator.bit_length()
        )

    def __repr__(self):
        return f"GaussianRational({self.re!r}, {self.im!r})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        im = f"{self.im}*i" if abs(self.im) != 1 else ("i" if self.im > 0 else "-i")
        if not self.re:
            return im
        sign = "+" if self.im > 0 else ""
        return f"{self.re}{sign}{im}"


def _coerce(x):
    if type(x) is GaussianRational:
        return x
    if isinstance(x, (int, Fraction)):
        return GaussianRational(x)
    return NotImplemented


def gq(re=0, im=0):
    """Shorthand constructor."""
    return GaussianRational(re, im)


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)

#: The fourth roots of unity, the only roots of unity inside Q(i).
UNITS = (ONE, -ONE, I, -I)


class Infinity:
    """The point at infinity of the Riemann sphere (singleton)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "inf"

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("rittdyn-point-at-infinity")


INF = Infinity()


def rationalize_real(x, max_den=10**8, tol=1e-9):
    """Best small-denominator rational near x, or None if none is close."""
    if x != x or abs(x) == float("inf"):
        return None
    cand = Fraction(x).limit_denominator(max_den)
    if abs(cand - Fraction(x)) <= tol * max(1.0, abs(x)):
        return cand
    return None


def rationalize_complex(z, max_den=10**8, tol=1e-9):
    """GaussianRational near the complex number z, or None."""
    z = complex(z)
    re = rationalize_real(z.real, max_den, tol)
    im = rationalize_real(z.imag, max_den, tol)
    if re is None or im is None:
        return None
    cand = GaussianRational(re, im)
    if abs(cand.to_complex() - z) <= tol * max(1.0, abs(z)):
        return cand
    return None


def point_to_complex(p):
    """Complex value of an exact or numeric sphere point; INF maps to inf."""
    if p is INF:
        return complex(cmath.inf, 0.0)
    if isinstance(p, GaussianRational):
        return p.to_complex()
    return complex(p)


def chordal(z, w):
    """Chordal distance on the Riemann sphere between complex/INF points."""
    zinf = p_is_inf_like(z)
    winf = p_is_inf_like(w)
    if zinf and winf:
        return 0.0
    if zinf:
        w = complex(w)
        return 2.0 / (1.0 + abs(w) ** 2) ** 0.5
    if winf:
        z = complex(z)
        return 2.0 / (1.0 + abs(z) ** 2) ** 0.5
    z = complex(z)
    w = complex(w)
    return 2.0 * abs(z - w) / ((1.0 + abs(z) ** 2) * (1.0 + abs(w) ** 2)) ** 0.5


def p_is_inf_like(p):
    if p is INF:
        return True
    if isinstance(p, GaussianRational):
        return False
    z = complex(p)
    return cmath.isinf(z.real) or cmath.isinf(z.imag) or abs(z) > 1e15
