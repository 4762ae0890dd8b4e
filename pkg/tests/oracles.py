"""Independent oracles used to freeze expected values.

Everything here is deliberately written against plain dict/Fraction
arithmetic so it shares no code path with the package under test.
"""

from fractions import Fraction


def _zero():
    return (Fraction(0), Fraction(0))


def cadd(x, y):
    return (x[0] + y[0], x[1] + y[1])


def cmul(x, y):
    return (x[0] * y[0] - x[1] * y[1], x[0] * y[1] + x[1] * y[0])


def poly_add(a, b):
    out = dict(a)
    for k, v in b.items():
        out[k] = cadd(out.get(k, _zero()), v)
    return {k: v for k, v in out.items() if v != _zero()}


def poly_mul(a, b):
    out = {}
    for i, x in a.items():
        for j, y in b.items():
            k = i + j
            out[k] = cadd(out.get(k, _zero()), cmul(x, y))
    return {k: v for k, v in out.items() if v != _zero()}


def poly_pow(a, n):
    out = {0: (Fraction(1), Fraction(0))}
    for _ in range(n):
        out = poly_mul(out, a)
    return out


def poly_compose(a, b):
    """a(b(z)) for dict polynomials."""
    out = {}
    for k, c in a.items():
        out = poly_add(out, poly_mul({0: c}, poly_pow(b, k)))
    return out


def from_int_coeffs(cs):
    """Dict polynomial from low-first integer coefficient list."""
    return {
        k: (Fraction(c), Fraction(0))
        for k, c in enumerate(cs)
        if c
    }


def chebyshev_dict(n):
    """T_n by the recurrence, as a dict polynomial."""
    t0 = from_int_coeffs([1])
    t1 = from_int_coeffs([0, 1])
    if n == 0:
        return t0
    for _ in range(n - 1):
        t0, t1 = t1, poly_add(poly_mul(from_int_coeffs([0, 2]), t1), {k: (-v[0], -v[1]) for k, v in t0.items()})
    return t1


def to_low_first_int_list(d):
    if not d:
        return []
    n = max(d)
    out = []
    for k in range(n + 1):
        c = d.get(k, _zero())
        assert c[1] == 0, "nonreal oracle coefficient"
        assert c[0].denominator == 1, "nonintegral oracle coefficient"
        out.append(int(c[0]))
    return out
