"""Pure Python predictor-corrector path tracking kernel.

Mirror of the compiled kernel in _tracking.pyx; rittdyn.numerics selects
between the two at import time.  A fiber point is carried in one of two
coordinate charts (0: z itself, 1: u = 1/z) so points may pass near the
pole set or the point at infinity without overflow.

Status codes: 0 ok, 1 step-size underflow, 2 corrector divergence.
"""

IMPL = "python"

_CHART_SWITCH = 2.0
_DIVERGE = 1.0e8


def _val_der(coeffs, z):
    """Horner evaluation of value and derivative."""
    v = 0j
    d = 0j
    for c in reversed(coeffs):
        d = d * z + v
        v = v * z + c
    return v, d


def _newton(pn, pd, w, z, rtol, maxit):
    for _ in range(maxit):
        nv, nd = _val_der(pn, z)
        qv, qd = _val_der(pd, z)
        g = nv - w * qv
        dg = nd - w * qd
        if dg == 0:
            return z, False
        step = g / dg
        z = z - step
        if abs(z) > _DIVERGE:
            return z, False
        if abs(step) <= rtol * (1.0 + abs(z)):
            return z, True
    return z, False


def track_path(pn, pd, rpn, rpd, wpts, z0, chart0, rtol=1e-11, min_step=2.0**-20, max_newton=14):
    """Track one fiber point along the waypoint polyline.

    Returns (status, failed_arc, vals, charts) where vals[k], charts[k] give
    the position after waypoint k (so vals[0] is the start position).
    """
    z = complex(z0)
    chart = chart0
    vals = [z]
    charts = [chart]
    for arc in range(len(wpts) - 1):
        wa = complex(wpts[arc])
        wb = complex(wpts[arc + 1])
        dw = wb - wa
        t = 0.0
        h = 1.0 / 32.0
        while t < 1.0:
            step = min(h, 1.0 - t)
            w_cur = wa + t * dw
            w_next = wa + (t + step) * dw
            a, b = (pn, pd) if chart == 0 else (rpn, rpd)
            # predictor: dz/dw = Q / (P' - w Q')
            qv, qd = _val_der(b, z)
            nv, nd = _val_der(a, z)
            denom = nd - w_cur * qd
            if denom != 0:
                z_pred = z + (w_next - w_cur) * qv / denom
            else:
                z_pred = z
            z_new, ok = _newton(a, b, w_next, z_pred, rtol, max_newton)
            if ok:
                # sheet-hop guard: the correction must stay small next to
                # the predictor move, else retry with a shorter step
                move = abs(z_pred - z)
                if abs(z_new - z_pred) > 0.3 * move + 10.0 * rtol * (1.0 + abs(z_new)):
                    ok = False
            if ok:
                t += step
                z = z_new
                if h < 0.25:
                    h *= 2.0
                if abs(z) > _CHART_SWITCH:
                    z = 1.0 / z
                    chart = 1 - chart
            else:
                h *= 0.5
                if h < min_step:
                    return 1, arc, vals, charts
        vals.append(z)
        charts.append(chart)
    return 0, -1, vals, charts
