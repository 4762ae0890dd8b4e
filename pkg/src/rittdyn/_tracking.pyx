# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled predictor-corrector path tracking kernel.

Same contract as rittdyn._tracking_py (the pure Python twin); see there
for documentation.
"""

IMPL = "cython"

cdef double _CHART_SWITCH = 2.0
cdef double _DIVERGE = 1.0e8


cdef inline void _val_der(double complex[::1] coeffs, double complex z,
                          double complex *v_out, double complex *d_out) noexcept:
    cdef double complex v = 0
    cdef double complex d = 0
    cdef Py_ssize_t k
    for k in range(coeffs.shape[0] - 1, -1, -1):
        d = d * z + v
        v = v * z + coeffs[k]
    v_out[0] = v
    d_out[0] = d


cdef inline bint _newton(double complex[::1] pn, double complex[::1] pd,
                         double complex w, double complex *z_io,
                         double rtol, int maxit) noexcept:
    cdef double complex z = z_io[0]
    cdef double complex nv, nd, qv, qd, g, dg, step
    cdef int it
    for it in range(maxit):
        _val_der(pn, z, &nv, &nd)
        _val_der(pd, z, &qv, &qd)
        g = nv - w * qv
        dg = nd - w * qd
        if dg == 0:
            z_io[0] = z
            return False
        step = g / dg
        z = z - step
        if abs(z) > _DIVERGE:
            z_io[0] = z
            return False
        if abs(step) <= rtol * (1.0 + abs(z)):
            z_io[0] = z
            return True
    z_io[0] = z
    return False


def track_path(double complex[::1] pn, double complex[::1] pd,
               double complex[::1] rpn, double complex[::1] rpd,
               double complex[::1] wpts, double complex z0, int chart0,
               double rtol=1e-11, double min_step=2.0**-20, int max_newton=14):
    cdef double complex z = z0
    cdef int chart = chart0
    cdef Py_ssize_t arc
    cdef double complex wa, wb, dw, w_cur, w_next, qv, qd, nv, nd, denom, z_pred, z_new
    cdef double t, h, step
    cdef bint ok
    vals = [complex(z)]
    charts = [chart]
    for arc in range(wpts.shape[0] - 1):
        wa = wpts[arc]
        wb = wpts[arc + 1]
        dw = wb - wa
        t = 0.0
        h = 1.0 / 32.0
        while t < 1.0:
            step = h if h < 1.0 - t else 1.0 - t
            w_cur = wa + t * dw
            w_next = wa + (t + step) * dw
            if chart == 0:
                _val_der(pd, z, &qv, &qd)
                _val_der(pn, z, &nv, &nd)
            else:
                _val_der(rpd, z, &qv, &qd)
                _val_der(rpn, z, &nv, &nd)
            denom = nd - w_cur * qd
            if denom != 0:
                z_pred = z + (w_next - w_cur) * qv / denom
            else:
                z_pred = z
            z_new = z_pred
            if chart == 0:
                ok = _newton(pn, pd, w_next, &z_new, rtol, max_newton)
            else:
                ok = _newton(rpn, rpd, w_next, &z_new, rtol, max_newton)
            if ok:
                # sheet-hop guard: the correction must stay small next to
                # the predictor move, else retry with a shorter step
                if abs(z_new - z_pred) > 0.3 * abs(z_pred - z) + 10.0 * rtol * (1.0 + abs(z_new)):
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
        vals.append(complex(z))
        charts.append(chart)
    return 0, -1, vals, charts
