"""Compiled kernels for tracking fibers of the logarithmic Gauss map.

The fiber of gamma over [cos θ : sin θ] is cut out by
    F = f,   G = sin θ · z f_z - cos θ · w f_w.
Strands live either in the base chart (X, Y) = (log z, log w) or, near the
toric divisor of a boundary edge, in an edge chart (ζ, Y') where the divisor
is ζ = 0 and ζ is a plain (rescaled) coordinate.  Coefficients depend on a
path parameter s through a_j(s) = exp(logc_j + nu_j τ(s)), τ(s) = τ0 + s dτ,
and θ(s) = θ0 + s dθ, which covers both θ-sweeps and t-homotopies.
"""
from __future__ import annotations

import math

import numpy as np
from numba import njit

ENTER = -3.0  # switch into an edge chart when its dominance ratio drops below
LEAVE = -1.0  # and back out once it rises above
TINY = 1e-300
RES_FLOOR = 1e-14  # scaled residual accepted as converged


@njit(cache=True)
def _base_eval(E, logc, nu, tau, dtau, th, dth, X, Y, out):
    """Fill out = [F, G, FX, FY, GX, GY, Fs, Gs] (scaled); return log scale."""
    n = E.shape[0]
    c = math.cos(th)
    s = math.sin(th)
    M = -1e308
    for j in range(n):
        ex = logc[j] + nu[j] * tau + E[j, 0] * X + E[j, 1] * Y
        if ex.real > M:
            M = ex.real
    F = 0j
    D1 = 0j
    D2 = 0j
    D11 = 0j
    D12 = 0j
    D22 = 0j
    Ft = 0j
    D1t = 0j
    D2t = 0j
    for j in range(n):
        ex = logc[j] + nu[j] * tau + E[j, 0] * X + E[j, 1] * Y - M
        if ex.real < -700:
            continue
        tm = np.exp(ex)
        e1 = E[j, 0]
        e2 = E[j, 1]
        F += tm
        D1 += e1 * tm
        D2 += e2 * tm
        D11 += e1 * e1 * tm
        D12 += e1 * e2 * tm
        D22 += e2 * e2 * tm
        Ft += nu[j] * tm
        D1t += nu[j] * e1 * tm
        D2t += nu[j] * e2 * tm
    out[0] = F
    out[1] = s * D1 - c * D2
    out[2] = D1
    out[3] = D2
    out[4] = s * D11 - c * D12
    out[5] = s * D12 - c * D22
    out[6] = Ft * dtau
    out[7] = (c * D1 + s * D2) * dth + (s * D1t - c * D2t) * dtau
    return M


@njit(cache=True)
def _chart_eval(J1, J2, logc, nu, tau, dtau, th, dth, logsig, nrow, mrow, zeta, Y, out):
    """Same as _base_eval in an edge chart; unknowns (ζ, Y')."""
    n = J1.shape[0]
    c = math.cos(th)
    s = math.sin(th)
    u1 = nrow[0] * c + nrow[1] * s
    u2 = mrow[0] * c + mrow[1] * s
    du1 = -nrow[0] * s + nrow[1] * c
    du2 = -mrow[0] * s + mrow[1] * c
    if zeta == 0:
        zeta = TINY + 0j
    az = abs(zeta)
    laz = math.log(az)
    ph = zeta / az
    M = -1e308
    for j in range(n):
        lm = (logc[j] + nu[j] * tau).real + J1[j] * (logsig + laz) + J2[j] * Y.real
        if lm > M:
            M = lm
    F = 0j
    Fz = 0j
    D1 = 0j
    D2 = 0j
    D1z = 0j
    D2z = 0j
    D12 = 0j
    D22 = 0j
    Ft = 0j
    D1t = 0j
    D2t = 0j
    for j in range(n):
        ex = logc[j] + nu[j] * tau + J1[j] * (logsig + laz) + J2[j] * Y - M
        if ex.real < -700:
            continue
        tm = np.exp(ex) * ph ** J1[j]
        a = J1[j]
        b = J2[j]
        F += tm
        D1 += a * tm
        D2 += b * tm
        tz = tm / zeta
        Fz += a * tz
        D1z += a * a * tz
        D2z += a * b * tz
        D12 += a * b * tm
        D22 += b * b * tm
        Ft += nu[j] * tm
        D1t += nu[j] * a * tm
        D2t += nu[j] * b * tm
    out[0] = F
    out[1] = u2 * D1 - u1 * D2
    out[2] = Fz
    out[3] = D2
    out[4] = u2 * D1z - u1 * D2z
    out[5] = u2 * D12 - u1 * D22
    out[6] = Ft * dtau
    out[7] = (du2 * D1 - du1 * D2) * dth + (u2 * D1t - u1 * D2t) * dtau
    return M


@njit(cache=True)
def _lm_base(E, logc, nu, tau, X, Y, lm):
    for j in range(E.shape[0]):
        lm[j] = (logc[j] + nu[j] * tau).real + E[j, 0] * X.real + E[j, 1] * Y.real


@njit(cache=True)
def _lm_chart(J1, J2, logc, nu, tau, logsig, zeta, Y, lm):
    az = abs(zeta)
    laz = math.log(az) if az > 0 else -1e300
    for j in range(J1.shape[0]):
        lm[j] = (logc[j] + nu[j] * tau).real + J1[j] * (logsig + laz) + J2[j] * Y.real


@njit(cache=True)
def _dominance(lm, mask):
    """max over off-edge terms minus max over edge terms."""
    a = -1e308
    b = -1e308
    for j in range(lm.shape[0]):
        if mask[j]:
            if lm[j] > b:
                b = lm[j]
        else:
            if lm[j] > a:
                a = lm[j]
    return a - b


@njit(cache=True)
def _solve2(a, b, c, d, r0, r1):
    det = a * d - b * c
    if det == 0:
        return 0j, 0j, False
    x0 = (d * r0 - b * r1) / det
    x1 = (-c * r0 + a * r1) / det
    return x0, x1, True


@njit(cache=True)
def _eval(chart, E, logc, nu, J1s, J2s, nrows, mrows, tau0, dtau, th0, dth, logsig, s, x0, x1, out):
    tau = tau0 + s * dtau
    th = th0 + s * dth
    if chart < 0:
        return _base_eval(E, logc, nu, tau, dtau, th, dth, x0, x1, out)
    return _chart_eval(J1s[chart], J2s[chart], logc, nu, tau, dtau, th, dth, logsig,
                       nrows[chart], mrows[chart], x0, x1, out)


@njit(cache=True)
def track_strand(E, logc, nu, masks, J1s, J2s, nrows, mrows,
                 tau0, dtau, th0, dth, s_start, s_end,
                 chart, x0, x1, logsig, max_move, h0, hmin, newton_tol, allow_charts):
    """Track one strand from s_start to s_end.

    Returns (status, chart, x0, x1, logsig, h, steps).  status 0 = ok,
    1 = step underflow, 2 = singular Jacobian everywhere.
    """
    out = np.empty(8, np.complex128)
    lm = np.empty(E.shape[0])
    nedges = masks.shape[0]
    s = s_start
    direction = 1.0 if s_end >= s_start else -1.0
    h = h0
    steps = 0
    while (s_end - s) * direction > 1e-15 * (1.0 + abs(s_end)):
        hh = min(h, abs(s_end - s))
        if hh < hmin:
            return 1, chart, x0, x1, logsig, h, steps
        _eval(chart, E, logc, nu, J1s, J2s, nrows, mrows, tau0, dtau, th0, dth, logsig, s, x0, x1, out)
        v0, v1, ok = _solve2(out[2], out[3], out[4], out[5], -out[6], -out[7])
        if not ok:
            h = hh / 2
            continue
        move = max(abs(v0), abs(v1)) * hh
        if move > max_move:
            h = hh * max_move / move * 0.9
            continue
        sn = s + direction * hh
        y0 = x0 + direction * hh * v0
        y1 = x1 + direction * hh * v1
        conv = False
        prev = 1e308
        for it in range(7):
            _eval(chart, E, logc, nu, J1s, J2s, nrows, mrows, tau0, dtau, th0, dth, logsig, sn, y0, y1, out)
            # near a fold the update stalls at round-off / det; a scaled
            # residual at machine level is accepted instead
            if it > 0 and max(abs(out[0]), abs(out[1])) < RES_FLOOR:
                conv = True
                break
            d0, d1, ok = _solve2(out[2], out[3], out[4], out[5], -out[0], -out[1])
            if not ok:
                break
            y0 += d0
            y1 += d1
            nd = max(abs(d0), abs(d1))
            if it > 0 and nd > 0.3 * prev:
                break
            prev = nd
            if nd < newton_tol:
                conv = True
                break
        if not conv:
            h = hh / 2
            continue
        # the corrector must not have moved further than the predictor did
        if max(abs(y0 - x0), abs(y1 - x1)) > 2.0 * max_move:
            h = hh / 2
            continue
        x0 = y0
        x1 = y1
        s = sn
        steps += 1
        h = hh * 1.5
        if allow_charts and nedges > 0:
            if chart < 0:
                _lm_base(E, logc, nu, tau0 + s * dtau, x0, x1, lm)
                best = 0
                bestr = 1e308
                for k in range(nedges):
                    r = _dominance(lm, masks[k])
                    if r < bestr:
                        bestr = r
                        best = k
                if bestr < ENTER:
                    n = nrows[best]
                    m = mrows[best]
                    # L' = M^{-T} L with M = [[n],[m]] of determinant 1
                    L1 = m[1] * x0 - m[0] * x1
                    L2 = -n[1] * x0 + n[0] * x1
                    logsig = L1.real
                    x0 = np.exp(1j * L1.imag)
                    x1 = L2
                    chart = best
            else:
                _lm_chart(J1s[chart], J2s[chart], logc, nu, tau0 + s * dtau, logsig, x0, x1, lm)
                r = _dominance(lm, masks[chart])
                if r > LEAVE and abs(x0) > 0:
                    n = nrows[chart]
                    m = mrows[chart]
                    L1 = logsig + np.log(x0)
                    L2 = x1
                    x0 = n[0] * L1 + m[0] * L2
                    x1 = n[1] * L1 + m[1] * L2
                    chart = -1
    return 0, chart, x0, x1, logsig, h, steps


@njit(cache=True)
def refine(E, logc, nu, J1s, J2s, nrows, mrows, tau, th, chart, x0, x1, logsig, iters, tol):
    """Newton-polish a point at fixed parameters; returns (x0, x1, residual, ok)."""
    out = np.empty(8, np.complex128)
    res = 1e308
    for it in range(iters):
        _eval(chart, E, logc, nu, J1s, J2s, nrows, mrows, tau, 0j, th, 0.0, logsig, 0.0, x0, x1, out)
        res = max(abs(out[0]), abs(out[1]))
        d0, d1, ok = _solve2(out[2], out[3], out[4], out[5], -out[0], -out[1])
        if not ok:
            return x0, x1, res, False
        x0 += d0
        x1 += d1
        if max(abs(d0), abs(d1)) < tol:
            _eval(chart, E, logc, nu, J1s, J2s, nrows, mrows, tau, 0j, th, 0.0, logsig, 0.0, x0, x1, out)
            return x0, x1, max(abs(out[0]), abs(out[1])), True
    return x0, x1, res, res < 1e-12
