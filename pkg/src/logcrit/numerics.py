"""Root finding, resultants, bivariate system solving and path tracking.

Everything downstream funnels through here.  Tolerances live in a single
``Tolerances`` record; ``CONFIG`` is the process-wide default and can be
replaced from a JSON file (see :func:`load_tolerances`).
"""
from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .poly import LaurentPolynomial


@dataclass
class Tolerances:
    root_residual: float = 1e-12
    root_cluster: float = 1e-8
    root_max_iter: int = 800
    system_residual: float = 1e-10
    divisor_margin: float = 1e-8  # |z|,|w| outside [margin, 1/margin] -> toric boundary
    collision: float = 1e-6
    step_underflow: float = 1e-12
    branch_threshold: float = 1e-6
    n_theta: int = 720
    eps_disc: float = 0.1
    classify_radius: float = 0.05
    cr_residual: float = 1e-8

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


CONFIG = Tolerances()


def load_tolerances(path: str) -> Tolerances:
    with open(path) as fh:
        data = json.load(fh)
    known = {f.name for f in dataclasses.fields(Tolerances)}
    bad = set(data) - known
    if bad:
        raise ValueError(f"unknown tolerance keys: {sorted(bad)}")
    return dataclasses.replace(CONFIG, **data)


def set_config(tol: Tolerances):
    for f in dataclasses.fields(Tolerances):
        setattr(CONFIG, f.name, getattr(tol, f.name))


class NonConvergence(RuntimeError):
    """Numerical method failed to reach its tolerance."""

    def __init__(self, msg, best=None):
        super().__init__(msg)
        self.best = best


# ---------------------------------------------------------------------------
# univariate roots


@dataclass
class RootResult:
    roots: np.ndarray  # distinct roots
    multiplicities: list[int]
    residual: float

    def all_roots(self) -> np.ndarray:
        return np.repeat(self.roots, self.multiplicities)


def trim(coeffs: Sequence[complex], rel: float = 1e-14) -> np.ndarray:
    """Drop leading (highest-degree) coefficients below rel * max."""
    c = np.asarray(coeffs, dtype=complex)
    if c.size == 0 or not np.any(c):
        return np.zeros(0, complex)
    m = np.max(np.abs(c))
    n = c.size
    while n > 0 and abs(c[n - 1]) <= rel * m:
        n -= 1
    return c[:n]


def _newton_ratio(c: np.ndarray, z: np.ndarray):
    """p(z)/p'(z) and the backward-error ratio |p(z)| / sum|c_k||z|^k,
    evaluated in the reversed variable outside the unit disc."""
    n = c.size - 1
    out = np.empty(z.shape, complex)
    berr = np.empty(z.shape)
    absc = np.abs(c)
    inside = np.abs(z) <= 1
    if np.any(inside):
        x = z[inside]
        p = np.full(x.shape, c[-1]); dp = np.zeros(x.shape, complex); s = np.full(x.shape, absc[-1])
        ax = np.abs(x)
        for k in range(n - 1, -1, -1):
            dp = dp * x + p
            p = p * x + c[k]
            s = s * ax + absc[k]
        with np.errstate(divide="ignore", invalid="ignore"):
            out[inside] = p / dp
        berr[inside] = np.abs(p) / s
    if np.any(~inside):
        x = z[~inside]
        y = 1.0 / x
        # q(y) = sum c_k y^{n-k} = y^n p(1/y)
        q = np.full(y.shape, c[0]); dq = np.zeros(y.shape, complex); s = np.full(y.shape, absc[0])
        ay = np.abs(y)
        for k in range(1, n + 1):
            dq = dq * y + q
            q = q * y + c[k]
            s = s * ay + absc[k]
        # p(x) = x^n q(1/x); p'/p = n/x - q'(y)/(q(y) x^2)
        with np.errstate(divide="ignore", invalid="ignore"):
            dlog = n / x - dq / q * y * y
            out[~inside] = 1.0 / dlog
        berr[~inside] = np.abs(q) / s
    return out, berr


def _initial_guesses(c: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Bini's starting points from the upper hull of (k, log|c_k|)."""
    n = c.size - 1
    with np.errstate(divide="ignore"):
        lg = np.log(np.abs(c))
    pts = [(k, lg[k]) for k in range(n + 1) if np.isfinite(lg[k])]
    hull = []
    for p in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1) >= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    guesses = []
    sigma = rng.uniform(0, 2 * np.pi)
    for (k0, y0), (k1, y1) in zip(hull[:-1], hull[1:]):
        m = k1 - k0
        r = math.exp((y0 - y1) / m)
        ang = 2 * np.pi * np.arange(m) / m + 2 * np.pi * k0 / n + sigma
        guesses.append(r * np.exp(1j * ang))
    return np.concatenate(guesses)


def roots(coeffs: Sequence[complex], tol: Tolerances | None = None, seed: int = 0,
          merge: bool = True) -> RootResult:
    """All roots of sum c_k x^k (ascending coefficients) by Aberth–Ehrlich.

    Convergence is declared on the backward error |p(r)|/sum|c_k||r|^k, the
    scale-aware form of |p(r)|/||p|| for badly scaled coefficients.
    """
    tol = tol or CONFIG
    c = trim(coeffs)
    if c.size < 2:
        raise ValueError("degree must be at least 1")
    nz = 0
    while nz < c.size and c[nz] == 0:
        nz += 1
    c2 = c[nz:]
    found = [np.zeros(nz, complex)] if nz else []
    if c2.size >= 2:
        rng = np.random.default_rng(seed)
        z = _initial_guesses(c2, rng)
        n = z.size
        active = np.ones(n, bool)
        berr = np.full(n, np.inf)
        for it in range(tol.root_max_iter):
            idx = np.nonzero(active)[0]
            if idx.size == 0:
                break
            ratio, be = _newton_ratio(c2, z[idx])
            berr[idx] = be
            diff = z[idx, None] - z[None, :]
            diff[np.arange(idx.size), idx] = 1.0
            with np.errstate(divide="ignore", invalid="ignore"):
                s = np.sum(1.0 / diff, axis=1) - 1.0  # remove the self term (1/1)
                corr = ratio / (1.0 - ratio * s)
            bad = ~np.isfinite(corr)
            corr[bad] = 0.0
            z[idx] -= corr
            small = np.abs(corr) <= 4e-16 * np.maximum(np.abs(z[idx]), 1e-300)
            done = (be < tol.root_residual * 1e-2) | small | (ratio == 0)
            active[idx[done]] = False
        _, berr = _newton_ratio(c2, z)
        best = float(np.max(berr)) if berr.size else 0.0
        if not np.all(berr < tol.root_residual) and best > 1e-9:
            raise NonConvergence(f"Aberth iteration did not converge (residual {best:.3g})", best)
        found.append(z)
    allz = np.concatenate(found) if found else np.zeros(0, complex)
    _, berr = _newton_ratio(c, allz) if allz.size else (None, np.zeros(0))
    if not merge:
        return RootResult(allz, [1] * allz.size, float(np.max(berr, initial=0.0)))
    distinct, mult = _cluster(allz, tol.root_cluster, c)
    return RootResult(distinct, mult, float(np.max(berr, initial=0.0)))


MULTIPLE_RADIUS = 3e-7  # a double root splits by about sqrt(eps) in double precision
MULTIPLE_BERR = 1e-13


def _cluster(z: np.ndarray, radius: float, c: np.ndarray | None = None):
    """Merge roots closer than ``radius``; with the coefficients given, also
    merge groups up to MULTIPLE_RADIUS apart whose mean is still a root of p
    to backward error MULTIPLE_BERR (a numerically split multiple root)."""
    order = np.argsort(np.abs(z))
    used = np.zeros(z.size, bool)
    out, mult = [], []
    for i in order:
        if used[i]:
            continue
        scale = max(1.0, abs(z[i]))
        close = (~used) & (np.abs(z - z[i]) <= radius * scale)
        if c is not None:
            wide = (~used) & (np.abs(z - z[i]) <= MULTIPLE_RADIUS * scale)
            if wide.sum() > close.sum():
                _, be = _newton_ratio(c, np.array([np.mean(z[wide])]))
                if be[0] < MULTIPLE_BERR:
                    close = wide
        used |= close
        out.append(np.mean(z[close]))
        mult.append(int(close.sum()))
    return np.array(out, complex), mult


def polyval_asc(c: Sequence[complex], x):
    return np.polynomial.polynomial.polyval(x, np.asarray(c, complex))


# ---------------------------------------------------------------------------
# Laurent polynomials in log coordinates


class LogPoly:
    """f(e^X, e^Y) for a bivariate Laurent polynomial, evaluated with the
    largest term magnitude factored out (returns scaled values)."""

    def __init__(self, f: LaurentPolynomial):
        if f.arity != 2:
            raise ValueError("LogPoly needs a bivariate polynomial")
        E, C = f.arrays()
        self.E = E.astype(float)
        self.C = C
        self.logabs = np.log(np.abs(C))
        self.phase = C / np.abs(C)

    @classmethod
    def specialize(cls, F: LaurentPolynomial, tau: complex) -> "LogPoly":
        """A trivariate F(z, w, t) at t = e^tau, with t-powers kept in log
        form so that tiny t loses no terms."""
        if F.arity == 2:
            return cls(F)
        E, C = F.arrays()
        self = cls.__new__(cls)
        self.E = E[:, :2].astype(float)
        ex = np.log(np.abs(C)) + E[:, 2] * complex(tau)
        self.C = None
        self.logabs = ex.real
        self.phase = C / np.abs(C) * np.exp(1j * ex.imag)
        return self

    def gauss(self, L):
        """[z f_z : w f_w] at L, scaled."""
        t, _ = self.terms(L)
        return self.E.T @ t

    def terms(self, L):
        """Scaled terms and the log of the scale."""
        ex = self.E @ np.asarray(L)  # complex exponent
        lm = self.logabs + ex.real
        M = lm.max()
        t = self.phase * np.exp(lm - M + 1j * ex.imag)
        return t, M

    def value_grad(self, L):
        t, M = self.terms(L)
        return t.sum(), self.E.T @ t, M


def log_newton(fs: Sequence[LogPoly], L0, iters: int = 40, tol: float = 1e-13):
    """Newton on two Laurent polynomials in log coordinates.  Each equation
    is divided by its own largest term, which leaves the Newton step
    unchanged and keeps residuals relative.  Converged once the step is
    tiny or the scaled residual sits at rounding level."""
    L = np.array(L0, complex)

    def resid(L):
        F = np.empty(2, complex)
        J = np.empty((2, 2), complex)
        for i, f in enumerate(fs):
            v, g, _ = f.value_grad(L)
            F[i] = v
            J[i] = g
        return F, J

    F, J = resid(L)
    res = float(np.max(np.abs(F)))
    for _ in range(iters):
        try:
            dL = np.linalg.solve(J, -F)
        except np.linalg.LinAlgError:
            return L, res, False
        if not np.all(np.isfinite(dL)):
            return L, res, False
        L = L + dL
        F, J = resid(L)
        res = float(np.max(np.abs(F)))
        step = float(np.max(np.abs(dL)))
        if step < tol or (res < 1e-14 and step < 1e-8):
            return L, res, True
    return L, res, res < 1e-13


def relative_residual(f: LaurentPolynomial, p) -> float:
    """|f(p)| / sum |a_j p^j|."""
    z, w = p
    num = 0j
    den = 0.0
    for e, c in f.items():
        v = c * z ** e[0] * w ** e[1]
        num += v
        den += abs(v)
    return abs(num) / den if den > 0 else abs(num)


# ---------------------------------------------------------------------------
# resultants and system solving


def _as_poly_array(f: LaurentPolynomial):
    """Coefficient array P[i, j] for z^i w^j after clearing the monomial part."""
    g = f.strip_monomial()
    E, C = g.arrays()
    P = np.zeros((E[:, 0].max() + 1, E[:, 1].max() + 1), complex)
    for (i, j), c in zip(E, C):
        P[i, j] += c
    return P


def _sylvester(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Sylvester matrix of a, b given in descending order."""
    m, n = a.size - 1, b.size - 1
    S = np.zeros((m + n, m + n), complex)
    for i in range(n):
        S[i, i:i + m + 1] = a
    for i in range(m):
        S[n + i, i:i + n + 1] = b
    return S


def resultant_w(f: LaurentPolynomial, g: LaurentPolynomial, radius: float = 1.0) -> np.ndarray:
    """Res_w(f, g) as ascending coefficients in z.

    Evaluation at scaled roots of unity and FFT interpolation; the caller
    should balance the polynomials first so that radius 1 is appropriate.
    """
    P = _as_poly_array(f)
    Q = _as_poly_array(g)
    m, n = P.shape[1] - 1, Q.shape[1] - 1
    if m == 0 and n == 0:
        raise ValueError("both inputs independent of w")
    if m == 0:
        # resultant of a w-free polynomial with g is f^deg_w(g)
        out = np.array([1.0 + 0j])
        for _ in range(n):
            out = np.convolve(out, P[:, 0])
        return out
    if n == 0:
        out = np.array([1.0 + 0j])
        for _ in range(m):
            out = np.convolve(out, Q[:, 0])
        return out
    deg = (P.shape[0] - 1) * n + (Q.shape[0] - 1) * m
    N = 1 << max(1, math.ceil(math.log2(deg + 1)))
    zs = radius * np.exp(2j * np.pi * np.arange(N) / N)
    vals = np.empty(N, complex)
    for k, z in enumerate(zs):
        zp = z ** np.arange(P.shape[0])
        zq = z ** np.arange(Q.shape[0])
        a = (zp @ P)[::-1]
        b = (zq @ Q)[::-1]
        vals[k] = np.linalg.det(_sylvester(a, b))
    coeffs = np.fft.fft(vals) / N
    # vals_k = sum c_j r^j e^{2πijk/N}  ->  c_j r^j = (1/N) sum vals_k e^{-2πijk/N}
    coeffs = coeffs / radius ** np.arange(N)
    return coeffs[:deg + 1]


def balance(f: LaurentPolynomial, g: LaurentPolynomial | None = None):
    """Toric scaling (z, w) -> (e^s1 z, e^s2 w) that flattens log|coeff|
    in the least-squares sense.  Returns (s1, s2)."""
    polys = [f] + ([g] if g is not None else [])
    rows, rhs = [], []
    for k, p in enumerate(polys):
        for e, c in p.items():
            r = [e[0], e[1]] + [1.0 if i == k else 0.0 for i in range(len(polys))]
            rows.append(r)
            rhs.append(-math.log(abs(c)))
    A = np.array(rows, float)
    sol, *_ = np.linalg.lstsq(A, np.array(rhs), rcond=None)
    return float(sol[0]), float(sol[1])


@dataclass
class SystemSolution:
    points: list  # (z, w) pairs in (C*)^2
    residuals: list
    boundary: list = field(default_factory=list)  # points excluded as toric-boundary


def _dedupe(points, rtol=1e-7):
    out = []
    for p in points:
        if all(abs(p[0] - q[0]) > rtol * max(1, abs(q[0])) or abs(p[1] - q[1]) > rtol * max(1, abs(q[1]))
               for q in out):
            out.append(p)
    return out


def _dedupe_log(Ls, tol=1e-7):
    out = []
    for L in Ls:
        ok = True
        for M in out:
            d = L - M
            d = d.real + 1j * ((d.imag + np.pi) % (2 * np.pi) - np.pi)
            if np.max(np.abs(d)) < tol:
                ok = False
                break
        if ok:
            out.append(L)
    return out


LOW_TRIM = 1e-13


def solve_system(f: LaurentPolynomial, g: LaurentPolynomial, tol: Tolerances | None = None,
                 expected: int | None = None) -> SystemSolution:
    """Common zeros of f and g in (C*)^2 via resultant + back-substitution +
    Newton polish in log coordinates."""
    tol = tol or CONFIG
    s1, s2 = balance(f, g)
    fs = f.scale_variables((math.exp(s1), math.exp(s2)))
    gs = g.scale_variables((math.exp(s1), math.exp(s2)))
    fs = fs * (1.0 / fs.max_abs())
    gs = gs * (1.0 / gs.max_abs())
    cands = []
    for swap in (False, True):
        a, b = (fs, gs)
        if swap:
            a = _swap(a)
            b = _swap(b)
        try:
            R = resultant_w(a, b)
        except ValueError:
            continue
        R = trim(R)
        # interpolation noise in the low coefficients stands in for roots at
        # z = 0 and would scatter them onto a small circle
        R = R[np.argmax(np.abs(R) > LOW_TRIM * np.max(np.abs(R), initial=0.0)):] if R.size else R
        if R.size == 0 or _common_factor_suspect(a, b):
            raise NonConvergence("non-isolated solutions (resultant vanishes identically)")
        if R.size < 2:
            continue
        zr = roots(R, tol, merge=False).roots
        for z0 in zr:
            if z0 == 0 or not np.isfinite(z0):
                continue
            wcands = _univariate_roots_at(a, z0)
            gvals = [(abs(_eval2(b, z0, w0)) / max(_abs_eval2(b, z0, w0), 1e-300), w0) for w0 in wcands]
            gvals.sort(key=lambda x: x[0])
            for r, w0 in gvals[:2]:
                if r < 1e-3:
                    cands.append((w0, z0) if swap else (z0, w0))
        if expected is None or len(_dedupe(cands)) >= expected:
            break
    return _polish(fs, gs, cands, (s1, s2), tol, expected)


def _swap(p: LaurentPolynomial) -> LaurentPolynomial:
    return LaurentPolynomial({(e[1], e[0]): c for e, c in p.items()}, 2)


def _common_factor_suspect(a, b, samples: int = 4) -> bool:
    """Sylvester matrix numerically singular at several random z."""
    P, Q = _as_poly_array(a), _as_poly_array(b)
    if P.shape[1] < 2 or Q.shape[1] < 2:
        return False
    rng = np.random.default_rng(12345)
    for _ in range(samples):
        z = np.exp(rng.uniform(-0.5, 0.5) + 1j * rng.uniform(0, 2 * np.pi))
        A = (z ** np.arange(P.shape[0]) @ P)[::-1]
        B = (z ** np.arange(Q.shape[0]) @ Q)[::-1]
        A = A / np.max(np.abs(A))
        B = B / np.max(np.abs(B))
        sv = np.linalg.svd(_sylvester(A, B), compute_uv=False)
        if sv[-1] > 1e-11 * sv[0]:
            return False
    return True


def _eval2(p: LaurentPolynomial, z, w):
    return sum(c * z ** e[0] * w ** e[1] for e, c in p.items())


def _abs_eval2(p: LaurentPolynomial, z, w):
    return sum(abs(c * z ** e[0] * w ** e[1]) for e, c in p.items())


def _univariate_roots_at(p: LaurentPolynomial, z0):
    q = p.strip_monomial()
    n = max(e[1] for e in q.support())
    c = np.zeros(n + 1, complex)
    for e, co in q.items():
        c[e[1]] += co * z0 ** e[0]
    c = trim(c)
    if c.size < 2:
        return []
    try:
        return [w for w in roots(c, merge=False).roots if w != 0]
    except NonConvergence:
        return list(np.roots(c[::-1]))


def _polish(fs, gs, cands, shift, tol, expected):
    lf, lg = LogPoly(fs), LogPoly(gs)
    good = []
    for z0, w0 in cands:
        if z0 == 0 or w0 == 0:
            continue
        L, res, ok = log_newton((lf, lg), [np.log(complex(z0)), np.log(complex(w0))])
        if ok and res < tol.system_residual and np.all(np.isfinite(L)):
            good.append(L)
    good = _dedupe_log(good)
    pts, resids, bnd = [], [], []
    s = np.array([shift[0], shift[1]])
    for L in good:
        Lo = L + s  # undo the balancing: z_orig = e^{s1} z_scaled
        z, w = np.exp(Lo[0]), np.exp(Lo[1])
        r = max(abs(lf.value_grad(L)[0]), abs(lg.value_grad(L)[0]))
        m = tol.divisor_margin
        if not (m < abs(z) < 1 / m and m < abs(w) < 1 / m):
            bnd.append((z, w))
            continue
        pts.append((complex(z), complex(w)))
        resids.append(float(r))
    return SystemSolution(pts, resids, bnd)


# ---------------------------------------------------------------------------
# generic predictor-corrector tracking


@dataclass
class PathTrack:
    params: np.ndarray
    points: np.ndarray  # (n_samples, n_strands, dim)
    continuity: np.ndarray  # (n_samples, n_strands) bool; False where a collision was flagged
    flags: list = field(default_factory=list)


class StepUnderflow(NonConvergence):
    pass


def track(system: Callable, starts, schedule: Sequence, tol: Tolerances | None = None,
          max_move: float = 0.05, newton_tol: float = 1e-11) -> PathTrack:
    """Track solutions of H(x, s) = 0 along a real schedule s_0, s_1, ...

    ``system(x, s)`` returns (H, dH/dx, dH/ds) as numpy arrays.  Euler
    predictor, Newton corrector, step halving on corrector failure.  Strands
    that come within ``tol.collision`` of each other at a sample are flagged.
    """
    tol = tol or CONFIG
    schedule = np.asarray(schedule, float)
    x = np.array(starts, complex)
    if x.ndim == 1:
        x = x[:, None]
    ns, dim = x.shape
    out = np.empty((schedule.size, ns, dim), complex)
    cont = np.ones((schedule.size, ns), bool)
    out[0] = x
    span = abs(schedule[-1] - schedule[0]) or 1.0
    flags = []
    for k in range(1, schedule.size):
        s0, s1 = schedule[k - 1], schedule[k]
        for i in range(ns):
            x[i] = _track_segment(system, x[i], s0, s1, span, tol, max_move, newton_tol, i)
        out[k] = x
        for i in range(ns):
            for j in range(i + 1, ns):
                if np.max(np.abs(x[i] - x[j])) < tol.collision * max(1.0, np.max(np.abs(x[i]))):
                    cont[k, i] = cont[k, j] = False
                    flags.append((k, i, j))
    return PathTrack(schedule, out, cont, flags)


def _track_segment(system, x, s0, s1, span, tol, max_move, newton_tol, strand):
    s = s0
    h = s1 - s0
    direction = np.sign(h)
    while (s1 - s) * direction > 0:
        h = direction * min(abs(h), abs(s1 - s))
        if abs(h) < tol.step_underflow * span:
            raise StepUnderflow(f"step underflow on strand {strand} at parameter {s:.6g}")
        H, J, Hs = system(x, s)
        try:
            v = np.linalg.solve(J, -Hs)
        except np.linalg.LinAlgError:
            h /= 2
            continue
        move = np.max(np.abs(v)) * abs(h)
        if move > max_move:
            h *= max_move / move
            continue
        y = x + h * v
        ok = False
        prev = np.inf
        for _ in range(6):
            H, J, _ = system(y, s + h)
            try:
                dy = np.linalg.solve(J, -H)
            except np.linalg.LinAlgError:
                break
            y = y + dy
            nd = np.max(np.abs(dy))
            if nd > 0.5 * prev:
                break
            prev = nd
            if nd < newton_tol * max(1.0, np.max(np.abs(y))):
                ok = True
                break
        if ok:
            x = y
            s = s + h
            h *= 1.6
        else:
            h /= 2
    return x
