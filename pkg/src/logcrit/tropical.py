"""Log_t images of tracked inflection points and their tropical limits."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .asymptotics import (_seed_node, branch_data, continue_in_t, family_numerator, normalize_at_node)
from .gauss import log_inflection_points, ramification_count
from .lattice import ConvexLift, LatticePolygon, midpoint
from .numerics import LogPoly, NonConvergence, log_newton
from .poly import LaurentPolynomial
from .viro import ViroFamily, cell_polynomial, nodes_of_C0

CLASSIFY = 0.05


def log_t(p, t: float) -> np.ndarray:
    t = float(t)
    if not 0 < t < 1:
        raise ValueError("Log_t needs 0 < t < 1")
    z, w = complex(p[0]), complex(p[1])
    if z == 0 or w == 0:
        raise ValueError("point on a coordinate axis")
    lt = math.log(t)
    return np.array([-math.log(abs(z)) / lt, -math.log(abs(w)) / lt])


def default_tropical_schedule() -> list[float]:
    return list(np.geomspace(1e-3, 1e-9, 7))


# ---------------------------------------------------------------------------
# following every inflection point of a family


SEED_T = 1e-12


def family_seeds(fam: ViroFamily, tau: complex):
    """Leading-order positions of all inflection points of f_t at t = e^tau:
    those of each cell curve (rescaled into the cell's region) and two per
    node from the local asymptotics.  Returns (log points, origin labels)."""
    seeds, origin = [], []
    for k in range(len(fam.cells)):
        f = cell_polynomial(fam, k)
        g = np.array(fam.pieces[k].g, float)
        for p in log_inflection_points(f).points:
            seeds.append(np.array([cmath.log(p[0]), cmath.log(p[1])]) - g * tau)
            origin.append(("cell", k))
    for node in nodes_of_C0(fam):
        norm = normalize_at_node(fam, node)
        for L in _seed_node(norm, branch_data(norm), tau):
            seeds.append(L)
            origin.append(("node", node.index))
    return seeds, origin


def _distinct(Ls, tol=1e-6) -> bool:
    for i in range(len(Ls)):
        for j in range(i + 1, len(Ls)):
            d = Ls[i] - Ls[j]
            d = d.real + 1j * ((d.imag + np.pi) % (2 * np.pi) - np.pi)
            if np.max(np.abs(d)) < tol:
                return False
    return True


@dataclass
class InflectionTracks:
    ts: list  # increasing
    logs: list  # per t: list of log points
    origin: list


def track_family_inflections(fam: ViroFamily, ts, seed_t: float = SEED_T) -> InflectionTracks:
    """All ramification points of gamma_t, continued from tiny t through the
    given positive t values; the total must equal Riemann–Hurwitz."""
    ts = sorted(float(t) for t in ts)
    F3 = fam.trivariate
    N3 = family_numerator(fam)
    tau0 = complex(math.log(min(seed_t, ts[0] / 10)))
    seeds, origin = family_seeds(fam, tau0)
    R = ramification_count(fam.lift.domain)
    fs = [LogPoly.specialize(F3, tau0), LogPoly.specialize(N3, tau0)]
    cur = []
    for L in seeds:
        Ln, res, ok = log_newton(fs, L, iters=40)
        if not ok:
            raise NonConvergence("seed refinement failed")
        cur.append(Ln)
    if len(cur) != R or not _distinct(cur):
        raise NonConvergence(f"seeded {len(cur)} distinct inflection points, expected {R}")
    logs = []
    tau = tau0
    for t in ts:
        tau1 = complex(math.log(t))
        cur = continue_in_t(F3, N3, cur, tau, tau1)
        if not _distinct(cur):
            raise NonConvergence(f"inflection paths merged before t={t:.3g}")
        logs.append(list(cur))
        tau = tau1
    return InflectionTracks(ts, logs, origin)


# ---------------------------------------------------------------------------
# extrapolation and classification


def extrapolate(ts, points) -> np.ndarray:
    """Fit Log_t coordinates linearly in 1/log t and return the intercept."""
    x = 1.0 / np.log(np.array(ts, float))
    P = np.array(points, float)
    A = np.stack([np.ones_like(x), x], axis=1)
    coef, *_ = np.linalg.lstsq(A, P, rcond=None)
    return coef[0]


@dataclass
class StrandLimit:
    strand: int
    origin: tuple
    limit: tuple[float, float]
    kind: str  # "midpoint", "vertex", "other"
    target: int | None
    distance: float

    def to_json(self):
        return {"strand": self.strand, "origin": list(self.origin), "limit": list(self.limit),
                "classification": self.kind, "target": self.target, "distance": self.distance}


@dataclass
class MidpointReport:
    ok: bool
    strands: list = field(default_factory=list)
    midpoint_counts: dict = field(default_factory=dict)
    expected_counts: dict = field(default_factory=dict)
    ts: list = field(default_factory=list)

    def to_json(self):
        return {"ok": self.ok, "t": list(self.ts), "strands": [s.to_json() for s in self.strands],
                "midpoint_counts": {str(k): v for k, v in self.midpoint_counts.items()},
                "expected_counts": {str(k): v for k, v in self.expected_counts.items()}}


def classify(limit, fam: ViroFamily, tol: float = CLASSIFY):
    """Nearest of the bounded-edge midpoints and the vertices of the dual
    tropical curve; 'other' when neither is within tol."""
    trop = fam.tropical
    bounded = trop.bounded_edges()
    best = ("other", None, float("inf"))
    for i, e in enumerate(bounded):
        m = midpoint(e)
        d = math.hypot(limit[0] - float(m[0]), limit[1] - float(m[1]))
        if d < best[2]:
            best = ("midpoint", i, d)
    for i, v in enumerate(trop.vertices):
        d = math.hypot(limit[0] - float(v[0]), limit[1] - float(v[1]))
        if d < best[2]:
            best = ("vertex", i, d)
    if best[2] > tol:
        return "other", None, best[2]
    return best


def verify_midpoint_theorem(fam: ViroFamily, t_schedule=None) -> MidpointReport:
    ts = sorted(t_schedule or default_tropical_schedule())
    tr = track_family_inflections(fam, ts)
    strands = []
    for i in range(len(tr.origin)):
        pts = [log_t(np.exp(tr.logs[k][i]), t) for k, t in enumerate(tr.ts)]
        lim = extrapolate(tr.ts, pts)
        kind, target, d = classify(lim, fam)
        strands.append(StrandLimit(i, tr.origin[i], (float(lim[0]), float(lim[1])), kind, target, float(d)))
    bounded = fam.tropical.bounded_edges()
    counts = {i: sum(1 for s in strands if s.kind == "midpoint" and s.target == i) for i in range(len(bounded))}
    expected = {i: 2 * e.weight for i, e in enumerate(bounded)}
    ok = counts == expected and all(s.kind != "other" for s in strands)
    return MidpointReport(ok, strands, counts, expected, ts)


# ---------------------------------------------------------------------------
# the degenerate example


APPENDIX_DEFAULT = {"a": 1.3 - 0.4j, "b": 0.7 + 0.5j, "c": -0.9 + 0.6j, "d": 0.4 + 1.1j}


def appendix_family(a: complex, b: complex, c: complex, d: complex) -> ViroFamily:
    """c t + z((w-1)(w-1+b) + d z (w-1) + a z^2), with nu = 1 at the origin."""
    terms = {(0, 0): c, (1, 2): 1.0, (1, 1): b - 2, (1, 0): 1 - b, (2, 1): d, (2, 0): -d, (3, 0): a}
    base = LaurentPolynomial(terms, 2)
    dom = LatticePolygon.hull(terms.keys())
    return ViroFamily(base, ConvexLift.from_function(dom, lambda p: 1 if tuple(p) == (0, 0) else 0))


@dataclass
class AppendixReport:
    params: dict
    ts: list
    z_slope: float
    x_limit: float
    alphas: list
    alpha_claimed: complex
    alpha_claimed_error: float
    alpha_cubed_error: float
    gamma_slope: float
    log_degenerate: bool
    checks: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def to_json(self):
        c = lambda x: [complex(x).real, complex(x).imag]
        return {"params": {k: c(v) for k, v in self.params.items()}, "t": list(self.ts),
                "z_slope": self.z_slope, "x_limit": self.x_limit, "alphas": [c(a) for a in self.alphas],
                "alpha_claimed": c(self.alpha_claimed), "alpha_claimed_error": self.alpha_claimed_error,
                "alpha_cubed_error": self.alpha_cubed_error, "gamma_slope": self.gamma_slope,
                "log_degenerate": self.log_degenerate, "checks": self.checks}


def appendix_seeds(a, b, c, tau):
    """Leading order (z, w) = (alpha t^(1/3), 1 + beta t^(2/3)) with
    alpha^3 = -c/(4a) and beta = 3 a alpha^2 / b, one per cube root."""
    out = []
    r = complex(-c / (4 * a))
    for k in range(3):
        al = cmath.exp((cmath.log(r) + 2j * math.pi * k) / 3)
        be = 3 * a * al * al / b
        z = al * cmath.exp(tau / 3)
        w = 1 + be * cmath.exp(2 * tau / 3)
        out.append(np.array([cmath.log(z), cmath.log(w)]))
    return out


def verify_appendix_case(a=None, b=None, c=None, d=None, t_schedule=None) -> AppendixReport:
    p = dict(APPENDIX_DEFAULT)
    for k, v in (("a", a), ("b", b), ("c", c), ("d", d)):
        if v is not None:
            p[k] = complex(v)
    fam = appendix_family(p["a"], p["b"], p["c"], p["d"])
    from .viro import check_log_nondegenerate

    degenerate = not check_log_nondegenerate(fam).ok
    ts = sorted(t_schedule or list(np.geomspace(1e-3, 1e-9, 7)))
    F3 = fam.trivariate
    N3 = family_numerator(fam)
    tau0 = complex(math.log(ts[0] / 1000))
    fs = [LogPoly.specialize(F3, tau0), LogPoly.specialize(N3, tau0)]
    cur = []
    for L in appendix_seeds(p["a"], p["b"], p["c"], tau0):
        Ln, res, ok = log_newton(fs, L, iters=40)
        if not ok:
            raise NonConvergence("appendix seed refinement failed")
        cur.append(Ln)
    if not _distinct(cur):
        raise NonConvergence("appendix seeds merged")
    samples = []
    tau = tau0
    for t in ts:
        cur = continue_in_t(F3, N3, cur, tau, complex(math.log(t)))
        samples.append(list(cur))
        tau = complex(math.log(t))
    lt = np.log(np.array(ts))
    # |z| ~ |alpha| t^(1/3)
    logz = np.array([[L[0].real for L in s] for s in samples])
    z_slope = float(np.mean([np.polyfit(lt, logz[:, i], 1)[0] for i in range(3)]))
    xs = [[log_t(np.exp(L), t)[0] for L in s] for s, t in zip(samples, ts)]
    x_limit = float(np.mean([extrapolate(ts, [[x[i], 0.0] for x in xs])[0] for i in range(3)]))
    alphas = [complex(np.exp(L[0]) / ts[0] ** (1 / 3)) for L in samples[0]]
    claimed = -p["c"] / (p["a"] * (3 * p["b"] + 1))
    claimed_err = min(abs(al - claimed) / abs(claimed) for al in alphas)
    cubed = -p["c"] / (4 * p["a"])
    cubed_err = max(abs(al ** 3 - cubed) / abs(cubed) for al in alphas)
    lp = [LogPoly.specialize(F3, complex(math.log(t))) for t in ts]
    gam = []
    for s, l in zip(samples, lp):
        vals = []
        for L in s:
            u, v = l.gauss(L)
            vals.append(abs(u / v))
        gam.append(np.log(vals))
    gam = np.array(gam)
    g_slope = float(np.mean([np.polyfit(lt, gam[:, i], 1)[0] for i in range(3)]))
    checks = {"z_slope": abs(z_slope - 1 / 3) <= 0.02, "x_limit": abs(x_limit + 1 / 3) <= 0.05,
              "alpha_claimed": claimed_err < 0.05, "gamma_slope": abs(g_slope - 2 / 3) <= 0.02,
              "log_degenerate": degenerate}
    return AppendixReport(p, ts, z_slope, x_limit, alphas, claimed, float(claimed_err), float(cubed_err),
                          g_slope, degenerate, checks)
