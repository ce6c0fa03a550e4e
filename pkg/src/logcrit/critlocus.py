"""The Log-critical locus Cr(f) = gamma^{-1}(RP^1).

Components are counted by monodromy: the fiber of gamma over
[cos θ : sin θ] is followed while θ runs once around RP^1 (θ0 -> θ0 + π);
the induced permutation of the fiber has one cycle per component of Cr.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _sweep
from .gauss import branch_distance_to_real, gauss_degree, log_inflection_points
from .lattice import LatticePolygon, edge_frame
from .numerics import CONFIG, NonConvergence, Tolerances, solve_system
from .poly import LaurentPolynomial, newton_polygon

BRANCH_REFUSE = 1e-9


class CrSingular(NonConvergence):
    pass


class AmbiguousMatching(NonConvergence):
    pass


def wrap(d):
    """Reduce imaginary parts of log-coordinate differences mod 2π."""
    return d.real + 1j * ((d.imag + np.pi) % (2 * np.pi) - np.pi)


def fiber_equation(f: LaurentPolynomial, theta: float) -> LaurentPolynomial:
    """sin θ · z f_z - cos θ · w f_w."""
    s, c = math.sin(theta), math.cos(theta)
    return LaurentPolynomial({e: a * (s * e[0] - c * e[1]) for e, a in f.items()}, 2)


# ---------------------------------------------------------------------------
# compiled system description


class FiberSystem:
    """Arrays describing f (optionally a Viro family a_j t^nu_j) for the
    compiled tracker, with one chart per boundary edge of the Newton polygon."""

    def __init__(self, f: LaurentPolynomial, nu: dict | None = None):
        if f.arity != 2:
            raise ValueError("bivariate polynomial expected")
        self.f = f
        E, C = f.arrays()
        self.E = E.astype(np.float64)
        self.Ei = E
        self.logc = np.log(C.astype(complex))
        self.nu = np.array([float(nu[tuple(e)]) if nu else 0.0 for e in E])
        self.polygon = newton_polygon(f)
        self.degree = gauss_degree(self.polygon)
        edges = self.polygon.edges()
        self.edges = edges
        ne = len(edges)
        self.masks = np.zeros((max(ne, 1), len(E)), np.bool_)
        self.J1 = np.zeros((max(ne, 1), len(E)), np.float64)
        self.J2 = np.zeros((max(ne, 1), len(E)), np.float64)
        self.nrows = np.zeros((max(ne, 1), 2), np.float64)
        self.mrows = np.zeros((max(ne, 1), 2), np.float64)
        self.edge_dirs = []
        for k, e in enumerate(edges):
            n, m, h = edge_frame(e, self.polygon.inner_normal(e))
            j1 = E @ np.array(n) - h
            self.J1[k] = j1
            self.J2[k] = E @ np.array(m)
            self.masks[k] = j1 == 0
            self.nrows[k] = n
            self.mrows[k] = m
            d = (e[1][0] - e[0][0], e[1][1] - e[0][1])
            g = math.gcd(abs(d[0]), abs(d[1]))
            self.edge_dirs.append((d[0] // g, d[1] // g))
        if ne == 0:
            self.masks = self.masks[:0]
        self.n_edges = ne

    def edge_angle(self, k: int) -> float:
        """θ in [0, π) at which gamma takes the value of edge k's divisor."""
        d = self.edge_dirs[k]
        return math.atan2(d[1], d[0]) % math.pi

    def to_base(self, chart, x0, x1, logsig):
        if chart < 0:
            return np.array([x0, x1])
        n, m = self.nrows[chart], self.mrows[chart]
        az = abs(x0)
        L1 = logsig + (np.log(x0) if az > 0 else -745.0)
        return np.array([n[0] * L1 + m[0] * x1, n[1] * L1 + m[1] * x1])

    def residual(self, L, theta, tau=0j) -> float:
        out = np.empty(8, complex)
        _sweep._base_eval(self.E, self.logc, self.nu, tau, 0j, theta, 0.0, L[0], L[1], out)
        return float(max(abs(out[0]), abs(out[1])))

    def refine(self, L, theta, tau=0j):
        x0, x1, res, ok = _sweep.refine(self.E, self.logc, self.nu, self.J1, self.J2, self.nrows, self.mrows,
                                        complex(tau), float(theta), -1, complex(L[0]), complex(L[1]), 0.0, 50, 1e-13)
        return np.array([x0, x1]), res, ok

    def track(self, states, s0, s1, theta_path, tau_path, max_move, hmin, allow_charts=True):
        """Advance every strand state (chart, x0, x1, logsig, h) from s0 to s1."""
        th0, dth = theta_path
        tau0, dtau = tau_path
        out = []
        for i, (chart, x0, x1, logsig, h) in enumerate(states):
            mm = max_move[i] if np.ndim(max_move) else max_move
            r = _sweep.track_strand(self.E, self.logc, self.nu, self.masks, self.J1, self.J2,
                                    self.nrows, self.mrows, complex(tau0), complex(dtau),
                                    float(th0), float(dth), float(s0), float(s1),
                                    int(chart), complex(x0), complex(x1), float(logsig),
                                    float(mm), float(h), float(hmin), 1e-11, allow_charts)
            status = r[0]
            if status != 0:
                raise NonConvergence(f"step underflow on strand {i} between parameters {s0:.6g} and {s1:.6g}")
            out.append((r[1], r[2], r[3], r[4], r[5]))
        return out


def _pairwise_min(P):
    """Nearest-neighbour distance of each row of P (log coords, mod 2πi)."""
    n = len(P)
    if n < 2:
        return np.full(n, np.inf)
    D = wrap(P[:, None, :] - P[None, :, :])
    D = np.max(np.abs(D), axis=2)
    np.fill_diagonal(D, np.inf)
    return D.min(axis=1)


# ---------------------------------------------------------------------------
# start fibers


def choose_theta0(angles, avoid=0.02, seed_offset=0.0123) -> float:
    """A base angle away from every special direction (mod π)."""
    cands = [seed_offset + k * 0.0617 for k in range(50)]
    best, bestd = cands[0], -1.0
    for c in cands:
        d = min((min(abs((c - a) % math.pi), math.pi - abs((c - a) % math.pi)) for a in angles), default=1.0)
        if d > avoid:
            return c % math.pi
        if d > bestd:
            best, bestd = c, d
    return best % math.pi


def fiber_over(f: LaurentPolynomial, theta: float, tol: Tolerances | None = None, retries: int = 3):
    """All points of (C*)^2 with f = 0 and gamma = [cos θ : sin θ]."""
    tol = tol or CONFIG
    D = gauss_degree(newton_polygon(f))
    th = theta
    for attempt in range(retries + 1):
        sol = solve_system(f, fiber_equation(f, th), tol, expected=D)
        if len(sol.points) == D:
            if attempt:
                # we solved at a perturbed angle; continue the points back to θ
                sys = FiberSystem(f)
                st = [(-1, np.log(p[0]), np.log(p[1]), 0.0, 1e-3) for p in sol.points]
                st = sys.track(st, th, theta, (0.0, 1.0), (0j, 0j), 0.02, 1e-14, allow_charts=True)
                return [tuple(np.exp(sys.to_base(*s[:4]))) for s in st]
            return sol.points
        th = theta + 1e-3 * (attempt + 1)
    raise NonConvergence(f"non-transverse fiber: found {len(sol.points)} of {D} points")


def start_fiber_logs(sys: FiberSystem, theta: float, tol=None):
    pts = fiber_over(sys.f, theta, tol)
    return [np.array([np.log(complex(p[0])), np.log(complex(p[1]))]) for p in pts]


# ---------------------------------------------------------------------------
# the sweep


@dataclass
class CrossingEvent:
    edge: int  # boundary edge index of the swept polynomial
    theta: float
    strand: int
    coordinate: complex  # w' on the divisor in the edge chart


@dataclass
class MonodromyResult:
    thetas: np.ndarray
    tracks: np.ndarray  # (n_samples, D, 2) complex (z, w)
    permutation: list
    b0: int
    min_branch_distance: float
    events: list = field(default_factory=list)
    n_theta: int = 0
    start_logs: np.ndarray | None = None

    def cycles(self) -> list[list[int]]:
        return permutation_cycles(self.permutation)

    def labels(self) -> list[int]:
        lab = [0] * len(self.permutation)
        for k, cyc in enumerate(self.cycles()):
            for i in cyc:
                lab[i] = k + 1
        return lab


def permutation_cycles(perm) -> list[list[int]]:
    seen = [False] * len(perm)
    out = []
    for i in range(len(perm)):
        if seen[i]:
            continue
        cyc = []
        j = i
        while not seen[j]:
            seen[j] = True
            cyc.append(j)
            j = perm[j]
        out.append(cyc)
    return out


def sweep(sys: FiberSystem, theta0: float, starts, n_theta: int, tau=0j, extra=(), tol=None,
          record: bool = True, max_move: float = 0.1):
    """Follow the fiber from θ0 to θ0 + π.  Returns (end states, logs at
    checkpoints, checkpoint angles, events)."""
    tol = tol or CONFIG
    special = sorted({theta0 + ((a - theta0) % math.pi) for a in extra if 1e-12 < (a - theta0) % math.pi < math.pi - 1e-12})
    grid = list(theta0 + math.pi * np.arange(n_theta + 1) / n_theta)
    allp = np.array(sorted(set(grid) | set(special)))
    # drop grid points that nearly coincide with special angles
    keep = [allp[0]]
    for a in allp[1:]:
        if a - keep[-1] < 1e-9:
            if a in special:
                keep[-1] = a
            continue
        keep.append(a)
    thetas = np.array(keep)
    states = [(-1, L[0], L[1], 0.0, (thetas[1] - thetas[0])) for L in starts]
    P = np.array([sys.to_base(*s[:4]) for s in states])
    logs = [P.copy()] if record else []
    events = []
    special_set = set(special)
    hmin = tol.step_underflow * math.pi
    for k in range(1, len(thetas)):
        s0, s1 = thetas[k - 1], thetas[k]
        nn = _pairwise_min(P)
        mm = np.minimum(max_move, 0.25 * nn)
        saved = list(states)
        for attempt in range(4):
            try:
                new = sys.track(saved, s0, s1, (0.0, 1.0), (tau, 0j), mm, hmin)
            except NonConvergence:
                if attempt == 3:
                    raise
                mm = mm / 8
                continue
            P2 = np.array([sys.to_base(*s[:4]) for s in new])
            nn2 = _pairwise_min(P2)
            if np.all(nn2 > tol.collision * 10):
                break
            mm = mm / 8
        else:
            raise AmbiguousMatching(f"strands collide near θ={s1:.6f}; branch point too close to RP^1")
        states = new
        P = P2
        if record:
            logs.append(P.copy())
        if s1 in special_set:
            for i, st in enumerate(states):
                if st[0] >= 0 and abs(st[1]) < 1e-6 and abs(sys.edge_angle(st[0]) - (s1 % math.pi)) < 1e-9:
                    events.append(CrossingEvent(int(st[0]), float(s1), i, complex(np.exp(st[2]))))
    return states, logs, thetas, events


def match_fibers(end_logs: np.ndarray, start_logs: np.ndarray) -> list[int]:
    """perm[i] = index of the start point that strand i ends on."""
    n = len(start_logs)
    D = np.max(np.abs(wrap(end_logs[:, None, :] - start_logs[None, :, :])), axis=2)
    perm = [-1] * n
    used = set()
    for i in range(n):
        order = np.argsort(D[i])
        j = int(order[0])
        best = D[i, j]
        second = D[i, order[1]] if n > 1 else np.inf
        if best > 1e-5 * (1 + np.max(np.abs(start_logs[j].real))) or second < 10 * best or j in used:
            raise AmbiguousMatching(f"strand {i} does not return unambiguously (d={best:.3g}, next={second:.3g})")
        perm[i] = j
        used.add(j)
    return perm


def _run(sys: FiberSystem, theta0, starts, n_theta, tau, extra, tol):
    states, logs, thetas, events = sweep(sys, theta0, starts, n_theta, tau, extra, tol)
    end = np.array([sys.to_base(*s[:4]) for s in states])
    # polish at the end angle (same fiber as θ0)
    perm = match_fibers(end, np.array(starts))
    return perm, logs, thetas, events


def monodromy_sweep(sys: FiberSystem, starts, theta0: float, n_theta: int | None = None, tau=0j,
                    extra=(), tol=None, max_doublings: int = 3):
    """Monodromy permutation with resolution doubling until two consecutive
    resolutions agree."""
    tol = tol or CONFIG
    n = n_theta or tol.n_theta
    prev = None
    for _ in range(max_doublings + 1):
        perm, logs, thetas, events = _run(sys, theta0, starts, n, tau, extra, tol)
        if prev is not None and perm == prev[0]:
            return perm, logs, thetas, events, n
        prev = (perm, logs, thetas, events)
        n *= 2
    raise AmbiguousMatching("monodromy permutation did not stabilize under θ refinement")


def monodromy_b0(f: LaurentPolynomial, n_theta: int | None = None, tol=None, precheck: bool = True,
                 theta0: float | None = None) -> MonodromyResult:
    tol = tol or CONFIG
    sys = FiberSystem(f)
    bd = float("inf")
    if precheck:
        infl = log_inflection_points(f, tol)
        bd = branch_distance_to_real(infl)
        if bd <= BRANCH_REFUSE:
            raise CrSingular("Cr singular: branch point on RP^1")
    angles = [sys.edge_angle(k) for k in range(sys.n_edges)]
    th0 = choose_theta0(angles) if theta0 is None else theta0
    starts = start_fiber_logs(sys, th0, tol)
    if len(starts) != sys.degree:
        raise NonConvergence("start fiber incomplete")
    perm, logs, thetas, events, n = monodromy_sweep(sys, starts, th0, n_theta, 0j, angles, tol)
    return _result(perm, logs, thetas, events, n, bd, starts)


def _result(perm, logs, thetas, events, n, bd, starts):
    tracks = np.exp(np.array(logs))
    b0 = len(permutation_cycles(perm))
    return MonodromyResult(np.array(thetas), tracks, perm, b0, bd, events, n, np.array(starts))


# ---------------------------------------------------------------------------
# point clouds and the clustering oracle


@dataclass
class CrCloud:
    points: list  # (z, w)
    labels: list

    def to_json(self):
        return [{"z": [p[0].real, p[0].imag], "w": [p[1].real, p[1].imag], "label": int(l)}
                for p, l in zip(self.points, self.labels)]


def cr_cloud(f: LaurentPolynomial, density: int = 720, result: MonodromyResult | None = None,
             tol=None) -> CrCloud:
    """Fiber points over a θ grid, each labeled by the cycle of its strand."""
    res = result or monodromy_b0(f, density, tol)
    lab = res.labels()
    pts, labels = [], []
    for row in res.tracks:
        for i, p in enumerate(row):
            pts.append((complex(p[0]), complex(p[1])))
            labels.append(lab[i])
    return CrCloud(pts, labels)


def fubini_study_embedding(polygon: LatticePolygon, points, center=(0.0, 0.0)) -> np.ndarray:
    """p -> normalized (z^j)_{j in polygon}, a compact embedding of the toric
    surface; distances stay bounded near the divisors.  ``center`` (in log
    coordinates) is moved to the origin first so the embedding does not
    squash a cloud that sits far from (1, 1)."""
    J = np.array(polygon.lattice_points(), float)
    P = np.array([[np.log(complex(z)), np.log(complex(w))] for z, w in points]) - np.asarray(center)
    ex = P @ J.T
    ex = ex - ex.real.max(axis=1, keepdims=True)
    v = np.exp(ex)
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def fs_distance(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Fubini–Study chordal distance sqrt(1 - |<a, b>|^2) between unit rows."""
    G = np.abs(A.conj() @ B.T)
    return np.sqrt(np.clip(1.0 - G ** 2, 0.0, None))


def cluster_count(vectors: np.ndarray, radius: float) -> int:
    """Single-linkage clusters at the given Fubini–Study radius."""
    from scipy.sparse import coo_matrix
    from scipy.sparse.csgraph import connected_components

    n = len(vectors)
    rows, cols = [], []
    for a in range(0, n, 2048):
        D = fs_distance(vectors[a:a + 2048], vectors)
        r, c = np.nonzero(D <= radius)
        rows.append(r + a)
        cols.append(c)
    r = np.concatenate(rows)
    c = np.concatenate(cols)
    A = coo_matrix((np.ones(len(r)), (r, c)), shape=(n, n))
    k, _ = connected_components(A, directed=False)
    return int(k)


def _fiber_nudged(f: LaurentPolynomial, theta: float, tol, spread: float):
    """fiber_over at θ, or at a nearby angle when θ itself is not transverse;
    returns (angle used, fiber)."""
    for k in range(8):
        th = theta + spread * 0.137 * k * (-1) ** k
        try:
            return th, fiber_over(f, th, tol, retries=0)
        except NonConvergence:
            continue
    return theta, fiber_over(f, theta, tol)


def independent_cloud(f: LaurentPolynomial, n_theta: int = 360, tol=None, target: float = 0.05,
                      max_depth: int = 14, cache: dict | None = None):
    """Fibers solved from scratch (no tracking) on a θ grid that is bisected
    wherever consecutive fibers are further than ``target`` apart in the
    Fubini–Study embedding.  ``cache`` maps angles to fibers already solved.
    Returns (angles, fibers, embedded fibers)."""
    poly = newton_polygon(f)
    cache = {} if cache is None else cache
    fib = cache.setdefault("fibers", {})
    alias = cache.setdefault("alias", {})  # requested angle -> angle solved

    def solve(th):
        if th not in alias:
            key, pts = _fiber_nudged(f, th, tol, 1e-3 * math.pi / n_theta)
            alias[th] = key
            fib[key] = pts
        return alias[th]

    ths = [solve(th) for th in math.pi * (np.arange(n_theta) + 0.5) / n_theta]
    logs = np.log(np.abs(np.array([p for th in ths for p in fib[th]], complex)))
    center = np.median(logs, axis=0)
    ths = sorted(set(ths) | {th for th in fib if 0 <= th < math.pi})
    emb = {th: fubini_study_embedding(poly, fib[th], center) for th in ths}

    def step(a, b):
        return float(fs_distance(emb[a], emb[b]).min(axis=1).max())

    for _ in range(max_depth):
        closed = ths + [ths[0] + math.pi]
        emb[closed[-1]] = emb[ths[0]]
        new = [0.5 * (a + b) for a, b in zip(closed[:-1], closed[1:]) if step(a, b) > target]
        del emb[closed[-1]]
        if not new:
            break
        new = [solve(th) for th in new]
        for th in new:
            emb[th] = fubini_study_embedding(poly, fib[th], center)
        ths = sorted(set(ths) | set(new))
    return ths, [fib[t] for t in ths], [emb[t] for t in ths]


def cluster_b0(f: LaurentPolynomial, n_theta: int = 360, tol=None, target: float = 0.05,
               levels: int = 5) -> int:
    """Component count of Cr from independently solved fibers, by
    single-linkage clustering in a Fubini–Study embedding of the toric
    surface.  The radius is tied to the θ density: 1.5 times the largest
    slice-to-slice nearest-neighbour movement.  A coarse radius can only
    merge components, so the sampling target is halved until two successive
    counts agree."""
    cache: dict = {}
    count = None
    for _ in range(levels):
        _, _, V = independent_cloud(f, n_theta, tol, target, cache=cache)
        V = V + [V[0]]  # θ = π closes up onto θ = 0
        step = max(float(fs_distance(a, b).min(axis=1).max()) for a, b in zip(V[:-1], V[1:]))
        k = cluster_count(np.concatenate(V[:-1]), 1.5 * step)
        if k == count:
            return k
        count, target = k, target / 2
    return count


# ---------------------------------------------------------------------------
# Viro families: monodromy at a parameter t and the patchwork prediction


def family_system(fam) -> FiberSystem:
    return FiberSystem(fam.base, nu={e: fam.lift(e) for e in fam.base.support()})


def family_start_fiber(fam, sys: FiberSystem, theta0: float, tau: complex, seed_t: float = 1e-10, tol=None):
    """Fiber of f_t over θ0: cell fibers placed in their cells' regions at a
    tiny t with the same argument, then continued in t."""
    tau_s = complex(math.log(seed_t), tau.imag)
    if tau_s.real >= tau.real:
        tau_s = complex(tau.real - 10.0, tau.imag)
    starts = []
    from .viro import cell_polynomial

    for k in range(len(fam.cells)):
        cs = FiberSystem(cell_polynomial(fam, k))
        g = np.array(fam.pieces[k].g, float)
        for L in start_fiber_logs(cs, theta0, tol):
            Ln, res, ok = sys.refine(L - g * tau_s, theta0, tau_s)
            if not ok:
                raise NonConvergence(f"cell {k}: start point did not refine at small t")
            starts.append(Ln)
    P = np.array(starts)
    if len(P) != sys.degree or np.min(_pairwise_min(P)) < 1e-8:
        raise NonConvergence("cell fibers do not assemble into a full fiber")
    states = [(-1, L[0], L[1], 0.0, 0.05) for L in starts]
    nn = _pairwise_min(P)
    states = sys.track(states, 0.0, 1.0, (theta0, 0.0), (tau_s, tau - tau_s), np.minimum(0.1, 0.25 * nn),
                       1e-12)
    out = [sys.to_base(*s[:4]) for s in states]
    out = [sys.refine(L, theta0, tau)[0] for L in out]
    if np.min(_pairwise_min(np.array(out))) < 1e-8:
        raise NonConvergence("strands merged during the t-continuation")
    return out


def monodromy_b0_family(fam, t: complex, n_theta: int | None = None, tol=None,
                        theta0: float | None = None) -> MonodromyResult:
    """monodromy_b0 of f_t for a Viro family, with the coefficients t^nu
    kept in logarithmic form."""
    t = complex(t)
    tau = cmath_log(t)
    sys = family_system(fam)
    angles = [sys.edge_angle(k) for k in range(sys.n_edges)]
    th0 = choose_theta0(angles) if theta0 is None else theta0
    starts = family_start_fiber(fam, sys, th0, tau, tol=tol)
    perm, logs, thetas, events, n = monodromy_sweep(sys, starts, th0, n_theta, tau, angles, tol)
    return _result(perm, logs, thetas, events, n, float("nan"), starts)


def cmath_log(t: complex) -> complex:
    import cmath

    return cmath.log(t)


@dataclass
class CellSweep:
    cell: int
    permutation: list
    node_events: list  # (theta, strand, node index)


@dataclass
class LimitPrediction:
    b0: int
    permutation: list
    cells: list
    labels: list  # global strand -> (cell, local strand)


def _cell_sweep(fam, k: int, nodes, theta0: float, n_theta, tol) -> CellSweep:
    from .viro import cell_polynomial

    f = cell_polynomial(fam, k)
    sys = FiberSystem(f)
    angles = [sys.edge_angle(i) for i in range(sys.n_edges)]
    starts = start_fiber_logs(sys, theta0, tol)
    if len(starts) != sys.degree:
        raise NonConvergence(f"cell {k}: start fiber incomplete")
    perm, _, _, events, _ = monodromy_sweep(sys, starts, theta0, n_theta, 0j, angles, tol)
    out = []
    for ev in events:
        e = sys.edges[ev.edge]
        key = frozenset(e)
        cand = [nd for nd in nodes if frozenset(nd.edge) == key]
        if not cand:
            continue  # a boundary divisor of the whole polygon
        m = sys.mrows[ev.edge]
        d = cand[0].direction
        md = int(round(m[0] * d[0] + m[1] * d[1]))
        xi = ev.coordinate ** md
        best = min(cand, key=lambda nd: abs(nd.xi - xi))
        if abs(best.xi - xi) > 1e-5 * max(1.0, abs(xi)):
            raise NonConvergence(f"cell {k}: divisor crossing at {xi} matches no node")
        out.append((ev.theta, ev.strand, best.index))
    seen = sorted(n for _, _, n in out)
    own = sorted(nd.index for nd in nodes if k in nd.cells)
    if seen != own:
        raise NonConvergence(f"cell {k}: node crossings {seen} do not match nodes {own}")
    return CellSweep(k, perm, out)


def limit_prediction(fam, n_theta: int | None = None, tol=None, theta0: float | None = None) -> LimitPrediction:
    """Components of Cr(f_t), t in U, predicted from the cells: each node is
    replaced by the connected deformation, under which the strand of one cell
    arriving at the node leaves along the other cell's strand."""
    from .viro import nodes_of_C0

    nodes = nodes_of_C0(fam)
    angles = []
    for c in fam.cells:
        for e in c.edges():
            d = (e[1][0] - e[0][0], e[1][1] - e[0][1])
            angles.append(math.atan2(d[1], d[0]) % math.pi)
    th0 = choose_theta0(angles) if theta0 is None else theta0
    sweeps = [_cell_sweep(fam, k, nodes, th0, n_theta, tol) for k in range(len(fam.cells))]
    labels = [(k, s) for k, sw in enumerate(sweeps) for s in range(len(sw.permutation))]
    index = {lab: i for i, lab in enumerate(labels)}
    # node events in θ order; each pairs one strand of each adjacent cell
    by_node: dict = {}
    for sw in sweeps:
        for th, s, n in sw.node_events:
            by_node.setdefault(n, []).append((th, sw.cell, s))
    swaps = []
    for n, evs in by_node.items():
        if len(evs) != 2:
            raise NonConvergence(f"node {n} crossed by {len(evs)} strands")
        (th1, k1, s1), (th2, k2, s2) = evs
        if abs(th1 - th2) > 1e-9:
            raise NonConvergence(f"node {n}: crossing angles disagree")
        swaps.append((th1, (k1, s1), (k2, s2)))
    swaps.sort(key=lambda x: x[0])
    pos = list(labels)  # global strand g currently occupies position pos[g]
    where = {lab: g for g, lab in enumerate(labels)}
    for _, a, b in swaps:
        ga, gb = where[a], where[b]
        pos[ga], pos[gb] = b, a
        where[a], where[b] = gb, ga
    perm = []
    for g in range(len(labels)):
        k, s = pos[g]
        perm.append(index[(k, sweeps[k].permutation[s])])
    return LimitPrediction(len(permutation_cycles(perm)), perm, sweeps, labels)


def b0_limit(fam, n_theta: int | None = None, tol=None) -> int:
    return limit_prediction(fam, n_theta, tol).b0
