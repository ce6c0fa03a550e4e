"""Local structure of a Viro family at a node of C_0: the normalized
coordinates (z, w~, t), the branch data of the two node-local inflection
points, their continuation in t, and tropism enumeration."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

import numpy as np

from .gauss import inflection_numerator
from .lattice import primitive, unimodular_with_first_row
from .numerics import LogPoly, NonConvergence, log_newton, roots
from .poly import LaurentPolynomial, shift_w

ZERO_REL = 1e-10  # coefficients below this (relative) count as cancelled


def _normal_into(cell, edge) -> tuple[int, int]:
    (x0, y0), (x1, y1) = edge
    n = primitive((-(y1 - y0), x1 - x0))
    for v in cell.vertices:
        s = n[0] * (v[0] - x0) + n[1] * (v[1] - y0)
        if s != 0:
            return (n[0], n[1]) if s > 0 else (-n[0], -n[1])
    raise ValueError("degenerate cell")


@dataclass
class NodeNormalization:
    node: object
    right: int
    left: int
    rows: tuple  # (n, m): new exponents j' = (<n,j>, <m,j>) + shift
    shift: tuple[int, int]
    piece: object  # linear piece of the lift on the right cell
    w0: complex  # node position in the new w coordinate
    kappa: int
    ell: int
    delta: Fraction
    a: complex
    b: complex
    c: complex
    d: complex
    G: LaurentPolynomial  # f_t in (z, w/w0, t) before the translation
    poly: LaurentPolynomial  # f~_t in (z, w~, t), w~ = w/w0 - 1
    dropped: float = 0.0  # largest coefficient treated as cancelled

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.rows, float)

    @property
    def q_points(self) -> dict:
        l, k = self.ell, self.kappa
        return {"q0": (l, 0, 0), "q1": (l, 1, 0), "q2": (l + 1, 0, 0), "q3": (l - 1, 0, k)}

    def to_original(self, z: complex, wbar: complex, tau: complex) -> np.ndarray:
        """Log coordinates in the original chart of the point (z, w/w0 = wbar)."""
        Lnew = np.array([cmath.log(z), cmath.log(self.w0) + cmath.log(wbar)])
        g = np.array(self.piece.g, float)
        return self.matrix.T @ Lnew - g * tau

    def from_original(self, L: np.ndarray, tau: complex) -> tuple[complex, complex]:
        g = np.array(self.piece.g, float)
        Lnew = np.linalg.solve(self.matrix.T, np.asarray(L) + g * tau)
        return cmath.exp(Lnew[0]), cmath.exp(Lnew[1]) / self.w0

    def gamma_to_original(self, u: complex, v: complex) -> tuple[complex, complex]:
        x = np.linalg.solve(self.matrix, np.array([u, v]))
        return complex(x[0]), complex(x[1])

    def to_json(self):
        c = lambda x: [complex(x).real, complex(x).imag]
        return {"node": self.node.index, "kappa": self.kappa, "ell": self.ell, "delta": str(self.delta),
                "a": c(self.a), "b": c(self.b), "c": c(self.c), "d": c(self.d)}


def normalize_at_node(fam, node) -> NodeNormalization:
    R, Lc = node.cells
    cells = fam.cells
    n = _normal_into(cells[R], node.edge)
    nrow, mrow = unimodular_with_first_row(n)
    h = nrow[0] * node.edge[0][0] + nrow[1] * node.edge[0][1]
    piece = fam.pieces[R]
    other = fam.pieces[Lc]
    dg = (other.g[0] - piece.g[0], other.g[1] - piece.g[1])
    # on the left cell nu' = -kappa (<n,j> - h)
    kappa = -(dg[0] * n[0] + dg[1] * n[1]) // (n[0] * n[0] + n[1] * n[1])
    if (dg[0], dg[1]) != (-kappa * n[0], -kappa * n[1]) or kappa <= 0:
        raise ValueError("lift is not a fold along the node's edge")
    sup = fam.base.support()
    j1 = [nrow[0] * e[0] + nrow[1] * e[1] for e in sup]
    j2 = [mrow[0] * e[0] + mrow[1] * e[1] for e in sup]
    ell = max(2, h - min(j1))
    shift = (ell - h, -min(j2))
    terms = {}
    for e, cval in fam.base.items():
        jj = (nrow[0] * e[0] + nrow[1] * e[1] + shift[0], mrow[0] * e[0] + mrow[1] * e[1] + shift[1],
              fam.lift(e) - piece(e))
        terms[jj] = cval
    P = LaurentPolynomial(terms, 3)
    # node position: chi^d = xi, and chi^d = w'^<m,d> since <n,d> = 0
    md = mrow[0] * node.direction[0] + mrow[1] * node.direction[1]
    w0 = node.xi ** md
    edge_poly = [P.coeff((ell, k, 0)) for k in range(P.degree_in("w") + 1)]
    rr = roots(edge_poly).roots
    w0 = complex(rr[np.argmin(np.abs(rr - w0))])  # polish against the new chart's edge polynomial
    G = P.scale_variables((1.0, w0, 1.0))
    F = shift_w(G, 1.0)
    scale = max(abs(F.coeff((ell, k, 0))) for k in range(F.degree_in("w") + 1))
    q0 = F.coeff((ell, 0, 0))
    dropped = abs(q0)
    if abs(q0) > 1e-8 * scale:
        raise ValueError("node normal form has the q0 monomial: family is Log degenerate here")
    F = LaurentPolynomial({e: v for e, v in F.items() if e != (ell, 0, 0)}, 3, clean=False)
    a = F.coeff((ell + 1, 0, 0))
    b = F.coeff((ell, 1, 0))
    c = F.coeff((ell - 1, 0, kappa))
    big = F.max_abs()
    missing = [name for name, v in (("q1", b), ("q2", a), ("q3", c)) if abs(v) <= ZERO_REL * big]
    if missing:
        raise ValueError(f"node normal form lacks ({', '.join(missing)} absent): family is Log degenerate here")
    ds = sorted(e[2] for e in F.support() if e[0] == ell and e[1] == 0 and e[2] > 0
                and abs(F.coeff(e)) > ZERO_REL * big)
    half = Fraction(kappa, 2)
    if ds and ds[0] <= half:
        delta, d = Fraction(ds[0]), F.coeff((ell, 0, ds[0]))
    else:
        delta, d = half, 0j
    return NodeNormalization(node, R, Lc, (tuple(nrow), tuple(mrow)), shift, piece, w0, kappa, ell, delta,
                             a, b, c, d, G, F, dropped)


# ---------------------------------------------------------------------------
# branch data


@dataclass
class BranchData:
    exponents: tuple[int, int, int]
    alphas: tuple[complex, complex]
    beta: complex | None
    lam: complex
    branches: int

    def alpha_residual(self, norm: NodeNormalization) -> float:
        return max(abs(norm.c + norm.a * al * al) for al in self.alphas) / max(abs(norm.c), abs(norm.a))

    def predicted_gamma(self, norm: NodeNormalization, t: complex) -> list[complex]:
        """Leading terms 2 a alpha / b * t^(kappa/2) of the two values u'/v'."""
        tk = cmath.exp(0.5 * norm.kappa * cmath.log(t))
        return [2 * norm.a * al / norm.b * tk for al in self.alphas]


def branch_data(norm: NodeNormalization) -> BranchData:
    al = cmath.sqrt(-norm.c / norm.a)
    lam = 2 * cmath.sqrt(norm.a * norm.c) / norm.b
    if norm.kappa % 2 == 0:
        exps = (norm.kappa // 2, int(norm.delta), 1)
        nb = 2
    else:
        exps = (norm.kappa, int(2 * norm.delta), 2)
        nb = 1
    g = math.gcd(math.gcd(*exps[:2]), exps[2])
    exps = tuple(x // g for x in exps)
    beta = -norm.d / norm.b if norm.d != 0 else None
    return BranchData(exps, (al, -al), beta, lam, nb)


# ---------------------------------------------------------------------------
# continuation of inflection points in t


def continue_in_t(F3: LaurentPolynomial, N3: LaurentPolynomial, starts, tau0: complex, tau1: complex,
                  max_step: float = 0.25, max_move: float = 0.3):
    """Follow solutions of {F = N = 0} (log coordinates) along the straight
    path tau0 -> tau1 of log t.  Returns the end points."""
    out = []
    for L0 in starts:
        L = np.array(L0, complex)
        s, h = 0.0, max_step / max(1.0, abs(tau1 - tau0))
        prev = None
        while s < 1.0:
            hh = min(h, 1.0 - s)
            if hh < 1e-9:
                raise NonConvergence("t-continuation step underflow")
            sn = s + hh
            tau = tau0 + sn * (tau1 - tau0)
            guess = L if prev is None else L + prev[0] * (hh / prev[1])
            fs = [LogPoly.specialize(F3, tau), LogPoly.specialize(N3, tau)]
            Ln, res, ok = log_newton(fs, guess, iters=30)
            if not ok or np.max(np.abs(Ln - L)) > max_move:
                h = hh / 2
                continue
            prev = (Ln - L, hh)
            L, s = Ln, sn
            h = min(hh * 1.5, max_step / max(1.0, abs(tau1 - tau0)))
        out.append(L)
    return out


def family_numerator(fam) -> LaurentPolynomial:
    return inflection_numerator(fam.trivariate)


@dataclass
class NodeInflection:
    point: tuple[complex, complex]
    log: np.ndarray
    gamma: tuple[complex, complex]  # original chart
    gamma_local: complex  # u'/v' in the normalized chart
    predicted: complex
    z: complex  # normalized z-coordinate
    wtilde: complex


SEED_T = 1e-9


def _seed_node(norm: NodeNormalization, bd: BranchData, tau: complex):
    G = norm.G
    out = []
    tk = cmath.exp(0.5 * norm.kappa * tau)
    for al in bd.alphas:
        z = al * tk
        # w from G(z, w, t) = 0, the root nearest 1
        deg = G.degree_in("w")
        co = [0j] * (deg + 1)
        for e, c in G.items():
            co[e[1]] += c * z ** e[0] * cmath.exp(e[2] * tau)
        rr = roots(co).roots
        w = rr[np.argmin(np.abs(rr - 1))]
        out.append(norm.to_original(z, w, tau))
    return out


def node_inflection_points(fam, norm: NodeNormalization, t: complex, tol=None,
                           seed_t: float = SEED_T) -> list[NodeInflection]:
    """The two inflection points of f_t near the node, continued in t from
    the leading-order prediction at tiny |t| (same argument as t)."""
    t = complex(t)
    tau1 = cmath.log(t)
    bd = branch_data(norm)
    F3 = fam.trivariate
    N3 = family_numerator(fam)
    if abs(t) <= seed_t:
        seed_t = abs(t) / 10
    tau0 = complex(math.log(seed_t), tau1.imag)
    seeds = _seed_node(norm, bd, tau0)
    fs0 = [LogPoly.specialize(F3, tau0), LogPoly.specialize(N3, tau0)]
    polished = []
    for L in seeds:
        Ln, res, ok = log_newton(fs0, L, iters=40)
        if not ok:
            raise NonConvergence("seed refinement failed")
        polished.append(Ln)
    ends = continue_in_t(F3, N3, polished, tau0, tau1)
    d = ends[0] - ends[1]
    d = d.real + 1j * ((d.imag + np.pi) % (2 * np.pi) - np.pi)
    if np.max(np.abs(d)) < 1e-6:
        raise NonConvergence("the two node-local inflection points merged")
    pred = bd.predicted_gamma(norm, t)
    lp = LogPoly.specialize(F3, tau1)
    out = []
    for L, pr in zip(ends, pred):
        u, v = lp.gauss(L)
        un, vn = norm.matrix @ np.array([u, v])
        zz, wb = norm.from_original(L, tau1)
        out.append(NodeInflection((cmath.exp(L[0]), cmath.exp(L[1])), L, (complex(u), complex(v)),
                                  complex(un / vn), pr, zz, wb - 1))
    # pair with the predictions by nearest value
    if abs(out[0].gamma_local - pred[1]) + abs(out[1].gamma_local - pred[0]) < \
            abs(out[0].gamma_local - pred[0]) + abs(out[1].gamma_local - pred[1]):
        out[0].predicted, out[1].predicted = pred[1], pred[0]
    return out


# ---------------------------------------------------------------------------
# structural checks


@dataclass
class StructureReport:
    ok: bool
    checks: dict = field(default_factory=dict)

    def to_json(self):
        return {"ok": self.ok, "checks": {k: v for k, v in self.checks.items()}}


def _support(F: LaurentPolynomial, rel: float = ZERO_REL):
    big = F.max_abs()
    return [e for e, c in F.items() if abs(c) > rel * big]


def in_halfspaces(points, ell: int, kappa: int, offset: int = 0) -> bool:
    return all(e[2] >= -kappa * (e[0] - offset) + ell * kappa and e[1] >= 0 and e[2] >= 0 for e in points)


def verify_lemma41(norm: NodeNormalization) -> StructureReport:
    sup = set(_support(norm.poly))
    q = norm.q_points
    checks = {"halfspaces": in_halfspaces(sup, norm.ell, norm.kappa),
              "q0_absent": q["q0"] not in sup,
              "q1_present": q["q1"] in sup, "q2_present": q["q2"] in sup, "q3_present": q["q3"] in sup,
              "ell_at_least_2": norm.ell >= 2}
    return StructureReport(all(checks.values()), checks)


def numerator_tilde(norm: NodeNormalization) -> LaurentPolynomial:
    """N of the normalized family, expressed in (z, w~, t)."""
    return shift_w(inflection_numerator(norm.G, strip=False), 1.0)


def verify_vorder_monomials(norm: NodeNormalization, rel: float = 1e-8) -> StructureReport:
    Nt = numerator_tilde(norm)
    l, b, d = norm.ell, norm.b, norm.d
    got1 = Nt.coeff((3 * l - 1, 1, 0))
    want1 = l * l * b ** 3
    checks = {"zw_coefficient": abs(got1 - want1) <= rel * abs(want1),
              "zw_values": (got1, want1)}
    if d != 0 and norm.delta.denominator == 1:
        got2 = Nt.coeff((3 * l - 1, 0, int(norm.delta)))
        want2 = l * l * b * b * d
        checks["zt_coefficient"] = abs(got2 - want2) <= rel * abs(want2)
        checks["zt_values"] = (got2, want2)
    checks["translate_halfspaces"] = in_halfspaces(_support(Nt), l, norm.kappa, offset=2 * l - 1)
    ok = all(v for k, v in checks.items() if not k.endswith("values"))
    return StructureReport(ok, checks)


# ---------------------------------------------------------------------------
# tropisms


def initial_form(g: LaurentPolynomial, v) -> LaurentPolynomial:
    vals = {e: sum(a * b for a, b in zip(v, e)) for e in g.support()}
    m = min(vals.values())
    return LaurentPolynomial({e: g.coeff(e) for e in g.support() if vals[e] == m}, g.arity, clean=False)


@dataclass
class Tropism:
    v: tuple[int, int, int]
    initial_forms: tuple


def tropisms(g1: LaurentPolynomial, g2: LaurentPolynomial, bound: int = 6) -> list[Tropism]:
    """Primitive v in (Z>=0)^3, entries at most ``bound``, with non-monomial
    initial forms of both generators (a necessary condition for in_v I to
    contain no monomial)."""
    if g1.arity != 3 or g2.arity != 3:
        raise ValueError("tropisms need trivariate generators")
    out = []
    for v in product(range(bound + 1), repeat=3):
        if v == (0, 0, 0) or math.gcd(math.gcd(v[0], v[1]), v[2]) != 1:
            continue
        i1, i2 = initial_form(g1, v), initial_form(g2, v)
        if len(i1) > 1 and len(i2) > 1:
            out.append(Tropism(v, (i1, i2)))
    out.sort(key=lambda tr: (sum(tr.v), tr.v))
    return out


# ---------------------------------------------------------------------------
# the asymptotic law


@dataclass
class FitReport:
    node: int
    kappa: int
    ell: int
    delta: Fraction
    lam: complex
    fitted_exponent: float
    amplitude_ratio: float
    symmetry_defect: float
    ts: list = field(default_factory=list)
    gammas: list = field(default_factory=list)
    ok: bool = True
    error: str | None = None

    def to_json(self):
        return {"node": self.node, "kappa": self.kappa, "ell": self.ell, "delta": str(self.delta),
                "lambda": [self.lam.real, self.lam.imag], "fitted_exponent": self.fitted_exponent,
                "amplitude_ratio": self.amplitude_ratio, "symmetry_defect": self.symmetry_defect,
                "t": list(self.ts)}


def default_schedule(n: int = 12, hi: float = 1e-2, lo: float = 1e-5) -> list[float]:
    return list(np.geomspace(hi, lo, n))


def verify_asymptotic(fam, node, t_schedule=None, tol=None) -> FitReport:
    ts = list(t_schedule) if t_schedule is not None else default_schedule()
    norm = normalize_at_node(fam, node)
    bd = branch_data(norm)
    gams = []
    used = []
    err = None
    for t in ts:
        try:
            pts = node_inflection_points(fam, norm, t, tol)
        except NonConvergence as exc:
            err = f"t={t:.3g}: {exc}"
            break
        gams.append((pts[0].gamma_local, pts[1].gamma_local))
        used.append(t)
    if len(used) < 2:
        return FitReport(node.index, norm.kappa, norm.ell, norm.delta, bd.lam, float("nan"), float("nan"),
                         float("nan"), used, gams, False, err)
    x = np.log(np.array(used, float))
    y = np.log(np.array([0.5 * (abs(a) + abs(b)) for a, b in gams]))
    slope = float(np.polyfit(x, y, 1)[0])
    i = int(np.argmin(used))
    a, b = gams[i]
    amp = 0.5 * (abs(a) + abs(b)) / (abs(bd.lam) * used[i] ** (norm.kappa / 2))
    sym = abs(a + b) / abs(a - b)
    return FitReport(node.index, norm.kappa, norm.ell, norm.delta, bd.lam, slope, float(amp), float(sym),
                     used, gams, err is None, err)
