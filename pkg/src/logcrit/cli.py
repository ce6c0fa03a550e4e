"""Command-line interface, JSON I/O and SVG rendering of amoebas, contours
and tropical curves.

Exit codes: 0 success, 1 a check failed, 2 bad input, 3 numerical
non-convergence.
"""
from __future__ import annotations

import argparse
import itertools
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import numerics
from .numerics import NonConvergence, load_tolerances, set_config
from .poly import LaurentPolynomial

EXIT_OK, EXIT_FAILED, EXIT_INPUT, EXIT_NONCONV = 0, 1, 2, 3
MARGIN = 0.05
SVG_WIDTH = 800
PALETTE = ("#1f5fbf", "#d6262b", "#2a9d3a", "#8e44ad", "#e67e22", "#16a2b8", "#7f6000", "#e84393")
AMOEBA_FILL = "#f2c500"


class InputError(ValueError):
    """Malformed or inconsistent command-line input."""


# ---------------------------------------------------------------------------
# amoeba sampling


def _w_coefficients(f: LaurentPolynomial, zs: np.ndarray) -> np.ndarray:
    """Rows of coefficients (ascending in w) of f(z, .) for each z."""
    lo = f.min_exponents()
    deg = max(e[1] for e in f.support()) - lo[1]
    out = np.zeros((len(zs), deg + 1), complex)
    for e, c in f.items():
        out[:, e[1] - lo[1]] += c * zs ** (e[0] - lo[0])
    return out


def _batched_roots(C: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Nonzero roots of each row of ascending coefficients, skipping rows
    whose extreme coefficients vanish (a tentacle escapes there). Returns
    the mask of kept rows and their roots."""
    n = C.shape[1] - 1
    scale = np.abs(C).max(axis=1)
    keep = (np.abs(C[:, -1]) > 1e-13 * scale) & (np.abs(C[:, 0]) > 1e-13 * scale)
    C = C[keep]
    if n < 1 or not len(C):
        return keep & False, np.zeros((0, max(n, 0)), complex)
    comp = np.zeros((len(C), n, n), complex)
    comp[:, 0, :] = -C[:, -2::-1] / C[:, -1:]
    if n > 1:
        comp[:, np.arange(1, n), np.arange(n - 1)] = 1.0
    return keep, np.linalg.eigvals(comp)


def amoeba_box(f: LaurentPolynomial, pad: float = 3.0) -> tuple[float, float, float, float]:
    """Bounding box of the vertices of the tropical polynomial
    max_j (log|c_j| + <j, x>), padded; it contains the body of the amoeba."""
    pts = [(e[0], e[1], math.log(abs(c))) for e, c in f.items()]
    xs, ys = [0.0], [0.0]
    for p, q, r in itertools.combinations(pts, 3):
        A = np.array([[p[0] - q[0], p[1] - q[1]], [p[0] - r[0], p[1] - r[1]]], float)
        if abs(np.linalg.det(A)) < 1e-12:
            continue
        x = np.linalg.solve(A, [q[2] - p[2], r[2] - p[2]])
        val = p[2] + p[0] * x[0] + p[1] * x[1]
        if val >= max(u[2] + u[0] * x[0] + u[1] * x[1] for u in pts) - 1e-9:
            xs.append(x[0])
            ys.append(x[1])
    return min(xs) - pad, max(xs) + pad, min(ys) - pad, max(ys) + pad


def amoeba_points(f: LaurentPolynomial, resolution: int = 200, box=None) -> np.ndarray:
    """Log of points of V(f): for a grid of (|z|, arg z) solve f(z, .) = 0
    in w, then the same with the roles of z and w swapped."""
    if f.is_zero():
        raise ValueError("zero polynomial has no amoeba")
    x0, x1, y0, y1 = box or amoeba_box(f)
    phis = np.linspace(0.0, 2 * math.pi, resolution, endpoint=False)
    out = []
    for swap, (lo, hi) in ((False, (x0, x1)), (True, (y0, y1))):
        g = f if not swap else LaurentPolynomial({(e[1], e[0]): c for e, c in f.items()})
        if max(e[1] for e in g.support()) == min(e[1] for e in g.support()):
            continue
        r = np.linspace(lo, hi, resolution)
        R, PHI = np.meshgrid(r, phis, indexing="ij")
        zs = np.exp(R + 1j * PHI).ravel()
        keep, W = _batched_roots(_w_coefficients(g, zs))
        if not W.size:
            continue
        a = np.repeat(np.log(np.abs(zs[keep])), W.shape[1])
        b = np.log(np.abs(W.ravel()))
        ok = np.isfinite(b)
        out.append(np.stack([b, a], 1)[ok] if swap else np.stack([a, b], 1)[ok])
    if not out:
        return np.zeros((0, 2))
    return np.concatenate(out)


# ---------------------------------------------------------------------------
# scenes and SVG


@dataclass
class RenderScene:
    amoeba: np.ndarray  # (N, 2) points in Log coordinates
    contours: list = field(default_factory=list)  # (label, (M, 2) polyline)
    overlay: list = field(default_factory=list)  # ((x0, y0), (x1, y1)) segments
    viewport: tuple | None = None  # (xmin, xmax, ymin, ymax)
    style: dict = field(default_factory=dict)

    def fitted_viewport(self) -> tuple[float, float, float, float]:
        if self.viewport is not None:
            return self.viewport
        pts = [np.asarray(self.amoeba).reshape(-1, 2)] + [np.asarray(p) for _, p in self.contours]
        P = np.concatenate(pts) if pts else np.zeros((0, 2))
        P = P[np.all(np.isfinite(P), axis=1)]
        if not len(P):
            raise ValueError("empty scene")
        x0, y0 = P.min(axis=0)
        x1, y1 = P.max(axis=0)
        dx, dy = max(x1 - x0, 1e-9), max(y1 - y0, 1e-9)
        return (x0 - MARGIN * dx, x1 + MARGIN * dx, y0 - MARGIN * dy, y1 + MARGIN * dy)


def contour_polylines(res, clip: float = 1e3) -> list:
    """Log of each strand of a monodromy sweep, labeled by its cycle; strands
    are cut where they leave to the toric boundary."""
    lab = res.labels()
    L = np.log(np.abs(res.tracks))  # (n, D, 2)
    out = []
    for i in range(L.shape[1]):
        seg = []
        for p in L[:, i, :]:
            if np.all(np.isfinite(p)) and np.abs(p).max() < clip:
                seg.append(p)
            elif len(seg) > 1:
                out.append((lab[i], np.array(seg)))
                seg = []
            else:
                seg = []
        if len(seg) > 1:
            out.append((lab[i], np.array(seg)))
    return out


def tropical_overlay(fam, t: complex, length: float = 1e3) -> list:
    """Segments of the tropical curve scaled to Log coordinates at t, rays
    cut at the given length."""
    s = -math.log(abs(t))
    segs = []
    for e in fam.tropical.edges:
        a = (float(e.start[0]) * s, float(e.start[1]) * s)
        if e.bounded:
            b = (float(e.end[0]) * s, float(e.end[1]) * s)
        else:
            n = math.hypot(*e.direction)
            b = (a[0] + length * e.direction[0] / n, a[1] + length * e.direction[1] / n)
        segs.append((a, b))
    return segs


def containment_defect(scene: RenderScene, pixels: float = 4.0) -> float:
    """Fraction of in-view contour points farther than the given number of
    pixels from every amoeba point."""
    from scipy.spatial import cKDTree

    x0, x1, y0, y1 = scene.fitted_viewport()
    px = (x1 - x0) / SVG_WIDTH
    A = np.asarray(scene.amoeba)
    if not scene.contours or not len(A):
        return 0.0
    P = np.concatenate([np.asarray(p) for _, p in scene.contours])
    inside = (P[:, 0] >= x0) & (P[:, 0] <= x1) & (P[:, 1] >= y0) & (P[:, 1] <= y1)
    P = P[inside]
    if not len(P):
        return 0.0
    d, _ = cKDTree(A).query(P)
    return float(np.mean(d > pixels * px))


def _fmt(x: float) -> str:
    s = f"{x:.2f}"
    return "0.00" if s == "-0.00" else s


def render_svg(scene: RenderScene, path) -> Path:
    x0, x1, y0, y1 = scene.fitted_viewport()
    W = SVG_WIDTH
    H = max(1, int(round(W * (y1 - y0) / (x1 - x0))))
    sx, sy = W / (x1 - x0), H / (y1 - y0)
    tx = lambda x: (x - x0) * sx
    ty = lambda y: (y1 - y) * sy
    st = {"point_radius": 1.2, "point_opacity": 0.35, "line_width": 1.5, **scene.style}
    lines = ['<?xml version="1.0" encoding="UTF-8"?>',
             f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{W}" height="{H}" '
             f'viewBox="0 0 {W} {H}">',
             f'<rect width="{W}" height="{H}" fill="white"/>']
    A = np.asarray(scene.amoeba).reshape(-1, 2)
    if len(A):
        P = np.stack([(A[:, 0] - x0) * sx, (y1 - A[:, 1]) * sy], 1)
        P = P[(P[:, 0] >= 0) & (P[:, 0] <= W) & (P[:, 1] >= 0) & (P[:, 1] <= H)]
        P = np.unique(np.round(P * 2) / 2, axis=0)  # half-pixel sprites
        lines.append(f'<g id="amoeba" fill="{AMOEBA_FILL}" fill-opacity="{st["point_opacity"]}">')
        r = st["point_radius"]
        lines.extend(f'<circle cx="{_fmt(a)}" cy="{_fmt(b)}" r="{r}"/>' for a, b in P)
        lines.append("</g>")
    if scene.contours:
        lines.append(f'<g id="contour" fill="none" stroke-width="{st["line_width"]}">')
        for label, poly in scene.contours:
            pts = " ".join(f"{_fmt(tx(p[0]))},{_fmt(ty(p[1]))}" for p in poly)
            col = PALETTE[(int(label) - 1) % len(PALETTE)]
            lines.append(f'<polyline class="component-{int(label)}" stroke="{col}" points="{pts}"/>')
        lines.append("</g>")
    if scene.overlay:
        lines.append('<g id="tropical" fill="none" stroke="black" stroke-width="1" stroke-dasharray="6,4">')
        for a, b in scene.overlay:
            lines.append(f'<line x1="{_fmt(tx(a[0]))}" y1="{_fmt(ty(a[1]))}" '
                         f'x2="{_fmt(tx(b[0]))}" y2="{_fmt(ty(b[1]))}"/>')
        lines.append("</g>")
    lines.append("</svg>")
    path = Path(path)
    path.write_text("\n".join(lines) + "\n")
    return path


# ---------------------------------------------------------------------------
# input parsing


def parse_complex(s: str) -> complex:
    try:
        parts = [float(x) for x in str(s).split(",")]
    except ValueError:
        raise InputError(f"not a number: {s!r}") from None
    if len(parts) == 1:
        return complex(parts[0])
    if len(parts) == 2:
        return complex(parts[0], parts[1])
    raise InputError(f"expected re or re,im, got {s!r}")


def _read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise InputError(f"no such file: {path}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from None


def load_input(path):
    """A family ({"polynomial", "lift", optional "t"}) or a polynomial
    ({"terms"}); returns (kind, object, raw json)."""
    from .viro import ViroFamily

    obj = _read_json(path)
    try:
        if isinstance(obj, dict) and "lift" in obj:
            return "family", ViroFamily.from_json(obj), obj
        if isinstance(obj, dict) and "polynomial" in obj:
            return "polynomial", LaurentPolynomial.from_json(obj["polynomial"]), obj
        return "polynomial", LaurentPolynomial.from_json(obj), obj
    except (KeyError, TypeError, IndexError) as exc:
        raise InputError(f"{path}: not a polynomial or family ({exc!r})") from None


def load_family(path):
    kind, fam, raw = load_input(path)
    if kind != "family":
        raise InputError(f"{path}: expected a family with a lift")
    return fam, raw


def _family_t(args, raw) -> complex:
    if args.t is not None:
        return parse_complex(args.t)
    if "t" in raw:
        t = raw["t"]
        return complex(*t) if isinstance(t, list) else complex(t)
    raise InputError("a family needs --t (or a \"t\" entry in its JSON)")


def _cjson(x: complex):
    x = complex(x)
    return [x.real, x.imag]


# ---------------------------------------------------------------------------
# subcommands; each returns (exit code, summary line, report dict)


def cmd_b0(args):
    from .critlocus import monodromy_b0, monodromy_b0_family
    from .viro import evaluate_family

    kind, obj, raw = load_input(args.input)
    rep = {"input": kind}
    if kind == "family":
        t = _family_t(args, raw)
        res = monodromy_b0_family(obj, t)
        rep["t"] = _cjson(t)
        rep["degree"] = len(evaluate_family(obj, t).support())
    else:
        res = monodromy_b0(obj)
    rep.update({"b0": res.b0, "permutation": list(map(int, res.permutation)), "n_theta": res.n_theta,
                "cycles": res.cycles()})
    return EXIT_OK, str(res.b0), rep


def cmd_amoeba(args):
    from .critlocus import monodromy_b0, monodromy_b0_family
    from .viro import evaluate_family

    kind, obj, raw = load_input(args.input)
    fam = None
    if kind == "family":
        fam = obj
        t = _family_t(args, raw)
        f = evaluate_family(fam, t)
    else:
        f = obj
        t = None
    A = amoeba_points(f, args.resolution)
    scene = RenderScene(A)
    rep = {"points": int(len(A))}
    if args.contour:
        res = monodromy_b0_family(fam, t) if fam is not None else monodromy_b0(f)
        scene.contours = contour_polylines(res)
        rep["b0"] = res.b0
    if fam is not None and args.tropical:
        scene.overlay = tropical_overlay(fam, t)
    scene.viewport = scene.fitted_viewport() if not scene.overlay else RenderScene(A, scene.contours).fitted_viewport()
    render_svg(scene, args.out)
    rep["viewport"] = list(map(float, scene.viewport))
    rep["containment_defect"] = containment_defect(scene)
    rep["out"] = str(args.out)
    return EXIT_OK, f"wrote {args.out} ({len(A)} amoeba points)", rep


def cmd_patchwork_verify(args):
    from .critlocus import b0_limit, monodromy_b0_family
    from .viro import membership_in_U

    fam, raw = load_family(args.input)
    ts = [parse_complex(s) for s in args.t_list] if args.t_list else ([_family_t(args, raw)])
    pred = b0_limit(fam)
    rows, ok, verified = [], True, 0
    for t in ts:
        row = {"t": _cjson(t)}
        try:
            m = membership_in_U(fam, t)
            row["membership"] = m.ok
        except NonConvergence as exc:
            row["membership"] = False
            row["membership_error"] = str(exc)
        res = monodromy_b0_family(fam, t)
        row["b0"] = res.b0
        if row["membership"]:
            verified += 1
            row["agrees"] = res.b0 == pred
            ok &= row["agrees"]
        rows.append(row)
    ok = ok and verified > 0
    rep = {"prediction": pred, "samples": rows, "verified": verified, "ok": ok}
    return (EXIT_OK if ok else EXIT_FAILED), f"prediction {pred}; {verified} member t; ok={ok}", rep


def cmd_inflection_track(args):
    from .tropical import default_tropical_schedule, track_family_inflections

    fam, _ = load_family(args.input)
    ts = [float(parse_complex(s).real) for s in args.schedule] if args.schedule else default_tropical_schedule()
    if any(not 0 < t < 1 for t in ts):
        raise InputError("schedule values must lie in (0, 1)")
    tr = track_family_inflections(fam, ts)
    steps = []
    for t, logs in zip(tr.ts, tr.logs):
        lt = math.log(t)
        steps.append({"t": t, "log_t": [[-L[0].real / lt, -L[1].real / lt] for L in logs]})
    rep = {"count": len(tr.logs[0]) if tr.logs else 0, "origin": [str(o) for o in tr.origin], "steps": steps}
    return EXIT_OK, f"{rep['count']} inflection points tracked over {len(ts)} values of t", rep


def cmd_asymptotics(args):
    from .asymptotics import default_schedule, normalize_at_node, verify_asymptotic, verify_lemma41, \
        verify_vorder_monomials
    from .viro import nodes_of_C0

    fam, _ = load_family(args.input)
    nodes = nodes_of_C0(fam)
    if not 0 <= args.node < len(nodes):
        raise InputError(f"node {args.node} out of range (family has {len(nodes)})")
    node = nodes[args.node]
    ts = [float(parse_complex(s).real) for s in args.schedule] if args.schedule else default_schedule(12, 1e-2, 1e-5)
    fit = verify_asymptotic(fam, node, ts)
    norm = normalize_at_node(fam, node)
    s41 = verify_lemma41(norm)
    s42 = verify_vorder_monomials(norm)
    checks = {
        "exponent": bool(abs(fit.fitted_exponent - fit.kappa / 2) <= 0.02),
        "amplitude": bool(abs(fit.amplitude_ratio - 1) <= 0.05),
        "symmetry": bool(fit.symmetry_defect < 0.05),
        "structure": bool(s41.ok and s42.ok),
        "tracked": fit.ok,
    }
    ok = all(checks.values())
    rep = {"fit": fit.to_json(), "error": fit.error, "structure": {"halfspaces": s41.to_json(),
           "monomials": s42.to_json()}, "checks": checks, "ok": ok}
    line = (f"node {node.index}: exponent {fit.fitted_exponent:.4f} (kappa/2 = {fit.kappa / 2}), "
            f"amplitude {fit.amplitude_ratio:.4f}, symmetry {fit.symmetry_defect:.2e}")
    return (EXIT_OK if ok else EXIT_FAILED), line, rep


def cmd_tropical_verify(args):
    from .tropical import verify_midpoint_theorem

    fam, _ = load_family(args.input)
    ts = [float(parse_complex(s).real) for s in args.schedule] if args.schedule else None
    rep = verify_midpoint_theorem(fam, ts)
    return (EXIT_OK if rep.ok else EXIT_FAILED), f"midpoint theorem ok={rep.ok}", rep.to_json()


def cmd_construct(args):
    from .catalog import theorem12_construction

    if args.degree < 3 or not 1 <= args.components <= math.comb(args.degree - 1, 2) + 1:
        raise InputError(f"need d >= 3 and 1 <= b <= C(d-1,2)+1, got d={args.degree}, b={args.components}")
    c = theorem12_construction(args.degree, args.components)
    out = c.family.to_json()
    out["t"] = [args.t_suggest, 0.0]
    meta = c.to_json()
    meta.pop("family")
    out["construction"] = meta
    Path(args.out).write_text(json.dumps(out, indent=2, sort_keys=True) + "\n")
    rep = {"out": str(args.out), "construction": meta}
    return EXIT_OK, f"wrote {args.out}: degree {c.d}, variants {''.join(c.variants)}", rep


def cmd_catalog_check(args):
    from .catalog import CHECKS, RationalFamilyParams, run_with_halving

    raw = _read_json(args.params)
    try:
        params = RationalFamilyParams.from_json(raw)
    except (KeyError, TypeError) as exc:
        raise InputError(f"{args.params}: bad parameters ({exc!r})") from None
    rep = run_with_halving(CHECKS[args.prop], params, tries=args.tries)
    return (EXIT_OK if rep.ok else EXIT_FAILED), f"{rep.name}: ok={rep.ok}", rep.to_json()


def cmd_appendix_verify(args):
    from .tropical import verify_appendix_case

    kw = {}
    for k in "abcd":
        v = getattr(args, k)
        if v is not None:
            kw[k] = parse_complex(v)
    rep = verify_appendix_case(**kw)
    fails = [k for k, v in rep.checks.items() if not v]
    line = "all checks pass" if not fails else "failed: " + ", ".join(fails)
    return (EXIT_OK if rep.ok else EXIT_FAILED), line, rep.to_json()


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    def add_globals(parser, defaults):
        d = (lambda v: v) if defaults else (lambda v: argparse.SUPPRESS)
        parser.add_argument("--tol-file", default=d(None), help="JSON file overriding numerical tolerances")
        parser.add_argument("--threads", type=int, default=d(None), help="cap on worker threads")
        parser.add_argument("--seed", type=int, default=d(0), help="seed for every random choice")
        parser.add_argument("--json-out", default=d(None), help="write the full report here")

    p = argparse.ArgumentParser(prog="logcrit", description=__doc__.splitlines()[0], allow_abbrev=False)
    add_globals(p, True)
    # the global flags are accepted after the subcommand too
    common = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    add_globals(common, False)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("b0", parents=[common], allow_abbrev=False, help="components of the Log-critical locus")
    s.add_argument("input")
    s.add_argument("--t", help="family parameter re[,im]")
    s.set_defaults(func=cmd_b0)

    s = sub.add_parser("amoeba", parents=[common], allow_abbrev=False, help="render amoeba (and contour) to SVG")
    s.add_argument("input")
    s.add_argument("--out", required=True)
    s.add_argument("--contour", action="store_true")
    s.add_argument("--tropical", action="store_true", help="overlay the tropical curve (families only)")
    s.add_argument("--t", help="family parameter re[,im]")
    s.add_argument("--resolution", type=int, default=200)
    s.set_defaults(func=cmd_amoeba)

    s = sub.add_parser("patchwork-verify", parents=[common], allow_abbrev=False, help="compare the patchwork prediction with monodromy")
    s.add_argument("input")
    s.add_argument("--t-list", nargs="+")
    s.add_argument("--t", help=argparse.SUPPRESS)
    s.set_defaults(func=cmd_patchwork_verify)

    s = sub.add_parser("inflection-track", parents=[common], allow_abbrev=False, help="follow all inflection points along t")
    s.add_argument("input")
    s.add_argument("--schedule", nargs="+")
    s.set_defaults(func=cmd_inflection_track)

    s = sub.add_parser("asymptotics", parents=[common], allow_abbrev=False, help="fit the inflection law at a node")
    s.add_argument("input")
    s.add_argument("--node", type=int, required=True)
    s.add_argument("--schedule", nargs="+")
    s.set_defaults(func=cmd_asymptotics)

    s = sub.add_parser("tropical-verify", parents=[common], allow_abbrev=False, help="tropical limits of node inflection points")
    s.add_argument("input")
    s.add_argument("--schedule", nargs="+")
    s.set_defaults(func=cmd_tropical_verify)

    s = sub.add_parser("construct", parents=[common], allow_abbrev=False, help="degree d family with b predicted components")
    s.add_argument("--degree", type=int, required=True)
    s.add_argument("--components", type=int, required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--t-suggest", type=float, default=1e-7, help="parameter stored with the family")
    s.set_defaults(func=cmd_construct)

    s = sub.add_parser("catalog-check", parents=[common], allow_abbrev=False, help="checks on rational curves with interlacing roots")
    s.add_argument("--prop", required=True, choices=["eps", "critloc", "deformation", "harnack"])
    s.add_argument("--params", required=True)
    s.add_argument("--tries", type=int, default=5)
    s.set_defaults(func=cmd_catalog_check)

    s = sub.add_parser("appendix-verify", parents=[common], allow_abbrev=False, help="the cubic-branch counterexample family")
    for k in "abcd":
        s.add_argument(f"--{k}")
    s.set_defaults(func=cmd_appendix_verify)
    return p


def _configure(args):
    if args.tol_file:
        try:
            set_config(load_tolerances(args.tol_file))
        except FileNotFoundError:
            raise InputError(f"no such file: {args.tol_file}") from None
        except json.JSONDecodeError as exc:
            raise InputError(f"{args.tol_file}: invalid JSON ({exc})") from None
    if args.threads is not None:
        if args.threads < 1:
            raise InputError("--threads must be positive")
        import numba

        numba.set_num_threads(min(args.threads, numba.config.NUMBA_NUM_THREADS))
    np.random.seed(args.seed)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        _configure(args)
        code, line, rep = args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NonConvergence as exc:
        print(f"non-convergence: {exc}", file=sys.stderr)
        return EXIT_NONCONV
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print(line)
    if args.json_out:
        rep = {"command": args.command, "seed": args.seed, "threads": args.threads,
               "tolerances": numerics.CONFIG.to_dict(), "report": rep}
        Path(args.json_out).write_text(json.dumps(rep, indent=2, sort_keys=True, default=_default) + "\n")
    return code


def _default(o):
    if isinstance(o, complex):
        return [o.real, o.imag]
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"cannot serialize {type(o).__name__}")


if __name__ == "__main__":
    sys.exit(main())
