"""Command line: ``hullbound <subcommand> [flags]``.

Exit codes: 0 success, 1 usage or input error, 2 a certificate or witness
failed its independent re-check. ``--config FILE`` supplies any flag as a
JSON object (keys use underscores); flags given on the command line win.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from pathlib import Path
from typing import Any, Callable

import numpy as np

from . import __version__
from .c2 import (CLEARANCE_DELTA, EXAMPLE_FAMILIES, KnotSpec, SeparationError, SurfaceFamily,
                 geometric_hull_witness, knot_degree_experiment, knot_p1, knot_samples, totally_real_separator)
from .cheb import (DEFAULT_L, EPS_MEMBER, EPS_SEP, grid_hull, membership_numeric, verify_certificate)
from .exact import DEFAULT_TOL, PointConfiguration, hull_point_search, membership_exact
from .experiments import (PathologicalCurveSpec, arc_nonconvexity_witness, chebyshev_symmetry_check,
                          jacobian_constant_check, pathological_membership, quadratic_arc_separation)
from .geometry import circle_for_gap, hull_point_unit_circle
from .poly import Poly2, poly_from_json, poly_to_json
from .report import cnum, dumps, from_cnum
from .sets import SampledSet, finite_set, sample
from .svg import configuration_svg, curve_svg, grid_svg

log = logging.getLogger("hullbound")

EXIT_OK, EXIT_USAGE, EXIT_VERIFY = 0, 1, 2


class UsageError(Exception):
    pass


class VerificationFailure(Exception):
    def __init__(self, message: str, report: dict):
        super().__init__(message)
        self.report = report


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ----------------------------------------------------------------------------
# input parsing


def parse_complex(v: Any) -> complex:
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise UsageError(f"complex numbers are [re, im] pairs, got {v!r}")
        return complex(float(v[0]), float(v[1]))
    if isinstance(v, (int, float)):
        return complex(v)
    raise UsageError(f"cannot read {v!r} as a complex number")


def _json_arg(text: Any) -> Any:
    if not isinstance(text, str):
        return text
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON {text!r}: {exc}") from None


def parse_points(text: Any) -> list[complex]:
    data = _json_arg(text)
    if isinstance(data, dict):
        data = data.get("points")
    if not isinstance(data, list) or not data:
        raise UsageError("points must be a nonempty JSON list of [re, im] pairs")
    return [parse_complex(v) for v in data]


def parse_point2(text: Any) -> tuple[complex, complex]:
    data = _json_arg(text)
    if not isinstance(data, list) or len(data) != 2:
        raise UsageError("a point of C^2 is [[re, im], [re, im]]")
    return parse_complex(data[0]), parse_complex(data[1])


def _points_from(cfg: dict) -> list[complex] | None:
    if cfg.get("points_file"):
        return parse_points(Path(cfg["points_file"]).read_text())
    if cfg.get("points") is not None:
        return parse_points(cfg["points"])
    return None


def _planar_set(cfg: dict) -> SampledSet:
    pts = _points_from(cfg)
    if pts is not None:
        return finite_set(pts)
    if cfg.get("set"):
        K = sample(cfg["set"])
        if K.dimension != 1:
            raise UsageError("inconsistent dimensions: this command needs a planar set")
        return K
    raise UsageError("give --points, --points-file or --set")


def _bbox(values, points: np.ndarray) -> tuple[float, float, float, float]:
    if values is None:
        r = 1.2 * float(np.abs(points).max())
        return -r, r, -r, r
    v = [float(x) for x in values]
    if len(v) == 2:
        return v[0], v[1], v[0], v[1]
    if len(v) == 4:
        return v[0], v[1], v[2], v[3]
    raise UsageError("--bbox takes 2 (square) or 4 numbers")


def _positive(cfg: dict, *keys: str) -> None:
    for k in keys:
        v = cfg.get(k)
        if v is not None and not v > 0:
            raise UsageError(f"{k} must be positive")


# ----------------------------------------------------------------------------
# subcommands; each returns (report, extra artifacts) and raises on failure


def cmd_points(cfg: dict) -> tuple[dict, dict]:
    pts = _points_from(cfg)
    if pts is None:
        raise UsageError("give --points or --points-file")
    _positive(cfg, "tol")
    conf = PointConfiguration(pts)
    report: dict = {"command": "points", "points": [cnum(z) for z in pts], "degree": conf.n}
    w = None
    if cfg.get("w") is not None:
        w = parse_complex(_json_arg(cfg["w"]))
        verdict = membership_exact(conf, w, cfg["tol"])
        report["verdict"] = verdict
        if cfg.get("numeric"):
            report["numeric"] = membership_numeric(finite_set(pts), w, conf.n)
    else:
        res = hull_point_search(conf, cfg["tol"])
        w = res.w
        report["hull_point"] = None if res.w is None else cnum(res.w)
        report["residual"] = res.residual
        report["method"] = res.method
        report["candidates"] = [{"w": cnum(c), "residual": r} for c, r in res.candidates]
    artifacts = {"svg": configuration_svg(pts, w)} if cfg.get("svg") else {}
    return report, artifacts


def cmd_circle_points(cfg: dict) -> tuple[dict, dict]:
    angles = _json_arg(cfg.get("angles"))
    if not isinstance(angles, list) or len(angles) < 3:
        raise UsageError("--angles takes a JSON list of at least three angles")
    phi = sorted(float(a) % (2 * math.pi) for a in angles)
    n = len(phi) - 1
    w = hull_point_unit_circle(phi)
    report: dict = {"command": "circle-points", "angles": phi, "degree": n,
                    "hull_point": None if w is None else cnum(w)}
    ends = phi + [phi[0] + 2 * math.pi]
    circles = []
    for a, b in zip(ends, ends[1:]):
        try:
            c = circle_for_gap(a, b, n)
            circles.append((c.center, c.radius))
        except ValueError:
            pass
    report["circles"] = [{"center": cnum(c), "radius": r} for c, r in circles]
    if w is not None:
        verdict = membership_exact(PointConfiguration(np.exp(1j * np.array(phi))), w)
        report["verdict"] = verdict
        if not verdict.is_member:
            raise VerificationFailure("constructed point fails the exact oracle", report)
    artifacts = {"svg": configuration_svg(np.exp(1j * np.array(phi)), w, circles)} if cfg.get("svg") else {}
    return report, artifacts


def cmd_grid(cfg: dict) -> tuple[dict, dict]:
    K = _planar_set(cfg)
    _positive(cfg, "degree", "L", "eps_member", "eps_sep")
    res = int(cfg["res"])
    if res < 2:
        raise UsageError("--res must be at least 2")
    bbox = _bbox(cfg.get("bbox"), K.points)
    grid = grid_hull(K, int(cfg["degree"]), bbox, res, eps_member=cfg["eps_member"], eps_sep=cfg["eps_sep"],
                     L=int(cfg["L"]))
    counts = {s: int((grid.status == s).sum()) for s in ("member", "borderline", "non-member")}
    member = [cnum(complex(x, y)) for x, y, _, s in grid.cells() if s == "member"]
    report = {"command": "grid", "set": K.generator, "degree": grid.degree, "bbox": list(bbox),
              "resolution": res, "L": int(cfg["L"]), "counts": counts, "member_cells": member}
    artifacts = {"csv": grid.to_csv()}
    if cfg.get("svg"):
        artifacts["svg"] = grid_svg(grid, K.points)
    return report, artifacts


def cmd_arc(cfg: dict) -> tuple[dict, dict]:
    n, alpha = int(cfg["n"]), float(cfg["alpha"])
    if n < 2 or not 0 < alpha < math.pi:
        raise UsageError("need n >= 2 and 0 < alpha < pi")
    report: dict = {"command": "arc", "n": n, "alpha": alpha, "threshold": (n - 1) * math.pi / n}
    W = arc_nonconvexity_witness(n, alpha)
    if W is None:
        report["witness"] = None
    else:
        numeric = membership_numeric(finite_set(W.config.points), W.w, n)
        report["witness"] = {"points": W.config, "angles": W.angles, "w": cnum(W.w), "small_gap": W.small_gap,
                             "gaps": W.gaps, "relative_residual": W.residual, "numeric": numeric,
                             "metadata": W.metadata}
        if numeric.value < 1 - 5e-3:
            raise VerificationFailure("witness fails the numeric oracle", report)
    if cfg.get("r") is not None:
        if not alpha < math.pi / 4:
            raise UsageError("quadratic separation needs alpha < pi/4")
        q = quadratic_arc_separation(alpha, float(cfg["r"]), float(cfg.get("phi") or 0.0))
        report["separation"] = {"r": float(cfg["r"]), "phi": float(cfg.get("phi") or 0.0), "a": q.a,
                                "ratio": q.ratio, "polynomial": q.polynomial, "trials": [list(t) for t in q.trials]}
    artifacts = {}
    if cfg.get("svg") and W is not None:
        arc = np.exp(1j * np.linspace(-alpha, alpha, 400))
        artifacts["svg"] = curve_svg([arc], list(W.config.points) + [W.w])
    return report, artifacts


def cmd_knot(cfg: dict) -> tuple[dict, dict]:
    try:
        spec = KnotSpec(int(cfg["p"]), int(cfg["q"]))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    degree, N, L = int(cfg["degree"]), int(cfg["N"]), int(cfg["L"])
    sol = knot_degree_experiment(spec, degree, N, L)
    report: dict = {"p": spec.p, "q": spec.q, "degree": degree, "value": sol.value, "N": N, "L": L,
                    "certificate": None}
    if sol.value <= 1 - cfg["eps_sep"]:
        P = sol.polynomial
        P = P.scale(1 / P(0j, 0j))
        ok, info = verify_certificate(P, (0j, 0j), knot_samples(spec, N))
        report["certificate"] = {"polynomial": poly_to_json(P), **info}
        if not ok:
            raise VerificationFailure("knot certificate fails re-verification", report)
    return report, {}


def cmd_separate2(cfg: dict) -> tuple[dict, dict]:
    if cfg.get("point") is None:
        raise UsageError("give --point [[re, im], [re, im]]")
    point = parse_point2(cfg["point"])
    K = sample(cfg["set"])
    if K.dimension != 2:
        raise UsageError("inconsistent dimensions: separate2 needs a set in C^2")
    report: dict = {"command": "separate2", "point": [cnum(point[0]), cnum(point[1])], "set": K.generator}
    try:
        s = totally_real_separator(point, K)
    except SeparationError as exc:
        report["attempts"] = exc.diagnostics["attempts"]
        raise VerificationFailure(str(exc), report) from None
    report.update({"method": s.method, "polynomial": s.polynomial, "abs_at_point": s.abs_at_point,
                   "sup_samples": s.sup_samples, "sup_resample": s.sup_resample, "attempts": s.attempts})
    return report, {}


def cmd_family(cfg: dict) -> tuple[dict, dict]:
    N = int(cfg["N"])
    if cfg.get("F") is not None:
        terms = _json_arg(cfg["F"])
        try:
            F = poly_from_json(terms)
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"malformed polynomial: {exc}") from None
        if F.dim != 2:
            raise UsageError("inconsistent dimensions: F must be a polynomial in (z, w)")
        base = parse_point2(cfg["base"]) if cfg.get("base") is not None else (0j, 0j)
        try:
            family = SurfaceFamily(F, base, "custom")
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    else:
        if int(cfg["p"]) not in EXAMPLE_FAMILIES:
            raise UsageError(f"built-in families exist for p in {sorted(EXAMPLE_FAMILIES)}")
        family = EXAMPLE_FAMILIES[int(cfg["p"])]
    p = int(cfg["p"])
    K = knot_p1(p, N)
    clearance = geometric_hull_witness(family, K)
    report = {"command": "family", "p": p, "N": N, "family": family.name, "F": family.F,
              "base_point": [cnum(family.base_point[0]), cnum(family.base_point[1])],
              "F_at_base": cnum(family.F(*family.base_point)), "clearance": clearance,
              "delta": CLEARANCE_DELTA, "witness": clearance > CLEARANCE_DELTA}
    return report, {}


def cmd_cheb(cfg: dict) -> tuple[dict, dict]:
    n = int(cfg["degree"])
    if n < 1:
        raise UsageError("degree must be >= 1")
    K = _planar_set(cfg) if (cfg.get("points") or cfg.get("points_file") or cfg.get("set")) else \
        finite_set(np.exp(2j * np.pi * np.arange(n + 1) / (n + 1)))
    try:
        rep = chebyshev_symmetry_check(K, n)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    report = {"command": "cheb", "set": K.generator, "degree": n, "value": rep.value, "passes": rep.passes,
              "monomial_distance": rep.monomial_distance, "spread_defect": rep.spread_defect,
              "coefficients": rep.coefficients}
    return report, {}


def cmd_pathological(cfg: dict) -> tuple[dict, dict]:
    spec = PathologicalCurveSpec(int(cfg["n_max"]))
    rings = [int(cfg["n"])] if cfg.get("n") is not None else list(range(1, spec.n_max + 1))
    out = []
    for n in rings:
        v = pathological_membership(spec, n)
        out.append({"ring": n, "degree": 2 * n + 1, "center": cnum(spec.center(n)), "radius": spec.radius(n),
                    "verdict": v})
    report = {"command": "pathological", "n_max": spec.n_max, "rings": out,
              "all_member": all(r["verdict"].is_member for r in out)}
    artifacts = {}
    if cfg.get("svg"):
        parts = []
        for n in range(1, spec.n_max + 1):
            parts += spec.ring_arcs(n, 100)
            if n < spec.n_max:
                parts += spec.connectors(n, 2)
        marks = np.concatenate([spec.spread_points(n) for n in rings])
        artifacts["svg"] = curve_svg(parts, marks)
    if not report["all_member"]:
        raise VerificationFailure("a ring's spread points miss their centre", report)
    return report, artifacts


def cmd_jacobian(cfg: dict) -> tuple[dict, dict]:
    if _points_from(cfg) is not None:
        configs = [_points_from(cfg)]
    else:
        n, count = int(cfg["n"]), int(cfg["count"])
        if n < 2 or count < 1:
            raise UsageError("need n >= 2 and count >= 1")
        rng = np.random.default_rng(int(cfg["seed"]))
        configs = [list(rng.normal(size=n) + 1j * rng.normal(size=n)) for _ in range(count)]
    rows = []
    for z in configs:
        try:
            det = jacobian_constant_check(z)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        fact = math.factorial(len(z))
        rows.append({"points": [cnum(v) for v in z], "determinant": cnum(det), "expected": fact,
                     "relative_error": abs(det - fact) / fact})
    report = {"command": "jacobian", "seed": int(cfg["seed"]), "results": rows,
              "max_relative_error": max(r["relative_error"] for r in rows)}
    return report, {}


# ----------------------------------------------------------------------------
# parser


COMMANDS: dict[str, tuple[Callable, dict, str]] = {
    "points": (cmd_points, {"tol": DEFAULT_TOL, "numeric": False}, "exact oracle or hull-point search"),
    "circle-points": (cmd_circle_points, {}, "hull point of points on the unit circle"),
    "grid": (cmd_grid, {"degree": 1, "res": 101, "L": DEFAULT_L, "eps_member": EPS_MEMBER,
                        "eps_sep": EPS_SEP}, "hull picture on a grid"),
    "arc": (cmd_arc, {"n": 2, "alpha": 0.9 * math.pi}, "arc witnesses and quadratic separation"),
    "knot": (cmd_knot, {"p": 2, "q": 1, "degree": 2, "N": 2000, "L": DEFAULT_L, "eps_sep": EPS_SEP},
             "torus-knot separation degree"),
    "separate2": (cmd_separate2, {"set": "vcircle N=2000"}, "degree-two separator from a totally real set"),
    "family": (cmd_family, {"p": 2, "N": 2000}, "clearance of a level-set family"),
    "cheb": (cmd_cheb, {"degree": 2}, "monic minimax on a symmetric circle set"),
    "pathological": (cmd_pathological, {"n_max": 6}, "ring curve membership"),
    "jacobian": (cmd_jacobian, {"n": 3, "count": 10}, "configuration Jacobian determinant"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hullbound", description="Degree-bounded polynomial hulls in C and C^2.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def common(p):
        p.add_argument("--config", help="JSON file with default flag values")
        p.add_argument("--out", help="write the JSON report here instead of stdout")
        p.add_argument("--seed", type=int, default=None, help="seed for randomized inputs (default 0)")
        p.add_argument("-v", "--verbose", action="store_true")

    def pts(p):
        p.add_argument("--points", help='JSON list of [re, im] pairs')
        p.add_argument("--points-file", help="file holding such a list (or {\"points\": [...]})")

    p = sub.add_parser("points", help=COMMANDS["points"][2]); common(p); pts(p)
    p.add_argument("--w", help="query point [re, im]; omit to search for the hull point")
    p.add_argument("--tol", type=float)
    p.add_argument("--numeric", action="store_true", default=None, help="also run the numeric oracle")
    p.add_argument("--svg")

    p = sub.add_parser("circle-points", help=COMMANDS["circle-points"][2]); common(p)
    p.add_argument("--angles", help="JSON list of angles in radians")
    p.add_argument("--svg")

    p = sub.add_parser("grid", help=COMMANDS["grid"][2]); common(p); pts(p)
    p.add_argument("--set", help='generator descriptor, e.g. "arc alpha=2.5 N=400"')
    p.add_argument("--degree", type=int)
    p.add_argument("--bbox", type=float, nargs="+", help="xmin xmax [ymin ymax]")
    p.add_argument("--res", type=int)
    p.add_argument("--L", type=int)
    p.add_argument("--eps-member", type=float)
    p.add_argument("--eps-sep", type=float)
    p.add_argument("--csv")
    p.add_argument("--svg")

    p = sub.add_parser("arc", help=COMMANDS["arc"][2]); common(p)
    p.add_argument("--n", type=int)
    p.add_argument("--alpha", type=float)
    p.add_argument("--r", type=float, help="modulus of a sector point to separate (needs alpha < pi/4)")
    p.add_argument("--phi", type=float)
    p.add_argument("--svg")

    p = sub.add_parser("knot", help=COMMANDS["knot"][2]); common(p)
    for flag in ("--p", "--q", "--degree", "--N", "--L"):
        p.add_argument(flag, type=int)
    p.add_argument("--eps-sep", type=float)

    p = sub.add_parser("separate2", help=COMMANDS["separate2"][2]); common(p)
    p.add_argument("--point", help="[[re, im], [re, im]]")
    p.add_argument("--set", help='descriptor of a set on w = conj(z), e.g. "vcircle N=2000"')

    p = sub.add_parser("family", help=COMMANDS["family"][2]); common(p)
    p.add_argument("--p", type=int, help="knot K_p = {(e^{ip t}, e^{-it})}")
    p.add_argument("--N", type=int)
    p.add_argument("--F", help="polynomial JSON {\"dim\": 2, \"degree\": d, \"coeffs\": [...]}")
    p.add_argument("--base", help="base point [[re, im], [re, im]]")

    p = sub.add_parser("cheb", help=COMMANDS["cheb"][2]); common(p); pts(p)
    p.add_argument("--set")
    p.add_argument("--degree", type=int)

    p = sub.add_parser("pathological", help=COMMANDS["pathological"][2]); common(p)
    p.add_argument("--n-max", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--svg")

    p = sub.add_parser("jacobian", help=COMMANDS["jacobian"][2]); common(p); pts(p)
    p.add_argument("--n", type=int)
    p.add_argument("--count", type=int)
    return parser


def resolve_config(args: argparse.Namespace) -> dict:
    """Defaults, then the ``--config`` file, then explicit flags."""
    _, defaults, _ = COMMANDS[args.command]
    cfg: dict = {"seed": 0, **defaults}
    if args.config:
        try:
            loaded = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(loaded, dict):
            raise UsageError("config must be a JSON object")
        cfg.update({k.replace("-", "_"): v for k, v in loaded.items()})
    cfg.update({k: v for k, v in vars(args).items() if v is not None and k not in ("command", "config")})
    return cfg


def _write(path: str | None, text: str) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not args.command:
            raise UsageError("a subcommand is required")
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        cfg = resolve_config(args)
        fn = COMMANDS[args.command][0]
        try:
            report, artifacts = fn(cfg)
            code = EXIT_OK
        except VerificationFailure as exc:
            log.error("verification failed: %s", exc)
            report, artifacts, code = {**exc.report, "error": str(exc)}, {}, EXIT_VERIFY
        _write(cfg.get("out"), dumps(report))
        if cfg.get("csv") and "csv" in artifacts:
            Path(cfg["csv"]).write_text(artifacts["csv"])
        if cfg.get("svg") and "svg" in artifacts:
            Path(cfg["svg"]).write_text(artifacts["svg"])
        return code
    except UsageError as exc:
        sys.stderr.write(f"hullbound: error: {exc}\n")
        return EXIT_USAGE
    except (ValueError, OSError) as exc:
        sys.stderr.write(f"hullbound: error: {exc}\n")
        return EXIT_USAGE


def main(argv: list[str] | None = None) -> None:
    sys.exit(run(argv))
