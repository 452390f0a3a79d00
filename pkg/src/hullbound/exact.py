"""Exact membership in the n-polynomial hull of n+1 points.

A point ``w`` outside ``K = {z_0, ..., z_n}`` lies in the degree-n hull of
``K`` exactly when the numbers ``t_i = (z_i - w) * prod_{j != i} (z_i - z_j)``
all sit on one ray from the origin. The products are formed in
log-modulus/argument form so that large configurations do not overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np
from scipy.optimize import minimize

from .verdict import BORDERLINE, MEMBER, NON_MEMBER, MembershipVerdict

DEFAULT_TOL = 1e-9
BORDERLINE_FACTOR = 100.0


class CoincidentPointError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class PointConfiguration:
    points: tuple[complex, ...]

    def __init__(self, points: Sequence[complex]):
        pts = tuple(complex(p) for p in points)
        if len(pts) < 2:
            raise ValueError("a configuration needs at least two points")
        arr = np.array(pts)
        if not np.all(np.isfinite(arr)):
            raise ValueError("configuration points must be finite")
        diff = np.abs(arr[:, None] - arr[None, :])
        np.fill_diagonal(diff, np.inf)
        if diff.min() <= 0:
            raise ValueError("configuration points must be pairwise distinct")
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return len(self.points) - 1

    @property
    def array(self) -> np.ndarray:
        return np.array(self.points, dtype=complex)

    @property
    def scale(self) -> float:
        z = self.array
        return float(max(np.abs(z).max(), np.abs(z[:, None] - z[None, :]).max()))

    def mapped(self, a: complex, b: complex = 0) -> "PointConfiguration":
        return PointConfiguration([a * z + b for z in self.points])


@dataclass
class AlignmentReport:
    values: np.ndarray
    residual: float
    log_scale: float
    # 1/t_i normalised the same way; their alignment gives the exact minimax value
    inverse_values: np.ndarray = field(repr=False, default=None)

    @property
    def total(self) -> float:
        return float(np.abs(self.values).sum())

    @property
    def relative_residual(self) -> float:
        return self.residual / self.total

    @property
    def minimax_value(self) -> float:
        """min{ max_K |P| : P(w) = 1, deg P <= n }, i.e. 1 / sum_i |l_i(w)|."""
        s = self.inverse_values
        return float(abs(s.sum()) / np.abs(s).sum())


def _log_products(z: np.ndarray, w: complex) -> tuple[np.ndarray, np.ndarray]:
    dz = z[:, None] - z[None, :]
    np.fill_diagonal(dz, 1.0)
    logmag = np.log(np.abs(z - w)) + np.log(np.abs(dz)).sum(axis=1)
    arg = np.angle(z - w) + np.angle(dz).sum(axis=1)
    return logmag, arg


def alignment_values(cfg: PointConfiguration, w: complex) -> AlignmentReport:
    z = cfg.array
    w = complex(w)
    if np.abs(z - w).min() <= 1e-14 * max(cfg.scale, abs(w)):
        raise CoincidentPointError("coincident query point")
    logmag, arg = _log_products(z, w)
    top = logmag.max()
    t = np.exp(logmag - top) * np.exp(1j * arg)
    low = logmag.min()
    s = np.exp(low - logmag) * np.exp(-1j * arg)
    residual = float(max(np.abs(t).sum() - abs(t.sum()), 0.0))
    return AlignmentReport(t, residual, float(top), s)


def classify(relative_residual: float, tol: float = DEFAULT_TOL) -> str:
    if relative_residual <= tol:
        return MEMBER
    if relative_residual <= BORDERLINE_FACTOR * tol:
        return BORDERLINE
    return NON_MEMBER


def membership_exact(cfg: PointConfiguration, w: complex, tol: float = DEFAULT_TOL) -> MembershipVerdict:
    """Decide whether ``w`` lies in the degree-``cfg.n`` hull of ``cfg``.

    Query points that coincide with a configuration point raise
    :class:`CoincidentPointError`; they trivially belong to the hull but carry
    no alignment data.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    rep = alignment_values(cfg, w)
    return MembershipVerdict(
        status=classify(rep.relative_residual, tol),
        w=complex(w),
        degree_bound=cfg.n,
        residual=rep.residual,
        value=rep.minimax_value,
        diagnostics={"relative_residual": rep.relative_residual, "log_scale": rep.log_scale},
    )


class ConvexPosition(NamedTuple):
    convex: bool
    order: list[int]  # ccw indices of hull vertices, starting at the lowest index present


def _cross(o: complex, a: complex, b: complex) -> float:
    return (a.real - o.real) * (b.imag - o.imag) - (a.imag - o.imag) * (b.real - o.real)


def convex_hull_indices(points: Sequence[complex], eps: float = 1e-12) -> list[int]:
    """Strict convex hull (collinear boundary points dropped), ccw, Andrew's monotone chain."""
    pts = [complex(p) for p in points]
    scale = max(1e-300, max(abs(p - q) for p in pts for q in pts)) if len(pts) > 1 else 1.0
    thr = eps * scale * scale
    idx = sorted(range(len(pts)), key=lambda i: (pts[i].real, pts[i].imag))
    if len(idx) < 3:
        return idx

    def chain(seq):
        out: list[int] = []
        for i in seq:
            while len(out) >= 2 and _cross(pts[out[-2]], pts[out[-1]], pts[i]) <= thr:
                out.pop()
            out.append(i)
        return out

    lower, upper = chain(idx), chain(reversed(idx))
    return lower[:-1] + upper[:-1]


def convex_position(cfg: PointConfiguration) -> ConvexPosition:
    hull = convex_hull_indices(cfg.points)
    start = hull.index(min(hull))
    order = hull[start:] + hull[:start]
    return ConvexPosition(len(hull) == len(cfg.points), order)


def _inscribed_circle(a: complex, b: complex, beta: float) -> tuple[complex, float]:
    """Circle through a, b on which the chord subtends angle ``beta`` from the left side."""
    chord = b - a
    c = abs(chord)
    normal = 1j * chord / c
    center = (a + b) / 2 + normal * (c / 2) / math.tan(beta)
    return center, c / (2 * math.sin(beta))


def _vertex_angle(p: complex, a: complex, b: complex) -> float:
    return abs(np.angle((a - p) / (b - p)))


def _circle_candidate(q: list[complex]) -> complex | None:
    """Second intersection of the loci over edges (q0, q1) and (q1, q2)."""
    m = len(q)
    centers = []
    for i in (0, 1):
        a, b = q[i], q[(i + 1) % m]
        alpha = sum(_vertex_angle(q[j], a, b) for j in range(m) if j not in (i, (i + 1) % m))
        beta = math.pi - alpha
        if beta <= 0:
            return None
        centers.append(_inscribed_circle(a, b, beta)[0])
    c0, c1 = centers
    axis = c1 - c0
    if abs(axis) == 0:
        return None
    u = axis / abs(axis)
    return c0 + u * u * (q[1] - c0).conjugate()


@dataclass
class HullPointResult:
    w: complex | None
    residual: float
    method: str
    candidates: list[tuple[complex, float]] = field(default_factory=list)


def _relative_residual(cfg: PointConfiguration, w: complex) -> float:
    try:
        return alignment_values(cfg, w).relative_residual
    except CoincidentPointError:
        return 1.0


def _residual_function(cfg: PointConfiguration):
    """``w -> relative residual`` with the w-independent products formed once.

    ``t_i = (z_i - w) prod_{j != i} (z_i - z_j)``; the products are kept
    normalised by their largest modulus, which the relative residual ignores.
    """
    z = cfg.array
    dz = z[:, None] - z[None, :]
    np.fill_diagonal(dz, 1.0)
    logmag = np.log(np.abs(dz)).sum(axis=1)
    D = np.exp(logmag - logmag.max()) * np.exp(1j * np.angle(dz).sum(axis=1))
    eps = 1e-14 * cfg.scale

    def f(v) -> float:
        d = z - complex(v[0], v[1])
        if np.abs(d).min() <= eps:
            return 1.0
        t = d * D
        total = np.abs(t).sum()
        return float(max(total - abs(t.sum()), 0.0) / total)

    return f


def hull_point_search(cfg: PointConfiguration, tol: float = DEFAULT_TOL, max_iter: int = 200) -> HullPointResult:
    """Find the extra point of the degree-n hull of n+1 points, if there is one.

    Convex-position configurations are handled by intersecting two
    inscribed-angle circles; anything else (or a failed check) falls back to
    derivative-free descent on the relative residual. All sub-tolerance minima
    the descent meets are reported in ``candidates``.
    """
    if cfg.n < 2:
        raise ValueError("hull point search needs at least three points")
    pos = convex_position(cfg)
    best_res = math.inf
    if pos.convex:
        q = [cfg.points[i] for i in pos.order]
        w = _circle_candidate(q)
        if w is not None and np.isfinite(w):
            r = _relative_residual(cfg, w)
            best_res = r
            if r <= tol:
                return HullPointResult(w, r, "circles", [(w, r)])

    z = cfg.array
    centroid = z.mean()
    spread = np.abs(z - centroid).max()
    starts = [centroid] + [centroid + 0.3 * spread * np.exp(1j * math.pi * k / 4) for k in range(8)]
    scale = cfg.scale
    found: list[tuple[complex, float]] = []
    residual = _residual_function(cfg)
    for s in starts:
        res = minimize(
            residual,
            np.array([s.real, s.imag]),
            method="Nelder-Mead",
            options={"maxiter": max_iter, "xatol": 1e-13 * scale, "fatol": 1e-16,
                     "initial_simplex": np.array([[s.real, s.imag], [s.real + 0.05 * spread, s.imag],
                                                  [s.real, s.imag + 0.05 * spread]])},
        )
        w = complex(res.x[0], res.x[1])
        r = float(res.fun)
        if np.abs(z - w).min() <= 1e-6 * scale:
            # residual can vanish in the limit at a vertex (e.g. a right angle)
            continue
        best_res = min(best_res, r)
        if r <= tol:
            if all(abs(w - v) > 1e-6 * scale for v, _ in found):
                found.append((w, r))
    if not found:
        return HullPointResult(None, best_res, "descent")
    found.sort(key=lambda c: (c[1], c[0].real, c[0].imag))
    return HullPointResult(found[0][0], found[0][1], "descent", found)
