"""Angle criteria and inscribed-angle circle constructions.

For ``n+1`` points in convex position, ``w`` is the extra point of the
degree-n hull exactly when, for every edge ``(z_i, z_{i+1})``, the angle at
``w`` plus the angles subtended by that edge at the other vertices equals pi.
On the unit circle the angles at the vertices are fixed by the inscribed-angle
theorem, so each condition pins ``w`` to one circle through the edge endpoints.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .exact import PointConfiguration, _circle_candidate, convex_position

INTERIOR_SLACK = 1e-12
CIRCLE_TOL = 1e-9


class GeometryError(ValueError):
    pass


@dataclass(frozen=True)
class CircleSpec:
    center: complex
    radius: float

    def __post_init__(self):
        if not (math.isfinite(self.radius) and self.radius > 0):
            raise ValueError("circle radius must be finite and positive")
        object.__setattr__(self, "center", complex(self.center))

    def distance_defect(self, z: complex) -> float:
        """``| |z - center| - radius |`` relative to the radius."""
        return abs(abs(complex(z) - self.center) - self.radius) / self.radius

    def to_json(self) -> dict:
        return {"center": [self.center.real, self.center.imag], "radius": self.radius}


def subtended_angle(p: complex, a: complex, b: complex) -> float:
    """Angle at ``p`` in the triangle ``a p b``, in ``[0, pi]``."""
    return abs(float(np.angle((a - p) / (b - p))))


def _side(a: complex, b: complex, p: complex) -> float:
    """Twice the signed area of (a, b, p): positive when p is left of a -> b."""
    d, e = b - a, p - a
    return d.real * e.imag - d.imag * e.real


@dataclass
class AngleTable:
    order: list[int]        # ccw vertex order the table is indexed by
    alpha: np.ndarray       # alpha[i, j]: angle at z_j over edge (z_i, z_i+1); NaN for j in {i, i+1}
    beta: np.ndarray        # beta[i]: angle at w over edge (z_i, z_i+1)
    sums: np.ndarray        # beta[i] + sum_j alpha[i, j]

    def defect(self) -> float:
        return float(np.abs(self.sums - math.pi).max())


def _inside_convex(q: Sequence[complex], w: complex, slack: float) -> bool:
    m = len(q)
    scale = max(abs(a - b) for a in q for b in q)
    return all(_side(q[i], q[(i + 1) % m], w) > slack * scale * scale for i in range(m))


def angle_table(cfg: PointConfiguration, w: complex) -> AngleTable:
    """Edge-by-edge angle sums for ``w`` inside a convex polygon.

    ``w`` is in the degree-n hull exactly when every sum equals pi.
    """
    pos = convex_position(cfg)
    if not pos.convex:
        raise GeometryError("configuration is not in convex position")
    w = complex(w)
    q = [cfg.points[i] for i in pos.order]
    m = len(q)
    if not _inside_convex(q, w, INTERIOR_SLACK):
        raise GeometryError("query not interior")
    alpha = np.full((m, m), np.nan)
    beta = np.empty(m)
    for i in range(m):
        a, b = q[i], q[(i + 1) % m]
        beta[i] = subtended_angle(w, a, b)
        for j in range(m):
            if j not in (i, (i + 1) % m):
                alpha[i, j] = subtended_angle(q[j], a, b)
    sums = beta + np.nansum(alpha, axis=1)
    return AngleTable(list(pos.order), alpha, beta, sums)


class SegmentTerms(NamedTuple):
    value: float
    beta: float
    others: list[int]       # indices k contributing alpha_k
    signs: list[int]        # eps_k, aligned with ``others``
    alphas: list[float]


def segment_terms(cfg: PointConfiguration, i: int, j: int, w: complex) -> SegmentTerms:
    """``beta + sum_k eps_k alpha_k`` for the segment ``z_i z_j`` with its parts.

    ``eps_k`` is +1 when ``z_k`` lies on the same side of the line as ``w``.
    A ``w`` on the line itself is taken to lie on the right of ``z_i -> z_j``.
    """
    z = cfg.points
    if i == j:
        raise GeometryError("segment endpoints must differ")
    a, b = z[i], z[j]
    w = complex(w)
    scale = cfg.scale
    thr = 1e-12 * scale * scale
    sw = _side(a, b, w)
    w_side = -1.0 if abs(sw) <= thr else math.copysign(1.0, sw)
    others, signs, alphas = [], [], []
    for k, p in enumerate(z):
        if k in (i, j):
            continue
        s = _side(a, b, p)
        if abs(s) <= thr:
            raise GeometryError("collinear witness")
        others.append(k)
        signs.append(1 if math.copysign(1.0, s) == w_side else -1)
        alphas.append(subtended_angle(p, a, b))
    beta = subtended_angle(w, a, b)
    value = beta + sum(e * al for e, al in zip(signs, alphas))
    return SegmentTerms(value, beta, others, signs, alphas)


def segment_condition(cfg: PointConfiguration, i: int, j: int, w: complex) -> float:
    """The segment criterion value; hull points give pi for every segment."""
    return segment_terms(cfg, i, j, w).value


def circle_for_gap(phi_j: float, phi_j1: float, n: int) -> CircleSpec:
    """Locus of ``w`` in the disk that sees the arc ``[phi_j, phi_j1]`` at angle ``pi - (n-1) gap / 2``."""
    if n < 2:
        raise GeometryError("n must be at least 2")
    gap = phi_j1 - phi_j
    if not 0 < gap < 2 * math.pi / (n - 1):
        raise GeometryError("no interior locus")
    s = math.sin((n - 1) * gap / 2)
    mid = (phi_j + phi_j1) / 2
    circle = CircleSpec(math.sin(n * gap / 2) / s * complex(math.cos(mid), math.sin(mid)), math.sin(gap / 2) / s)
    for phi in (phi_j, phi_j1):
        if circle.distance_defect(complex(math.cos(phi), math.sin(phi))) > 1e-12:
            raise GeometryError("gap circle misses an endpoint")  # pragma: no cover - guards the formula
    return circle


def _gaps(angles: Sequence[float]) -> np.ndarray:
    phi = np.asarray(angles, dtype=float)
    return np.diff(np.append(phi, phi[0] + 2 * math.pi))


def _in_triangle(w: complex, a: complex, b: complex, c: complex, slack: float) -> bool:
    # closed triangle up to ``slack`` in barycentric coordinates: equally
    # spaced points put the hull point 0 exactly on a vertex
    area = _side(a, b, c)
    if area == 0:
        return False
    l0 = _side(b, c, w) / area
    l1 = _side(c, a, w) / area
    l2 = _side(a, b, w) / area
    return min(l0, l1, l2) >= -slack


def hull_point_unit_circle(angles: Sequence[float], tol: float = CIRCLE_TOL) -> complex | None:
    """Extra degree-n hull point of ``n+1`` points ``exp(i phi_j)``, if any.

    Uses the early-outs on large gaps and small gap pairs, then intersects the
    circles of the smallest gap and the gap after it and checks the candidate
    against the triangle of the smallest gap and every other gap circle.
    """
    phi = [float(a) for a in angles]
    n = len(phi) - 1
    if n < 2:
        raise GeometryError("need at least three angles")
    if any(not 0 <= a < 2 * math.pi for a in phi) or any(b <= a for a, b in zip(phi, phi[1:])):
        raise GeometryError("angles must be strictly increasing in [0, 2pi)")
    gaps = _gaps(phi)
    limit = 2 * math.pi / n
    if np.any(gaps >= limit):
        return None
    m = n + 1
    for i in range(m):
        for j in range(i + 1, m):
            if gaps[i] + gaps[j] <= limit:
                return None
    j = int(np.argmin(gaps))           # ties go to the lowest index
    ends = phi + [phi[0] + 2 * math.pi]
    circles = [circle_for_gap(ends[k], ends[k + 1], n) for k in range(m)]
    c0, c1 = circles[j], circles[(j + 1) % m]
    shared = complex(math.cos(ends[j + 1]), math.sin(ends[j + 1]))
    axis = c1.center - c0.center
    if abs(axis) == 0:
        return None
    u = axis / abs(axis)
    w = c0.center + u * u * (shared - c0.center).conjugate()
    za = complex(math.cos(ends[j]), math.sin(ends[j]))
    if not _in_triangle(w, za, 0j, shared, INTERIOR_SLACK):
        return None
    if any(c.distance_defect(w) > tol for c in circles):
        return None
    return w


@dataclass(frozen=True)
class Orthocenter:
    point: complex
    acute: bool


def orthocenter(a: complex, b: complex, c: complex) -> Orthocenter:
    """Altitude intersection and whether the triangle is acute.

    For three points the extra degree-2 hull point exists exactly for acute
    triangles, and is the orthocenter.
    """
    a, b, c = complex(a), complex(b), complex(c)
    area2 = _side(a, b, c)
    scale = max(abs(a - b), abs(b - c), abs(c - a))
    if abs(area2) <= 1e-14 * scale * scale:
        raise GeometryError("collinear triangle")
    # circumcenter, then H = a + b + c - 2 O
    d = 2 * area2
    sa, sb, sc = abs(a) ** 2, abs(b) ** 2, abs(c) ** 2
    ox = (sa * (b.imag - c.imag) + sb * (c.imag - a.imag) + sc * (a.imag - b.imag)) / d
    oy = (sa * (c.real - b.real) + sb * (a.real - c.real) + sc * (b.real - a.real)) / d
    h = a + b + c - 2 * complex(ox, oy)
    e = sorted([abs(b - c) ** 2, abs(c - a) ** 2, abs(a - b) ** 2])
    return Orthocenter(h, e[2] < e[0] + e[1])


def hull_point_convex(cfg: PointConfiguration, tol: float = CIRCLE_TOL) -> complex | None:
    """Two-circle construction for a convex-position configuration (no verification)."""
    pos = convex_position(cfg)
    if not pos.convex:
        return None
    return _circle_candidate([cfg.points[i] for i in pos.order])
