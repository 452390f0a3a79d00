"""Unit-circle studies: arcs, the ring curve, Chebyshev polynomials, Jacobians."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .cheb import MonicConstraint, minimax
from .exact import PointConfiguration, membership_exact
from .geometry import circle_for_gap, hull_point_unit_circle
from .poly import Poly1, monomial_basis, sup_norm
from .sets import SampledSet, arc_set, format_descriptor
from .verdict import MembershipVerdict

WITNESS_TOL = 1e-9


@dataclass(frozen=True)
class ArcSpec:
    alpha: float
    N: int = 2000

    def __post_init__(self):
        if not 0 < self.alpha < math.pi:
            raise ValueError("arc half-angle alpha must lie in (0, pi)")
        if self.N < 2:
            raise ValueError("an arc needs at least two samples")

    def sampled_set(self) -> SampledSet:
        return arc_set(self.alpha, self.N)


# ----------------------------------------------------------------------------
# arc witnesses


def _sweep(w: complex, a: float, b: float) -> float:
    """Counter-clockwise angle at ``w`` from ``exp(ia)`` to ``exp(ib)``, in [0, 2pi)."""
    return float(np.angle((np.exp(1j * b) - w) / (np.exp(1j * a) - w))) % (2 * math.pi)


def _chain(w: complex, n: int, phi: list[float], count: int) -> list[float] | None:
    """Extend ``phi`` by ``count`` gaps, each seen from ``w`` at ``pi - (n-1) gap / 2``.

    The angle at ``w`` grows and the target shrinks with the gap, so each gap
    is the unique root of a monotone function.
    """
    phi = list(phi)
    for _ in range(count):
        a = phi[-1]
        hi = min(2 * math.pi / (n - 1), 2 * math.pi - a) * (1 - 1e-15)

        def f(d):
            return _sweep(w, a, a + d) - (math.pi - (n - 1) * d / 2)

        # a chord much shorter than the distance from w subtends a tiny angle
        lo = 1e-9 * min(1.0, abs(np.exp(1j * a) - w))
        if hi <= lo or f(hi) < 0 or f(lo) >= 0:
            return None
        phi.append(a + brentq(f, lo, hi, xtol=1e-15, rtol=1e-15))
    return phi


@dataclass
class ArcWitness:
    config: PointConfiguration
    w: complex
    angles: list[float]          # sorted in (-pi, pi], all within [-alpha, alpha]
    small_gap: float
    gaps: list[float]            # the n+1 cyclic gaps, starting after angles[0]
    residual: float
    metadata: dict = field(default_factory=dict)


def arc_nonconvexity_witness(n: int, alpha: float, position: float = 0.5,
                             small_gap: float | None = None) -> ArcWitness | None:
    """``n+1`` points of the arc ``|arg z| <= alpha`` plus a point of their degree-n hull.

    One small gap ``g0`` is fixed; ``w`` is placed on that gap's circle at
    fraction ``position`` of its arc inside the disk, and the remaining gaps
    follow from the angle conditions seen from ``w`` (the last one closes
    automatically). Every other gap then lies within ``g0`` of ``2 pi / n``,
    so the exterior gap fits the complement of the arc once
    ``g0 <= 2 alpha - (n-1) 2 pi / n``; this needs ``alpha > (n-1) pi / n``.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if not 0 < alpha < math.pi:
        raise ValueError("alpha must lie in (0, pi)")
    room = 2 * alpha - (n - 1) * 2 * math.pi / n
    if room <= 0:
        return None
    g0 = min(2 * alpha / (10 * n), 0.99 * room) if small_gap is None else float(small_gap)
    if not 0 < g0 < room:
        return None
    circle = circle_for_gap(0.0, g0, n)
    a0 = np.angle(1 - circle.center)
    a1 = np.angle(np.exp(1j * g0) - circle.center)
    span = (a1 - a0 + math.pi) % (2 * math.pi) - math.pi
    w = circle.center + circle.radius * np.exp(1j * (a0 + position * span))
    phi = _chain(complex(w), n, [0.0, g0], n - 1)
    if phi is None or phi[-1] >= 2 * math.pi:
        return None
    gaps = np.diff(np.append(phi, 2 * math.pi))
    # rotate so the largest gap straddles pi, i.e. the points sit inside the arc
    k = int(np.argmax(gaps))
    centre = phi[k] + gaps[k] / 2
    rot = math.pi - centre
    ang = (np.array(phi) + rot + math.pi) % (2 * math.pi) - math.pi
    order = np.argsort(ang)
    ang = ang[order]
    if np.abs(ang).max() > alpha:
        return None
    # the hull point is recomputed from the angles alone by the circle construction
    w_rot = hull_point_unit_circle(list(np.sort(ang % (2 * math.pi))))
    if w_rot is None:
        return None
    cfg = PointConfiguration(np.exp(1j * ang))
    verdict = membership_exact(cfg, w_rot, WITNESS_TOL)
    rel = verdict.diagnostics["relative_residual"]
    if not verdict.is_member:
        return None
    cyc = np.diff(np.append(ang, ang[0] + 2 * math.pi))
    return ArcWitness(cfg, w_rot, [float(a) for a in ang], float(g0), [float(g) for g in cyc], float(rel),
                      {"schedule": "small gap g0 = min(2 alpha/(10 n), 0.99 (2 alpha - (n-1) 2 pi/n)); "
                                   "other gaps from the angle conditions at w",
                       "position": position, "exterior_gap": float(gaps[k]),
                       "w_before_rotation": [float(np.real(w)), float(np.imag(w))]})


# ----------------------------------------------------------------------------
# quadratic separation of sector points from short arcs


@dataclass
class QuadraticSeparation:
    polynomial: Poly1
    a: float
    ratio: float                  # |p(r e^{i phi})| / sup_A |p|
    at_point: float
    sup_arc: float
    trials: list[tuple[float, float]]


class SeparationSearchError(RuntimeError):
    pass


def arc_quadratic(phi: float, a: float) -> Poly1:
    """``z^2 - 2 e^{i phi} z + e^{2 i phi} (a^2 + 1)``."""
    e = complex(math.cos(phi), math.sin(phi))
    return Poly1([e * e * (a * a + 1), -2 * e, 1.0])


def quadratic_arc_separation(alpha: float, r: float, phi: float, N: int = 2000,
                             exponents: range = range(16)) -> QuadraticSeparation:
    """Separate ``r e^{i phi}`` from the arc ``|arg z| <= alpha`` by a quadratic.

    Tries ``a = 2^k`` in order and returns the first ``a`` whose quadratic is
    larger in modulus at the point than anywhere on the arc samples.
    """
    if not 0 < alpha < math.pi / 4:
        raise ValueError("alpha must lie in (0, pi/4)")
    if not 0 < r < 1:
        raise ValueError("r must lie in (0, 1)")
    if abs(phi) > alpha:
        raise ValueError("|phi| must not exceed alpha")
    A = arc_set(alpha, N)
    point = r * complex(math.cos(phi), math.sin(phi))
    trials = []
    for k in exponents:
        a = float(2 ** k)
        p = arc_quadratic(phi, a)
        at = abs(p(point))
        sup = sup_norm(p, A)
        trials.append((a, at / sup))
        if sup < at:
            return QuadraticSeparation(p, a, at / sup, at, sup, trials)
    raise SeparationSearchError(f"no separating a up to {2 ** exponents[-1]}: ratios {trials}")


# ----------------------------------------------------------------------------
# the ring curve


@dataclass(frozen=True)
class PathologicalCurveSpec:
    """Rings of radius ``1/(2 n^2)`` about ``1/n`` with two arcs cut away, joined in a chain.

    Ring ``n`` loses the open arcs of angle ``pi/(n+1)`` centred on the real
    axis at both sides, which keeps its ``2n+2`` spread points at angles
    ``pi/(2n+2) + k pi/(n+1)``. Consecutive rings are joined by straight
    connectors between the cut ends; the origin closes the set.
    """

    n_max: int = 6

    def __post_init__(self):
        if self.n_max < 2:
            raise ValueError("n_max must be at least 2")

    @staticmethod
    def center(n: int) -> float:
        return 1.0 / n

    @staticmethod
    def radius(n: int) -> float:
        return 1.0 / (2 * n * n)

    @staticmethod
    def cut_half_angle(n: int) -> float:
        return math.pi / (2 * (n + 1))

    def spread_angles(self, n: int) -> np.ndarray:
        return math.pi / (2 * n + 2) + math.pi * np.arange(2 * n + 2) / (n + 1)

    def spread_points(self, n: int) -> np.ndarray:
        return self.center(n) + self.radius(n) * np.exp(1j * self.spread_angles(n))

    def ring_arcs(self, n: int, per_arc: int) -> list[np.ndarray]:
        """The two kept arcs, sampled so that the spread points are included."""
        h = self.cut_half_angle(n)
        steps = n * max(1, math.ceil((per_arc - 1) / n))
        upper = np.linspace(h, math.pi - h, steps + 1)
        lower = np.linspace(math.pi + h, 2 * math.pi - h, steps + 1)
        return [self.center(n) + self.radius(n) * np.exp(1j * t) for t in (upper, lower)]

    def connectors(self, n: int, count: int) -> list[np.ndarray]:
        """Segments from ring ``n``'s left cut ends to ring ``n+1``'s right cut ends."""
        h, h1 = self.cut_half_angle(n), self.cut_half_angle(n + 1)
        c, r, c1, r1 = self.center(n), self.radius(n), self.center(n + 1), self.radius(n + 1)
        out = []
        for sgn in (1, -1):
            a = c + r * np.exp(1j * sgn * (math.pi - h))
            b = c1 + r1 * np.exp(1j * sgn * h1)
            out.append(a + (b - a) * np.linspace(0.0, 1.0, count))
        return out

    def sampled_set(self, N: int = 200) -> SampledSet:
        """Samples of rings ``1..n_max`` (about ``N`` each), connectors and the origin."""
        parts = [np.array([0j])]
        for n in range(1, self.n_max + 1):
            parts.extend(self.ring_arcs(n, max(2, N // 2)))
            if n < self.n_max:
                parts.extend(self.connectors(n, max(2, N // 8)))
        pts = np.concatenate(parts)
        length = sum(2 * math.pi * self.radius(n) for n in range(1, self.n_max + 1))
        return SampledSet(1, pts, format_descriptor("pathological", n_max=self.n_max, N=N), len(pts) / length)


def pathological_membership(spec: PathologicalCurveSpec, n: int) -> MembershipVerdict:
    """``1/n`` lies in the degree-(2n+1) hull of ring ``n``'s spread points, hence of the curve."""
    if not 1 <= n <= spec.n_max:
        raise ValueError(f"ring index must lie in 1..{spec.n_max}")
    cfg = PointConfiguration(spec.spread_points(n))
    verdict = membership_exact(cfg, spec.center(n))
    verdict.diagnostics.update({"ring": n, "degree": 2 * n + 1, "points": 2 * n + 2})
    return verdict


# ----------------------------------------------------------------------------
# Chebyshev polynomials of conjugation-symmetric circle sets


@dataclass
class ChebyshevReport:
    degree: int
    value: float
    passes: bool
    monomial_distance: float     # max |c_k| over k < n, i.e. distance from z^n
    spread_defect: float         # how far A is from containing n+1 equally spread points
    coefficients: list[complex]


def _spread_defect(points: np.ndarray, n: int) -> float:
    best = math.inf
    for z in points:
        targets = z * np.exp(2j * math.pi * np.arange(n + 1) / (n + 1))
        gap = max(float(np.abs(points - t).min()) for t in targets)
        best = min(best, gap)
    return best


def chebyshev_symmetry_check(A: SampledSet, n: int, tol: float = 5e-3) -> ChebyshevReport:
    """Monic degree-n minimax on a conjugation-symmetric subset of the circle."""
    if A.dimension != 1:
        raise ValueError("the set must be planar")
    pts = A.points
    if np.abs(np.abs(pts) - 1).max() > 1e-12:
        raise ValueError("the set must lie on the unit circle")
    mirror = np.abs(np.conj(pts)[:, None] - pts[None, :]).min(axis=1)
    if mirror.max() > 1e-12:
        raise ValueError("asymmetric input: the set is not closed under conjugation")
    sol = minimax(A, monomial_basis(1, n), MonicConstraint())
    lower = np.abs(sol.coefficients[:-1]).max() if n > 0 else 0.0
    return ChebyshevReport(n, sol.value, abs(sol.value - 1) <= tol, float(lower),
                           _spread_defect(pts, n), [complex(c) for c in sol.coefficients])


# ----------------------------------------------------------------------------
# Jacobian of the generic-configuration map


def jacobian_matrix(points) -> np.ndarray:
    z = np.asarray(points, dtype=complex)
    n = z.size
    if n < 2:
        raise ValueError("need at least two points")
    if np.any(np.abs(z) == 0) or np.any(np.abs(z - 1) == 0):
        raise ValueError("points must avoid 0 and 1")
    diff = z[:, None] - z[None, :]
    np.fill_diagonal(diff, 1.0)
    if np.any(np.abs(diff) == 0):
        raise ValueError("points must be pairwise distinct")
    ratio = z[:, None] / diff                   # z_k / (z_k - z_j)
    np.fill_diagonal(ratio, 0.0)
    J = ratio - (z / (z - 1))[:, None]
    np.fill_diagonal(J, ratio.sum(axis=1) + 1)
    return J


def jacobian_constant_check(points) -> complex:
    """Determinant of the configuration Jacobian; it equals ``n!`` for every input."""
    return complex(np.linalg.det(jacobian_matrix(points)))
