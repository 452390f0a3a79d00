"""Experiments in two complex variables: torus knots, totally real planes, surface families."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .cheb import PointConstraint, membership_numeric, minimax, verify_certificate, MinimaxSolution
from .poly import Poly2, eval2, monomial_basis, sup_norm
from .sets import SampledSet, format_descriptor, sample

CLEARANCE_DELTA = 1e-3
V_TOL = 1e-12


@dataclass(frozen=True)
class KnotSpec:
    """The torus knot ``{(e^{ip theta}, e^{-iq theta})}`` for coprime ``p, q``."""

    p: int
    q: int

    def __post_init__(self):
        if self.p < 1 or self.q < 1:
            raise ValueError("p and q must be positive integers")
        if math.gcd(self.p, self.q) != 1:
            raise ValueError(f"p and q must be coprime, got ({self.p}, {self.q})")

    @property
    def coprime(self) -> bool:
        return True

    @property
    def separation_degree(self) -> int:
        """Lowest degree of a polynomial separating the origin from the knot."""
        return self.p + self.q

    def descriptor(self, N: int) -> str:
        return format_descriptor("knot", p=self.p, q=self.q, N=N)


def knot_samples(spec: KnotSpec, N: int = 2000) -> SampledSet:
    """``N`` samples equally spaced in the parameter, starting at ``theta = 0``."""
    if N < 4:
        raise ValueError("a knot needs at least 4 samples")
    return sample(spec.descriptor(N))


def knot_degree_experiment(spec: KnotSpec, degree: int, N: int = 2000, L: int = 128) -> MinimaxSolution:
    """Minimax value of ``P(0, 0) = 1`` over the knot samples at total degree ``degree``.

    The value stays at 1 below degree ``p + q`` and collapses from there on.
    """
    if degree < 1:
        raise ValueError("degree must be >= 1")
    return minimax(knot_samples(spec, N), monomial_basis(2, degree), PointConstraint((0j, 0j)), L)


# ----------------------------------------------------------------------------
# separation from the totally real plane w = conj(z)


class SeparationError(RuntimeError):
    def __init__(self, message: str, diagnostics: dict):
        super().__init__(f"{message}: {diagnostics}")
        self.diagnostics = diagnostics


@dataclass
class Separation:
    polynomial: Poly2
    method: str                  # "closed-form:in-plane", "closed-form:b!=0", "closed-form:b=0" or "lp"
    abs_at_point: float
    sup_samples: float
    sup_resample: float
    attempts: list[dict] = field(default_factory=list)


def _in_plane(K: SampledSet) -> None:
    if K.dimension != 2:
        raise ValueError("the set must be two-dimensional")
    z, w = K.points[:, 0], K.points[:, 1]
    if np.abs(w - np.conj(z)).max() > V_TOL:
        raise ValueError("samples do not lie on the plane w = conj(z)")


def _check(P: Poly2, point, K: SampledSet, factor: int) -> tuple[bool, dict]:
    at = abs(eval2(P, point[0], point[1]))
    on_k = sup_norm(P, K)
    if K.finite:
        dense = on_k
    else:
        ok, info = verify_certificate(P, point, K, factor)
        dense = info["sup_resample"]
    ok = at >= 1 - 1e-12 and on_k < 1 and dense < at
    return ok, {"abs_at_point": at, "sup_samples": on_k, "sup_resample": dense}


def _closed_forms(point, K: SampledSet) -> list[tuple[str, Poly2]]:
    z0, w0 = point
    z, w = K.points[:, 0], K.points[:, 1]
    out = []
    if abs(w0 - np.conj(z0)) <= V_TOL:
        M = float(np.abs((z - z0) * (w - w0)).max())
        # 1 - (z - z0)(w - w0) / (2M)
        out.append(("closed-form:in-plane",
                    Poly2({(0, 0): 1 - z0 * w0 / (2 * M), (1, 1): -1 / (2 * M),
                           (1, 0): w0 / (2 * M), (0, 1): z0 / (2 * M)})))
        return out
    c = z0 * w0
    a, b = c.real, c.imag
    zeta2 = np.abs(z) ** 2
    if b != 0:
        # on the plane zw - z0 w0 = (|zeta|^2 - a) - ib, so |P|^2 = 1 + (b^2 + (|zeta|^2 - a)^2 + 2bm)/m^2
        bound = float((b * b + (zeta2 - a) ** 2).max())
        m = -math.copysign(1.0, b) * (bound + 1) / (2 * abs(b))
        out.append(("closed-form:b!=0", Poly2({(0, 0): 1 - 1j * c / m, (1, 1): 1j / m})))
    elif a != 0:
        bound = float((a * a + zeta2 ** 2).max())
        m = -math.copysign(1.0, a) * (bound + 1) / (2 * abs(a))
        out.append(("closed-form:b=0", Poly2({(0, 0): 1 + c / m, (1, 1): 1j / m})))
    return out


def totally_real_separator(point, K: SampledSet, resample_factor: int = 10, L: int = 128) -> Separation:
    """Degree-two polynomial with ``|P(point)| >= 1 > sup_K |P|`` for ``K`` on ``w = conj(z)``.

    Closed forms are tried first; each is kept only if it passes the
    certificate check on the samples and on a denser resample. Otherwise the
    minimax LP over all six degree-two monomials supplies the certificate.
    """
    _in_plane(K)
    point = (complex(point[0]), complex(point[1]))
    gap = np.abs(K.points - np.array(point)).max(axis=1).min()
    if gap <= 1e-12:
        raise ValueError("the point lies on the sampled set")
    attempts = []
    for method, P in _closed_forms(point, K):
        ok, info = _check(P, point, K, resample_factor)
        attempts.append({"method": method, "passed": ok, **info})
        if ok:
            return Separation(P, method, info["abs_at_point"], info["sup_samples"], info["sup_resample"], attempts)
    verdict = membership_numeric(K, point, 2, L=L, resample_factor=resample_factor)
    attempt = {"method": "lp", "passed": verdict.certificate is not None, "value": verdict.value,
               "status": verdict.status}
    attempts.append(attempt)
    if verdict.certificate is not None:
        P = verdict.certificate
        ok, info = _check(P, point, K, resample_factor)
        attempt.update(info)
        if ok:
            return Separation(P, "lp", info["abs_at_point"], info["sup_samples"], info["sup_resample"], attempts)
        attempt["passed"] = False
    raise SeparationError("no verified degree-two separator", {"point": point, "attempts": attempts})


# ----------------------------------------------------------------------------
# level-set families


@dataclass(frozen=True)
class SurfaceFamily:
    """The hypersurfaces ``{F = lambda}``, ``lambda >= 0``, through ``base_point`` at ``lambda = 0``."""

    F: Poly2
    base_point: tuple[complex, complex] = (0j, 0j)
    name: str = ""

    def __post_init__(self):
        if abs(eval2(self.F, self.base_point[0], self.base_point[1])) > 1e-12:
            raise ValueError("F must vanish at the base point")


def ray_distance(u) -> np.ndarray:
    """Distance from ``u`` to the ray ``[0, inf)``."""
    u = np.asarray(u, dtype=complex)
    return np.where(u.real < 0, np.abs(u), np.abs(u.imag))


def geometric_hull_witness(family: SurfaceFamily, K: SampledSet) -> float:
    """Distance from ``F(K)`` to ``[0, inf)``.

    A positive clearance means no level ``{F = lambda}`` with ``lambda >= 0``
    meets ``K``, so the base point is swept out of the geometric hull.
    """
    if K.dimension != 2:
        raise ValueError("surface families act on two-dimensional sets")
    vals = eval2(family.F, K.points[:, 0], K.points[:, 1])
    return float(ray_distance(vals).min())


def knot_p1(p: int, N: int = 2000) -> SampledSet:
    """``K_p = {(e^{ip theta}, e^{-i theta})}``."""
    return knot_samples(KnotSpec(p, 1), N)


EXAMPLE_FAMILIES: dict[int, SurfaceFamily] = {
    2: SurfaceFamily(Poly2({(1, 1): 1, (1, 0): -1, (0, 1): -1}), name="zw - z - w"),
    3: SurfaceFamily(Poly2({(1, 1): -2, (1, 0): 1, (0, 1): -2}), name="-2zw + z - 2w"),
    4: SurfaceFamily(Poly2({(1, 1): 3, (1, 0): -3, (0, 1): -5}), name="3zw - 3z - 5w"),
}
