"""Constrained Chebyshev problems on sampled sets.

``minimax`` computes ``min max_k |P(z_k)|`` over polynomials in a monomial
basis subject to ``P(w) = 1`` (hull membership) or to a unit leading
coefficient (Chebyshev polynomials). The complex modulus is replaced by an
inscribed regular L-gon, ``Re(exp(-i theta_l) P(z_k)) <= t``, so the problem
becomes a linear program; the true optimum lies in ``[value, value*sec(pi/L)]``.

The LP is solved through its dual, which is in standard form with a trivially
feasible starting basis: one sample/direction weight plus box slacks. The
optimal simplex multipliers are the polynomial coefficients.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Sequence

import numba
import numpy as np

from . import lp
from .poly import Poly, basis_values, eval1, eval2, from_basis, monomial_basis, sup_norm
from .sets import SampledSet, resample
from .verdict import BORDERLINE, MEMBER, NON_MEMBER, MembershipVerdict

DEFAULT_L = 128
COEFFICIENT_BOX = 1e6
FIRST_BOX = 1e3
EPS_MEMBER = 1e-3
EPS_SEP = 5e-2


def polygon_modulus(v: np.ndarray, L: int) -> np.ndarray:
    """``max_l Re(exp(-i theta_l) v)``: the modulus as seen by the L-gon constraints."""
    step = 2 * np.pi / L
    ang = np.angle(v)
    return np.abs(v) * np.cos(ang - step * np.rint(ang / step))


@numba.njit(cache=True)
def _price(y, phi_re, phi_im, L, box, R, nx):
    # reduced cost of weight column (k, l) is -y0 - Re(exp(-i theta_l) s_k),
    # s_k = sum_j (y[2j+1] + i y[2j+2]) phi_j(z_k); box slacks price to box -/+ y
    P = y.shape[0]
    N, nb = phi_re.shape
    step = 2 * np.pi / L
    dmin = np.empty(P)
    idx = np.empty(P, dtype=np.int64)
    for p in range(P):
        best = np.inf
        arg = 0
        for k in range(N):
            sr = 0.0
            si = 0.0
            for j in range(nb):
                cr = y[p, 2 * j + 1]
                ci = y[p, 2 * j + 2]
                sr += cr * phi_re[k, j] - ci * phi_im[k, j]
                si += cr * phi_im[k, j] + ci * phi_re[k, j]
            ang = np.arctan2(si, sr)
            r = np.rint(ang / step)
            d = -y[p, 0] - np.hypot(sr, si) * np.cos(ang - step * r)
            if d < best:
                best = d
                arg = (int(r) % L) * N + k
        for i in range(nx):
            du = box - y[p, 1 + i]
            if du < best:
                best = du
                arg = R + i
            dv = box + y[p, 1 + i]
            if dv < best:
                best = dv
                arg = R + nx + i
        dmin[p] = best
        idx[p] = arg
    return dmin, idx


@dataclass(frozen=True)
class PointConstraint:
    """P(w) = 1; ``w`` is complex (one variable) or a (z, w) pair (two)."""

    w: complex | tuple[complex, complex]


@dataclass(frozen=True)
class MonicConstraint:
    """Coefficient of the last basis monomial equals 1."""


@dataclass
class MinimaxSolution:
    value: float
    coefficients: np.ndarray
    basis: list[tuple[int, ...]]
    active_points: list[int]
    directions_used: int
    achieved: float
    iterations: int = 0
    box_active: bool = False     # some scaled coefficient sits on the coefficient box

    @property
    def polynomial(self) -> Poly:
        return from_basis(self.basis, self.coefficients)


def _as_point(w, dimension: int) -> np.ndarray:
    if dimension == 1:
        return np.array([complex(w)])
    z, v = w
    return np.array([[complex(z), complex(v)]])


@dataclass
class _Problem:
    """Shared LP data for one sample set, basis, polygon order and scale."""

    A: np.ndarray          # (m, R + 2 nx) shared columns: weights | u | v
    c: np.ndarray
    R: int
    nx: int
    scale: float
    basis: list
    degrees: np.ndarray
    phi: np.ndarray        # scaled basis values at samples (N, nb)
    L: int
    box: float

    def __post_init__(self):
        self.phi_re = np.ascontiguousarray(self.phi.real)
        self.phi_im = np.ascontiguousarray(self.phi.imag)

    @classmethod
    def build(cls, points: np.ndarray, basis: Sequence[tuple[int, ...]], L: int, scale: float, box: float):
        basis = [tuple(e) for e in basis]
        phi = basis_values(basis, np.asarray(points) / scale)
        N, nb = phi.shape
        nx = 2 * nb
        m = 1 + nx
        R = N * L
        A = np.zeros((m, R + 2 * nx))
        A[0, :R] = 1.0
        for l in range(L):
            u = np.exp(-2j * np.pi * l / L) * phi
            cols = slice(l * N, (l + 1) * N)
            A[1::2, cols] = u.real.T
            A[2::2, cols] = -u.imag.T
        A[1:, R:R + nx] = np.eye(nx)
        A[1:, R + nx:] = -np.eye(nx)
        c = np.concatenate([np.zeros(R), np.full(2 * nx, box)])
        degrees = np.array([sum(e) for e in basis])
        return cls(A, c, R, nx, scale, basis, degrees, phi, L, box)

    def with_box(self, box: float) -> "_Problem":
        if box == self.box:
            return self
        c = self.c.copy()
        c[self.R:] = box
        return replace(self, c=c, box=box)

    def price(self, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Most negative shared reduced cost per problem, without ``y @ A``.

        Against weight column (k, l) the multipliers give
        ``y0 + Re(exp(-i theta_l) s_k)`` with ``s_k = sum_j c_j phi_j(z_k)``, so
        the best direction for each sample is the polygon vertex nearest
        ``arg s_k``.
        """
        return _price(np.ascontiguousarray(y), self.phi_re, self.phi_im, self.L, self.box, self.R, self.nx)

    def rhs(self) -> np.ndarray:
        # tiny fixed perturbation of the zero rows breaks the heavy degeneracy
        # of these LPs; reduced costs do not depend on b, so the recovered
        # polynomial stays feasible and its objective moves by O(|b - e0| |x|)
        rng = np.random.default_rng(12345)
        b = np.zeros(1 + self.nx)
        b[0] = 1.0
        b[1:] = 1e-9 * (0.5 + rng.random(self.nx)) * rng.choice([-1.0, 1.0], self.nx)
        return b

    def start_basis(self) -> np.ndarray:
        r = self.rhs()[1:] - self.A[1:, 0]
        slack = np.where(r >= 0, self.R + np.arange(self.nx), self.R + self.nx + np.arange(self.nx))
        return np.concatenate([[0], slack])

    def equality(self, constraint, dimension: int) -> tuple[np.ndarray, np.ndarray]:
        E = np.zeros((2, self.nx))
        if isinstance(constraint, MonicConstraint):
            j = len(self.basis) - 1
            E[0, 2 * j] = 1.0
            E[1, 2 * j + 1] = 1.0
            return E, np.array([self.scale ** self.degrees[j], 0.0])
        e = basis_values(self.basis, _as_point(constraint.w, dimension) / self.scale)[0]
        E[0, 0::2], E[0, 1::2] = e.real, -e.imag
        E[1, 0::2], E[1, 1::2] = e.imag, e.real
        return E, np.array([1.0, 0.0])

    def finish(self, y: np.ndarray, E: np.ndarray, f: np.ndarray) -> tuple[float, np.ndarray]:
        x = y[1:].copy()
        x += E.T @ np.linalg.solve(E @ E.T, f - E @ x)
        ct = x[0::2] + 1j * x[1::2]
        t = float(polygon_modulus(self.phi @ ct, self.L).max())
        return t, ct / self.scale ** self.degrees


def _box_stages(box: float) -> list[float]:
    """Coefficient boxes to try in order.

    When polynomials vanishing on the samples exist, every optimum can slide
    along them for free and the solver ends on the box; the value there is
    rounding noise proportional to the box. A small first box keeps that noise
    near machine precision, and the full box is tried only if the small one binds.
    """
    return [b for b in (FIRST_BOX,) if b < box] + [box]


def _own_columns(E: np.ndarray, f: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    nx = E.shape[1]
    cols = np.zeros((1 + nx, 4))
    cols[1:, 0], cols[1:, 1] = E[0], -E[0]
    cols[1:, 2], cols[1:, 3] = E[1], -E[1]
    return cols, np.array([f[0], -f[0], f[1], -f[1]])


def _check_L(L: int):
    if L < 8 or L % 2:
        raise ValueError("polygon order L must be an even integer >= 8")


def _evaluate(K: SampledSet, p: Poly) -> np.ndarray:
    if K.dimension == 1:
        return eval1(p, K.points)
    return eval2(p, K.points[:, 0], K.points[:, 1])


def _solution(prob: _Problem, K: SampledSet, y, E, f, L, iters) -> MinimaxSolution:
    value, coeffs = prob.finish(y, E, f)
    vals = np.abs(prob.phi @ (coeffs * prob.scale ** prob.degrees))
    achieved = float(vals.max())
    active = [int(k) for k in np.nonzero(vals >= achieved - 1e-6)[0]]
    scaled = coeffs * prob.scale ** prob.degrees
    on_box = max(np.abs(scaled.real).max(), np.abs(scaled.imag).max()) >= 0.999 * prob.box
    return MinimaxSolution(max(value, 0.0), coeffs, prob.basis, active, L, achieved, int(iters), bool(on_box))


def minimax(
    K: SampledSet,
    basis: Sequence[tuple[int, ...]],
    constraint: PointConstraint | MonicConstraint,
    L: int = DEFAULT_L,
    box: float = COEFFICIENT_BOX,
) -> MinimaxSolution:
    """Minimise the sampled sup norm subject to a linear normalisation."""
    _check_L(L)
    if not basis:
        raise ValueError("basis must be nonempty")
    if any(len(e) != K.dimension for e in basis):
        raise ValueError("basis dimension does not match the sampled set")
    scale = K.radius
    if isinstance(constraint, PointConstraint):
        scale = max(scale, float(np.abs(_as_point(constraint.w, K.dimension)).max()))
    scale = scale if scale > 0 else 1.0
    prob = _Problem.build(K.points, basis, L, scale, _box_stages(box)[0])
    E, f = prob.equality(constraint, K.dimension)
    own, c_own = _own_columns(E, f)
    best = None
    for b in _box_stages(box):
        prob = prob.with_box(b)
        res = lp.simplex(prob.A, prob.c, prob.rhs(), prob.start_basis()[None], own[None], c_own[None],
                         pricer=prob.price)
        if res.status[0] != lp.OPTIMAL:
            raise lp.LPError(f"minimax LP did not reach optimality (status {res.status[0]})")
        sol = _solution(prob, K, res.y[0], E, f, L, res.iterations[0])
        best = sol if best is None or sol.value < best.value else best
        if not sol.box_active:
            break
    return best


def _workers() -> int:
    cap = os.environ.get("HULLBOUND_THREADS")
    n = os.cpu_count() or 1
    return max(1, min(n, int(cap))) if cap else 1


def _point_equalities(prob: _Problem, points: np.ndarray, dimension: int):
    """Own columns and costs of ``P(w) = 1`` for a batch of query points."""
    pts = np.asarray(points, dtype=complex)
    pts = pts.reshape(-1, 1) if dimension == 1 else pts.reshape(-1, 2)
    e = basis_values(prob.basis, pts / prob.scale)            # (P, nb)
    P = e.shape[0]
    E = np.zeros((P, 2, prob.nx))
    E[:, 0, 0::2], E[:, 0, 1::2] = e.real, -e.imag
    E[:, 1, 0::2], E[:, 1, 1::2] = e.imag, e.real
    f = np.tile([1.0, 0.0], (P, 1))
    own = np.zeros((P, 1 + prob.nx, 4))
    own[:, 1:, 0], own[:, 1:, 1] = E[:, 0], -E[:, 0]
    own[:, 1:, 2], own[:, 1:, 3] = E[:, 1], -E[:, 1]
    c_own = np.stack([f[:, 0], -f[:, 0], f[:, 1], -f[:, 1]], axis=1)
    return E, f, own, c_own


def _solve_batch(prob: _Problem, K: SampledSet, points) -> list[MinimaxSolution]:
    E, f, own, c_own = _point_equalities(prob, points, K.dimension)
    starts = np.tile(prob.start_basis(), (len(E), 1))
    res = lp.simplex(prob.A, prob.c, prob.rhs(), starts, own, c_own, pricer=prob.price)
    if np.any(res.status != lp.OPTIMAL):
        raise lp.LPError("minimax LP did not reach optimality in a batch")
    return [_solution(prob, K, res.y[i], E[i], f[i], prob.L, res.iterations[i]) for i in range(len(E))]


def _query_scale(K: SampledSet, queries) -> float:
    scale = max([K.radius] + [float(np.abs(_as_point(q, K.dimension)).max()) for q in queries])
    return scale if scale > 0 else 1.0


def _run(fn, jobs):
    workers = _workers()
    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(workers) as pool:
            return list(pool.map(fn, jobs))
    return [fn(j) for j in jobs]


def minimax_many(
    K: SampledSet,
    basis: Sequence[tuple[int, ...]],
    queries: Sequence,
    L: int = DEFAULT_L,
    scale: float | None = None,
    box: float = COEFFICIENT_BOX,
) -> list[MinimaxSolution]:
    """``minimax`` with ``P(w) = 1`` for many query points sharing one LP.

    Queries are solved in fixed-order chunks; with ``HULLBOUND_THREADS`` > 1
    chunks run on a thread pool and are reassembled in order.
    """
    _check_L(L)
    queries = list(queries)
    if not queries:
        return []
    stages = _box_stages(box)
    prob = _Problem.build(K.points, basis, L, scale or _query_scale(K, queries), stages[0])
    chunk = max(1, min(2048, int(3e6 // (prob.R + 2 * prob.nx))))
    sols: list[MinimaxSolution] = [None] * len(queries)
    todo = list(range(len(queries)))
    for b in stages:
        prob = prob.with_box(b)
        batches = [todo[i:i + chunk] for i in range(0, len(todo), chunk)]
        parts = _run(lambda bt: _solve_batch(prob, K, [queries[j] for j in bt]), batches)
        for j, sol in zip(todo, (s for part in parts for s in part)):
            if sols[j] is None or sol.value < sols[j].value:
                sols[j] = sol
            elif sol.box_active:
                sols[j].box_active = True
        todo = [j for j in todo if sols[j].box_active]
        if not todo:
            break
    return sols


def _status(value: float, eps_member: float, eps_sep: float) -> str:
    if value >= 1 - eps_member:
        return MEMBER
    if value <= 1 - eps_sep:
        return NON_MEMBER
    return BORDERLINE


def _point_value(p: Poly, w, dimension: int) -> complex:
    if dimension == 1:
        return complex(eval1(p, complex(w)))
    return complex(eval2(p, complex(w[0]), complex(w[1])))


def verify_certificate(p: Poly, w, K: SampledSet, factor: int = 10) -> tuple[bool, dict]:
    """Independent re-check that ``p`` separates ``w`` from ``K``.

    Requires ``|p(w)| >= 1 > sup_K |p|`` on the given samples and
    ``sup |p| < |p(w)|`` on a ``factor``-times denser resample.
    """
    at_w = abs(_point_value(p, w, K.dimension))
    on_k = sup_norm(p, K)
    dense = resample(K, factor)
    on_dense = sup_norm(p, dense)
    ok = at_w >= 1 - 1e-12 and on_k < 1 and on_dense < at_w
    return ok, {"abs_at_w": at_w, "sup_samples": on_k, "sup_resample": on_dense, "resample_size": len(dense)}


def _verdict(K, w, degree, sol: MinimaxSolution, eps_member, eps_sep, verify, factor) -> MembershipVerdict:
    status = _status(sol.value, eps_member, eps_sep)
    v = MembershipVerdict(status, w, degree, value=sol.value,
                          diagnostics={"achieved": sol.achieved, "L": sol.directions_used,
                                       "iterations": sol.iterations})
    if status == NON_MEMBER:
        p = sol.polynomial
        at_w = _point_value(p, w, K.dimension)
        p = p.scale(1 / at_w)
        ok, info = verify_certificate(p, w, K, factor) if verify else (True, {})
        v.diagnostics.update(info)
        if ok:
            v.certificate = p
        else:
            v.status = BORDERLINE
            v.verification_failed = True
    return v


def membership_numeric(
    K: SampledSet,
    w,
    degree: int,
    *,
    eps_member: float = EPS_MEMBER,
    eps_sep: float = EPS_SEP,
    L: int = DEFAULT_L,
    verify: bool = True,
    resample_factor: int = 10,
) -> MembershipVerdict:
    """Numeric degree-``degree`` hull membership of ``w`` via the minimax value.

    Non-membership comes with a certificate polynomial, re-verified on a denser
    resample of ``K``; if that check fails the verdict is demoted to
    borderline and ``verification_failed`` is set.
    """
    if degree < 1:
        raise ValueError("degree must be >= 1")
    sol = minimax(K, monomial_basis(K.dimension, degree), PointConstraint(w), L)
    return _verdict(K, w, degree, sol, eps_member, eps_sep, verify, resample_factor)


def membership_numeric_many(K: SampledSet, ws: Sequence, degree: int, *, eps_member: float = EPS_MEMBER,
                            eps_sep: float = EPS_SEP, L: int = DEFAULT_L, verify: bool = True,
                            resample_factor: int = 10) -> list[MembershipVerdict]:
    sols = minimax_many(K, monomial_basis(K.dimension, degree), ws, L)
    return [_verdict(K, w, degree, s, eps_member, eps_sep, verify, resample_factor) for w, s in zip(ws, sols)]


@dataclass
class HullGrid:
    xs: np.ndarray
    ys: np.ndarray
    values: np.ndarray    # (ny, nx) minimax values
    status: np.ndarray    # (ny, nx) str
    degree: int
    generator: str = ""
    params: dict = field(default_factory=dict)

    @property
    def member(self) -> np.ndarray:
        return self.status == MEMBER

    def cells(self):
        for iy, y in enumerate(self.ys):
            for ix, x in enumerate(self.xs):
                yield float(x), float(y), float(self.values[iy, ix]), str(self.status[iy, ix])

    def to_csv(self) -> str:
        lines = ["x,y,value,status"]
        lines += [f"{x:.17g},{y:.17g},{v:.17g},{s}" for x, y, v, s in self.cells()]
        return "\n".join(lines) + "\n"


def grid_hull(
    K: SampledSet,
    degree: int,
    bbox: tuple[float, float, float, float],
    resolution: int | tuple[int, int],
    *,
    eps_member: float = EPS_MEMBER,
    eps_sep: float = EPS_SEP,
    L: int = DEFAULT_L,
) -> HullGrid:
    """Pointwise picture of the degree-``degree`` hull of a planar sampled set.

    ``bbox`` is ``(xmin, xmax, ymin, ymax)``; grid nodes include the edges.
    Nodes within 1e-9 of a sample are members outright.
    """
    if K.dimension != 1:
        raise ValueError("grid_hull needs a planar (one complex variable) set")
    nx, ny = (resolution, resolution) if isinstance(resolution, int) else resolution
    if nx <= 1 or ny <= 1:
        raise ValueError("resolution must exceed 1 in each direction")
    x0, x1, y0, y1 = bbox
    pts = K.points
    if pts.real.min() < x0 or pts.real.max() > x1 or pts.imag.min() < y0 or pts.imag.max() > y1:
        raise ValueError("bbox must contain all samples")
    xs, ys = np.linspace(x0, x1, nx), np.linspace(y0, y1, ny)
    W = (xs[None, :] + 1j * ys[:, None]).ravel()
    scale = max(K.radius, float(np.abs(W).max()))
    dist = np.array([np.abs(pts - w).min() for w in W])
    on_k = dist <= 1e-9 * scale
    values = np.ones(W.size)
    idx = np.nonzero(~on_k)[0]
    sols = minimax_many(K, monomial_basis(1, degree), W[idx], L, scale=scale)
    values[idx] = [s.value for s in sols]
    status = np.array([_status(v, eps_member, eps_sep) for v in values], dtype=object)
    status[on_k] = MEMBER
    return HullGrid(xs, ys, values.reshape(ny, nx), status.reshape(ny, nx), degree, K.generator,
                    {"L": L, "eps_member": eps_member, "eps_sep": eps_sep})
