"""Dense revised simplex for batches of standard-form linear programs.

Solves, for every problem ``p`` in a batch::

    minimize    c_p . x
    subject to  A_p x = b_p,  x >= 0

where ``A_p = [A_shared | A_own[p]]`` and ``c_p = [c_shared | c_own[p]]``.
Sharing the bulk of the columns lets pricing run as one matrix product over
the whole batch, which is what makes per-cell hull grids affordable.

The caller supplies a primal feasible starting basis; there is no phase one.
Pricing is Dantzig's rule, switching to Bland's rule for a problem whose
objective stalls (degenerate cycling guard). Callers whose shared columns have
structure may pass ``pricer(y) -> (d_min, index)`` to find the most negative
shared reduced cost without forming ``y @ A_shared``; Bland steps always price
densely.
"""

from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np

OPTIMAL, ITERATION_LIMIT, UNBOUNDED = 0, 1, 2


@numba.njit(cache=True)
def _pivot(Binv, xB, basis, a_q, enter, bland):
    """Ratio test and product-form update of ``Binv``/``xB``/``basis``, per problem.

    Returns the leaving positions and the problems found unbounded (left
    untouched). Ties in the ratio
    test go to the largest pivot, or under Bland's rule to the smallest basic
    column index.
    """
    P, m = xB.shape
    unbounded = np.zeros(P, dtype=np.bool_)
    leaving = np.zeros(P, dtype=np.int64)
    dirn = np.empty(m)
    for p in range(P):
        big = 0.0
        for i in range(m):
            acc = 0.0
            for j in range(m):
                acc += Binv[p, i, j] * a_q[p, j]
            dirn[i] = acc
            big = max(big, abs(acc))
        ptol = 1e-9 * (1.0 + big)
        theta = np.inf
        for i in range(m):
            if dirn[i] > ptol:
                theta = min(theta, xB[p, i] / dirn[i])
        if theta == np.inf:
            unbounded[p] = True
            continue
        cut = theta * (1 + 1e-12) + 1e-15
        leave = -1
        for i in range(m):
            if dirn[i] > ptol and xB[p, i] / dirn[i] <= cut:
                if leave < 0:
                    leave = i
                elif bland[p]:
                    if basis[p, i] < basis[p, leave]:
                        leave = i
                elif dirn[i] > dirn[leave]:
                    leave = i
        piv = dirn[leave]
        for j in range(m):
            Binv[p, leave, j] /= piv
        for i in range(m):
            if i != leave and dirn[i] != 0.0:
                f = dirn[i]
                for j in range(m):
                    Binv[p, i, j] -= f * Binv[p, leave, j]
        for i in range(m):
            xB[p, i] = max(xB[p, i] - theta * dirn[i], 0.0)
        xB[p, leave] = theta
        basis[p, leave] = enter[p]
        leaving[p] = leave
    return leaving, unbounded


class LPError(RuntimeError):
    pass


@dataclass
class LPResult:
    status: np.ndarray      # (P,) OPTIMAL / ITERATION_LIMIT / UNBOUNDED
    objective: np.ndarray   # (P,)
    y: np.ndarray           # (P, m) simplex multipliers c_B B^-1
    basis: np.ndarray       # (P, m) column indices
    x_basic: np.ndarray     # (P, m)
    iterations: np.ndarray  # (P,)


def simplex(
    A_shared: np.ndarray,
    c_shared: np.ndarray,
    b: np.ndarray,
    basis: np.ndarray,
    A_own: np.ndarray | None = None,
    c_own: np.ndarray | None = None,
    *,
    tol: float = 1e-9,
    max_iter: int | None = None,
    refactor_every: int = 64,
    stall_limit: int | None = None,
    pricer=None,
) -> LPResult:
    A_shared = np.ascontiguousarray(A_shared, dtype=float)
    c_shared = np.asarray(c_shared, dtype=float)
    m, ns = A_shared.shape
    basis = np.array(basis, dtype=np.int64, ndmin=2)
    P = basis.shape[0]
    if A_own is None:
        A_own = np.zeros((P, m, 0))
        c_own = np.zeros((P, 0))
    A_own = np.asarray(A_own, dtype=float)
    c_own = np.asarray(c_own, dtype=float)
    no = A_own.shape[2]
    b = np.broadcast_to(np.asarray(b, dtype=float), (P, m)).copy()
    if max_iter is None:
        max_iter = 20 * (m + no) + 4 * m * m + 2000
    if stall_limit is None:
        stall_limit = 2 * m + 10

    def columns(idx, own_block):
        # idx: (k, s) column indices; own_block: (k, m, no) own columns of those problems
        out = A_shared[:, np.minimum(idx, ns - 1)].transpose(1, 0, 2)  # (k, m, s)
        r, j = np.nonzero(idx >= ns)
        if r.size:
            out[r, :, j] = own_block[r, :, idx[r, j] - ns]
        return out

    def costs(idx, own_costs):
        out = c_shared[np.minimum(idx, ns - 1)]
        r, j = np.nonzero(idx >= ns)
        if r.size:
            out[r, j] = own_costs[r, idx[r, j] - ns]
        return out

    def factor(B_idx, own_block):
        Bm = columns(B_idx, own_block)
        try:
            return np.linalg.inv(Bm)
        except np.linalg.LinAlgError:
            return np.linalg.pinv(Bm)

    Binv = factor(basis, A_own)
    xB = np.matmul(Binv, b[:, :, None])[:, :, 0]
    if np.any(xB < -1e-7 * (1 + np.abs(b).max())):
        raise LPError("starting basis is not primal feasible")
    np.maximum(xB, 0.0, out=xB)

    status = np.full(P, ITERATION_LIMIT)
    iters = np.zeros(P, dtype=np.int64)
    y_out = np.zeros((P, m))
    basis_out = basis.copy()
    xB_out = xB.copy()

    # working state holds only unfinished problems; ``ids`` maps back
    ids = np.arange(P)
    Aw, cw, bw = A_own, c_own, b
    cB = costs(basis, cw)
    best = np.full(P, np.inf)
    stall = np.zeros(P, dtype=np.int64)
    bland = np.zeros(P, dtype=bool)

    def retire(mask, code, y):
        nonlocal ids, Aw, cw, bw, cB, best, stall, bland, Binv, xB, basis
        fin = ids[mask]
        status[fin] = code
        y_out[fin] = y[mask]
        basis_out[fin] = basis[mask]
        xB_out[fin] = xB[mask]
        keep = ~mask
        ids, Aw, cw, bw, cB = ids[keep], Aw[keep], cw[keep], bw[keep], cB[keep]
        best, stall, bland = best[keep], stall[keep], bland[keep]
        Binv, xB, basis = Binv[keep], xB[keep], basis[keep]
        return keep

    it = 0
    while ids.size and it < max_iter:
        it += 1
        k = ids.size
        y = np.matmul(cB[:, None, :], Binv)[:, 0, :]
        dtol = tol * (1.0 + np.abs(y).max(axis=1))
        d_own = cw - np.matmul(y[:, None, :], Aw)[:, 0, :] if no else None
        enter = np.zeros(k, dtype=np.int64)
        dmin = np.zeros(k)
        dense = bland if pricer is not None else np.ones(k, dtype=bool)
        if not dense.all():
            sel = np.nonzero(~dense)[0]
            # a basic column prices to ~0, so it can only be the minimum when
            # nothing is negative; no pinning needed on this path
            dm, idx = pricer(y[sel])
            if no:
                o = d_own[sel]
                own_b = basis[sel] - ns
                r_, s_ = np.nonzero(own_b >= 0)
                o[r_, own_b[r_, s_]] = 0.0
                jo = np.argmin(o, axis=1)
                om = o[np.arange(sel.size), jo]
                use = om < dm
                dm = np.where(use, om, dm)
                idx = np.where(use, ns + jo, idx)
            dmin[sel], enter[sel] = dm, idx
        if dense.any():
            sel = np.nonzero(dense)[0]
            d = c_shared[None, :] - y[sel] @ A_shared
            if no:
                d = np.concatenate([d, d_own[sel]], axis=1)
            # basic columns price to zero; pin them so noise never re-enters them
            np.put_along_axis(d, basis[sel], 0.0, axis=1)
            e = np.argmin(d, axis=1)
            b_sel = bland[sel]
            if b_sel.any():
                e[b_sel] = np.argmax(d[b_sel] < -dtol[sel][b_sel, None], axis=1)
            dmin[sel] = d.min(axis=1)
            enter[sel] = e

        done = dmin >= -dtol
        if done.any():
            keep = retire(done, OPTIMAL, y)
            y, enter = y[keep], enter[keep]
            if not ids.size:
                break
        k = ids.size
        iters[ids] += 1

        a_q = columns(enter[:, None], Aw)[:, :, 0]
        leave, unb = _pivot(Binv, xB, basis, a_q, enter, bland)
        if unb.any():
            keep = retire(unb, UNBOUNDED, y)
            enter, leave = enter[keep], leave[keep]
            if not ids.size:
                break
        cB[np.arange(ids.size), leave] = costs(enter[:, None], cw)[:, 0]

        if it % refactor_every == 0:
            Binv = factor(basis, Aw)
            xB = np.maximum(np.matmul(Binv, bw[:, :, None])[:, :, 0], 0.0)

        obj = np.einsum("pi,pi->p", cB, xB)
        improved = obj < best - 1e-12 * (1.0 + np.abs(obj))
        best = np.where(improved, obj, best)
        stall = np.where(improved, 0, stall + 1)
        bland |= stall > stall_limit

    # problems still unfinished hit the limit; report their current multipliers
    if ids.size:
        y_out[ids] = np.matmul(cB[:, None, :], Binv)[:, 0, :]
        basis_out[ids] = basis
        xB_out[ids] = xB
    objective = np.einsum("pi,pi->p", costs(basis_out, c_own), xB_out)
    return LPResult(status, objective, y_out, basis_out, xB_out, iters)
