"""Pure numpy kernels. Same algorithms and signatures as the compiled ``_core``."""
import numpy as np

OPTIMAL, INFEASIBLE, FAILURE = 0, 1, 2
SUSPECT_PIVOT = 1e-7  # re-derived from a fresh factorization before use


def rhs_perturbation(d, scale, eps):
    """Fixed positive offsets that break ties between degenerate basic values."""
    return eps * scale * np.random.default_rng(0x5EED).uniform(0.5, 1.0, d)


def simplex_min_sum(A, b, tol_pivot=1e-10, tol_feas=1e-9, tol_opt=1e-9,
                    max_iter=0, stall_limit=50, refactor_every=64, perturb=1e-7):
    """Two-phase revised simplex for ``min sum(x)  s.t.  A x = b, x >= 0``.

    Both phases run on a slightly perturbed right-hand side. The true one is
    then restored and any resulting primal infeasibility is removed with dual
    simplex pivots, which keep the basis optimal.

    Returns ``(status, x, y, iterations)`` where ``y`` are the duals of the
    equality rows (``1 - A.T @ y >= 0`` at optimality).
    """
    A = np.ascontiguousarray(A, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    d, n = A.shape
    if max_iter <= 0:
        max_iter = 50 * (n + d)
    sgn = np.where(b < 0, -1.0, 1.0)
    Ab = A * sgn[:, None]
    bb = np.abs(b)
    scale = max(1.0, float(bb.max())) if d else 1.0
    rhs = bb + rhs_perturbation(d, scale, perturb)

    basis = np.arange(n, n + d)
    Binv = np.eye(d)
    xB = rhs.copy()
    is_basic = np.zeros(n, dtype=bool)
    iterations = 0

    def refactor():
        B = np.empty((d, d))
        for r, j in enumerate(basis):
            if j < n:
                B[:, r] = Ab[:, j]
            else:
                B[:, r] = 0.0
                B[j - n, r] = 1.0
        try:
            inv = np.linalg.inv(B)
        except np.linalg.LinAlgError:
            return False
        Binv[:] = inv
        xB[:] = inv @ rhs
        xB[(xB < 0) & (xB > -tol_feas * scale)] = 0.0
        return True

    def pivot(r, q, w, theta):
        xB[:] -= theta * w
        xB[r] = theta
        xB[(xB < 0) & (xB > -tol_feas * scale)] = 0.0
        row = Binv[r] / w[r]
        Binv[:] -= np.outer(w, row)
        Binv[r] = row
        leaving = basis[r]
        if leaving < n:
            is_basic[leaving] = False
        basis[r] = q
        is_basic[q] = True
        return theta

    def duals(cost_struct, cost_art):
        cB = np.where(basis < n, cost_struct[np.minimum(basis, n - 1)], cost_art)
        return cB @ Binv

    def run_phase(cost_struct, cost_art):
        nonlocal iterations
        bland = False
        stall = 0
        since_refactor = 0
        while True:
            y = duals(cost_struct, cost_art)
            red = cost_struct - y @ Ab
            red[is_basic] = 0.0
            if bland:
                neg = np.flatnonzero(red < -tol_opt)
                if neg.size == 0:
                    return OPTIMAL
                q = int(neg[0])
            else:
                q = int(np.argmin(red))
                if red[q] >= -tol_opt:
                    return OPTIMAL
            if iterations >= max_iter:
                return FAILURE
            w = Binv @ Ab[:, q]
            rows = np.flatnonzero(w > tol_pivot)
            if rows.size == 0:
                return FAILURE
            # slightly negative basics count as zero so a step never moves backwards
            ratios = np.maximum(xB[rows], 0.0) / w[rows]
            theta = ratios.min()
            ties = rows[ratios <= theta + tol_feas]
            if bland:
                r = int(ties[np.argmin(basis[ties])])
            else:
                art = ties[basis[ties] >= n]
                pool = art if art.size else ties
                r = int(pool[np.argmax(w[pool])])
            if w[r] < SUSPECT_PIVOT and since_refactor > 0:
                # small pivots may be update drift: refactor and redo the iteration
                if not refactor():
                    return FAILURE
                since_refactor = 0
                continue
            theta = pivot(r, q, w, max(xB[r], 0.0) / w[r])
            iterations += 1
            since_refactor += 1
            if theta <= tol_feas:
                stall += 1
                if stall > stall_limit:
                    bland = True
            else:
                stall = 0
                bland = False  # progress was made, so no earlier basis can recur
            if since_refactor >= refactor_every:
                if not refactor():
                    return FAILURE
                since_refactor = 0

    def dual_cleanup(cost_struct):
        nonlocal iterations
        since_refactor = 0
        while True:
            r = int(np.argmin(xB))
            if xB[r] >= -tol_feas * scale:
                return OPTIMAL
            if iterations >= max_iter:
                return FAILURE
            alpha = Binv[r] @ Ab
            alpha[is_basic] = 0.0
            cand = np.flatnonzero(alpha < -tol_pivot)
            if cand.size == 0:
                return FAILURE
            red = cost_struct - duals(cost_struct, 0.0) @ Ab
            ratios = np.maximum(red[cand], 0.0) / -alpha[cand]
            q = int(cand[np.argmin(ratios)])
            w = Binv @ Ab[:, q]
            if -w[r] < SUSPECT_PIVOT and since_refactor > 0:
                if not refactor():
                    return FAILURE
                since_refactor = 0
                continue
            pivot(r, q, w, xB[r] / w[r])
            iterations += 1
            since_refactor += 1
            if since_refactor >= refactor_every:
                if not refactor():
                    return FAILURE
                since_refactor = 0

    def fail():
        return FAILURE, np.zeros(n), np.zeros(d), iterations

    ones = np.ones(n)
    zeros = np.zeros(n)
    if run_phase(zeros, 1.0) != OPTIMAL:
        return fail()
    if xB[basis >= n].sum() > tol_feas * scale * max(1, d) + perturb * scale * d:
        return INFEASIBLE, np.zeros(n), np.zeros(d), iterations

    # drive zero-level artificials out of the basis
    for r in range(d):
        if basis[r] < n:
            continue
        alpha = Binv[r] @ Ab
        alpha[is_basic] = 0.0
        j = int(np.argmax(np.abs(alpha)))
        if abs(alpha[j]) > tol_pivot:
            w = Binv @ Ab[:, j]
            pivot(r, j, w, xB[r] / w[r])
    if not refactor():
        return fail()

    if run_phase(ones, 0.0) != OPTIMAL:
        return fail()
    rhs[:] = bb
    if not refactor() or dual_cleanup(ones) != OPTIMAL:
        return fail()
    x = np.zeros(n)
    mask = basis < n
    x[basis[mask]] = np.maximum(xB[mask], 0.0)
    return OPTIMAL, x, duals(ones, 0.0) * sgn, iterations


def dd_adjacent_pairs(Z, plus, minus, min_common):
    """Pairs ``(p, m)`` of rays adjacent under the combinatorial test.

    ``Z`` is a boolean (rays x constraints) incidence matrix. Two rays are
    adjacent when their common zero set has at least ``min_common`` members
    and no third ray's zero set contains it.
    """
    Z = np.asarray(Z, dtype=bool)
    notZ = (~Z).astype(np.int32)
    Zm = Z[minus]
    out_p, out_m = [], []
    for p in plus:
        common = Zm & Z[p]
        counts = common.sum(axis=1)
        cand = np.flatnonzero(counts >= min_common)
        if cand.size == 0:
            continue
        viol = common[cand].astype(np.int32) @ notZ.T
        containing = (viol == 0).sum(axis=1)
        for c in cand[containing == 2]:
            out_p.append(p)
            out_m.append(minus[c])
    return np.array(out_p, dtype=np.intp), np.array(out_m, dtype=np.intp)
