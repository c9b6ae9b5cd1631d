# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels. Mirrors ``_pykernels`` operation for operation."""
import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, fmax
from libc.stdint cimport uint64_t
from scipy.linalg.cython_blas cimport dgemv, dger

cnp.import_array()

cdef enum:
    OPTIMAL = 0
    INFEASIBLE = 1
    FAILURE = 2

# pivots below this are re-derived from a fresh factorization before use
cdef double SUSPECT_PIVOT = 1e-7


cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil


cdef inline void _matT_vec(double[:, ::1] X, double* v, double* out, double alpha, double beta) noexcept nogil:
    # out = alpha * X.T @ v + beta * out  for row-major X (rows x cols)
    cdef char trans = b'N'
    cdef int m = X.shape[1], k = X.shape[0], one = 1
    dgemv(&trans, &m, &k, &alpha, &X[0, 0], &m, v, &one, &beta, out, &one)


cdef inline void _mat_vec(double[:, ::1] X, double* v, int incv, double* out) noexcept nogil:
    # out = X @ v for row-major square or rectangular X
    cdef char trans = b'T'
    cdef int m = X.shape[1], k = X.shape[0], one = 1
    cdef double alpha = 1.0, beta = 0.0
    dgemv(&trans, &m, &k, &alpha, &X[0, 0], &m, v, &incv, &beta, out, &one)


cdef class _Simplex:
    cdef double[:, ::1] Ab
    cdef double[::1] rhs
    cdef double[:, ::1] Binv
    cdef double[::1] xB, w, y, red, cB, row, cost, alpha
    cdef Py_ssize_t[::1] basis
    cdef signed char[::1] is_basic
    cdef int d, n
    cdef double tol_pivot, tol_feas, tol_opt, scale
    cdef public long iterations
    cdef long max_iter
    cdef int stall_limit, refactor_every

    def __init__(self, Ab, rhs, scale, tol_pivot, tol_feas, tol_opt, max_iter, stall_limit, refactor_every):
        self.Ab = Ab
        self.rhs = np.array(rhs, dtype=np.float64)
        self.d = Ab.shape[0]
        self.n = Ab.shape[1]
        self.Binv = np.eye(self.d)
        self.xB = np.array(rhs, dtype=np.float64)
        self.w = np.zeros(self.d)
        self.y = np.zeros(self.d)
        self.cB = np.zeros(self.d)
        self.row = np.zeros(self.d)
        self.red = np.zeros(self.n)
        self.cost = np.zeros(self.n)
        self.alpha = np.zeros(self.n)
        self.basis = np.arange(self.n, self.n + self.d, dtype=np.intp)
        self.is_basic = np.zeros(self.n, dtype=np.int8)
        self.tol_pivot = tol_pivot
        self.tol_feas = tol_feas
        self.tol_opt = tol_opt
        self.scale = scale
        self.max_iter = max_iter
        self.stall_limit = stall_limit
        self.refactor_every = refactor_every
        self.iterations = 0

    cdef void _clip(self) noexcept nogil:
        cdef int i
        cdef double lim = -self.tol_feas * self.scale
        for i in range(self.d):
            if self.xB[i] < 0 and self.xB[i] > lim:
                self.xB[i] = 0.0

    def refactor(self):
        """Rebuild ``Binv`` and ``xB`` from scratch; False if the basis is singular."""
        cdef int r, i
        cdef Py_ssize_t j
        B = np.zeros((self.d, self.d))
        for r in range(self.d):
            j = self.basis[r]
            if j < self.n:
                for i in range(self.d):
                    B[i, r] = self.Ab[i, j]
            else:
                B[j - self.n, r] = 1.0
        try:
            inv = np.linalg.inv(B)
        except np.linalg.LinAlgError:
            return False
        np.asarray(self.Binv)[:, :] = inv
        np.asarray(self.xB)[:] = inv @ np.asarray(self.rhs)
        self._clip()
        return True

    cdef bint _refactor(self) noexcept nogil:
        cdef bint ok
        with gil:
            ok = self.refactor()
        return ok

    cdef void _pivot(self, int r, Py_ssize_t q, double theta) noexcept nogil:
        cdef int i, d = self.d, one = 1
        cdef double inv_piv = 1.0 / self.w[r]
        cdef double minus_one = -1.0
        for i in range(d):
            self.xB[i] -= theta * self.w[i]
        self.xB[r] = theta
        self._clip()
        for i in range(d):
            self.row[i] = self.Binv[r, i] * inv_piv
        # column-major view of Binv is its transpose: Binv.T -= row (x) w
        dger(&d, &d, &minus_one, &self.row[0], &one, &self.w[0], &one, &self.Binv[0, 0], &d)
        for i in range(d):
            self.Binv[r, i] = self.row[i]
        if self.basis[r] < self.n:
            self.is_basic[self.basis[r]] = 0
        self.basis[r] = q
        self.is_basic[q] = 1

    cdef void _duals(self, double cost_art) noexcept nogil:
        cdef int r
        for r in range(self.d):
            if self.basis[r] < self.n:
                self.cB[r] = self.cost[self.basis[r]]
            else:
                self.cB[r] = cost_art
        # y = cB @ Binv
        _matT_vec(self.Binv, &self.cB[0], &self.y[0], 1.0, 0.0)

    cdef void _reduced_costs(self, double cost_art) noexcept nogil:
        cdef Py_ssize_t j
        self._duals(cost_art)
        for j in range(self.n):
            self.red[j] = self.cost[j]
        _matT_vec(self.Ab, &self.y[0], &self.red[0], -1.0, 1.0)

    cdef int run_phase(self, double cost_art) noexcept nogil:
        cdef bint bland = False, found
        cdef int stall = 0, since_refactor = 0, r, i, best_r
        cdef Py_ssize_t q, j
        cdef double best, theta, ratio, wmax
        cdef long best_b
        while True:
            self._reduced_costs(cost_art)
            q = -1
            best = -self.tol_opt
            for j in range(self.n):
                if self.is_basic[j]:
                    continue
                if bland:
                    if self.red[j] < -self.tol_opt:
                        q = j
                        break
                elif self.red[j] < best:
                    best = self.red[j]
                    q = j
            if q < 0:
                return OPTIMAL
            if self.iterations >= self.max_iter:
                return FAILURE
            _mat_vec(self.Binv, &self.Ab[0, q], self.n, &self.w[0])
            found = False
            theta = 0.0
            for i in range(self.d):
                if self.w[i] > self.tol_pivot:
                    # slightly negative basics count as zero so a step never moves backwards
                    ratio = fmax(self.xB[i], 0.0) / self.w[i]
                    if not found or ratio < theta:
                        theta = ratio
                        found = True
            if not found:
                return FAILURE
            best_r = -1
            wmax = 0.0
            best_b = 0
            for i in range(self.d):
                if self.w[i] > self.tol_pivot and fmax(self.xB[i], 0.0) / self.w[i] <= theta + self.tol_feas:
                    if bland:
                        if best_r < 0 or self.basis[i] < best_b:
                            best_r = i
                            best_b = self.basis[i]
                    else:
                        # artificial rows leave first, then the largest pivot
                        if best_r < 0:
                            best_r = i
                            wmax = self.w[i]
                        elif (self.basis[i] >= self.n) > (self.basis[best_r] >= self.n):
                            best_r = i
                            wmax = self.w[i]
                        elif (self.basis[i] >= self.n) == (self.basis[best_r] >= self.n) and self.w[i] > wmax:
                            best_r = i
                            wmax = self.w[i]
            r = best_r
            if self.w[r] < SUSPECT_PIVOT and since_refactor > 0:
                # small pivots may be update drift: refactor and redo the iteration
                if not self._refactor():
                    return FAILURE
                since_refactor = 0
                continue
            theta = fmax(self.xB[r], 0.0) / self.w[r]
            self._pivot(r, q, theta)
            self.iterations += 1
            since_refactor += 1
            if theta <= self.tol_feas:
                stall += 1
                if stall > self.stall_limit:
                    bland = True
            else:
                stall = 0
                bland = False  # progress was made, so no earlier basis can recur
            if since_refactor >= self.refactor_every:
                if not self._refactor():
                    return FAILURE
                since_refactor = 0

    cdef int dual_cleanup(self) noexcept nogil:
        """Dual simplex pivots until the restored right-hand side is feasible."""
        cdef int r, i, since_refactor = 0
        cdef Py_ssize_t q, j
        cdef double ratio, best
        while True:
            r = 0
            for i in range(1, self.d):
                if self.xB[i] < self.xB[r]:
                    r = i
            if self.xB[r] >= -self.tol_feas * self.scale:
                return OPTIMAL
            if self.iterations >= self.max_iter:
                return FAILURE
            _matT_vec(self.Ab, &self.Binv[r, 0], &self.alpha[0], 1.0, 0.0)
            self._reduced_costs(0.0)
            q = -1
            best = 0.0
            for j in range(self.n):
                if self.is_basic[j] or self.alpha[j] >= -self.tol_pivot:
                    continue
                ratio = fmax(self.red[j], 0.0) / -self.alpha[j]
                if q < 0 or ratio < best:
                    q = j
                    best = ratio
            if q < 0:
                return FAILURE
            _mat_vec(self.Binv, &self.Ab[0, q], self.n, &self.w[0])
            if -self.w[r] < SUSPECT_PIVOT and since_refactor > 0:
                if not self._refactor():
                    return FAILURE
                since_refactor = 0
                continue
            self._pivot(r, q, self.xB[r] / self.w[r])
            self.iterations += 1
            since_refactor += 1
            if since_refactor >= self.refactor_every:
                if not self._refactor():
                    return FAILURE
                since_refactor = 0

    def solve(self, bb, double perturb):
        cdef int r, j, best_j
        cdef double total, best
        for j in range(self.n):
            self.cost[j] = 0.0
        if self.run_phase(1.0) != OPTIMAL:
            return FAILURE
        total = 0.0
        for r in range(self.d):
            if self.basis[r] >= self.n:
                total += self.xB[r]
        if total > self.tol_feas * self.scale * max(1, self.d) + perturb * self.scale * self.d:
            return INFEASIBLE
        # drive zero-level artificials out of the basis
        for r in range(self.d):
            if self.basis[r] < self.n:
                continue
            _matT_vec(self.Ab, &self.Binv[r, 0], &self.alpha[0], 1.0, 0.0)
            best_j = 0
            best = -1.0
            for j in range(self.n):
                if self.is_basic[j]:
                    self.alpha[j] = 0.0
                if fabs(self.alpha[j]) > best:
                    best = fabs(self.alpha[j])
                    best_j = j
            if best > self.tol_pivot:
                _mat_vec(self.Binv, &self.Ab[0, best_j], self.n, &self.w[0])
                self._pivot(r, best_j, self.xB[r] / self.w[r])
        if not self.refactor():
            return FAILURE
        for j in range(self.n):
            self.cost[j] = 1.0
        if self.run_phase(0.0) != OPTIMAL:
            return FAILURE
        np.asarray(self.rhs)[:] = bb
        if not self.refactor():
            return FAILURE
        return self.dual_cleanup()

    def primal(self):
        x = np.zeros(self.n)
        cdef int r
        for r in range(self.d):
            if self.basis[r] < self.n:
                x[self.basis[r]] = fmax(self.xB[r], 0.0)
        return x

    def duals(self):
        self._duals(0.0)
        return np.array(self.y)


def rhs_perturbation(int d, double scale, double eps):
    """Fixed positive offsets that break ties between degenerate basic values."""
    return eps * scale * np.random.default_rng(0x5EED).uniform(0.5, 1.0, d)


def simplex_min_sum(A, b, double tol_pivot=1e-10, double tol_feas=1e-9, double tol_opt=1e-9,
                    long max_iter=0, int stall_limit=50, int refactor_every=64, double perturb=1e-7):
    """Two-phase revised simplex for ``min sum(x)  s.t.  A x = b, x >= 0``.

    Solves on a perturbed right-hand side, then restores it with dual simplex
    pivots. Returns ``(status, x, y, iterations)``.
    """
    A = np.ascontiguousarray(A, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    d, n = A.shape
    if max_iter <= 0:
        max_iter = 50 * (n + d)
    sgn = np.where(b < 0, -1.0, 1.0)
    Ab = np.ascontiguousarray(A * sgn[:, None])
    bb = np.abs(b)
    scale = max(1.0, float(bb.max())) if d else 1.0
    solver = _Simplex(Ab, bb + rhs_perturbation(d, scale, perturb), scale,
                      tol_pivot, tol_feas, tol_opt, max_iter, stall_limit, refactor_every)
    status = solver.solve(bb, perturb)
    if status != OPTIMAL:
        return status, np.zeros(n), np.zeros(d), solver.iterations
    return OPTIMAL, solver.primal(), solver.duals() * sgn, solver.iterations


def dd_adjacent_pairs(Z, plus, minus, int min_common):
    """Pairs ``(p, m)`` of rays adjacent under the combinatorial test.

    ``Z`` is a boolean (rays x constraints) incidence matrix.
    """
    Zb = np.asarray(Z, dtype=bool)
    cdef Py_ssize_t R = Zb.shape[0], K = Zb.shape[1]
    cdef Py_ssize_t W = (K + 63) // 64
    packed = np.zeros((R, W), dtype=np.uint64)
    for k in range(K):
        packed[:, k // 64] |= Zb[:, k].astype(np.uint64) << np.uint64(k % 64)
    cdef uint64_t[:, ::1] bits = packed
    cdef Py_ssize_t[::1] P = np.ascontiguousarray(plus, dtype=np.intp)
    cdef Py_ssize_t[::1] Mi = np.ascontiguousarray(minus, dtype=np.intp)
    cdef uint64_t[::1] common = np.zeros(W, dtype=np.uint64)
    cdef Py_ssize_t a, c, p, m, r, k2
    cdef int count
    cdef bint adjacent, contains
    out_p, out_m = [], []
    for a in range(P.shape[0]):
        p = P[a]
        for c in range(Mi.shape[0]):
            m = Mi[c]
            count = 0
            for k2 in range(W):
                common[k2] = bits[p, k2] & bits[m, k2]
                count += __builtin_popcountll(common[k2])
            if count < min_common:
                continue
            adjacent = True
            for r in range(R):
                if r == p or r == m:
                    continue
                contains = True
                for k2 in range(W):
                    if common[k2] & ~bits[r, k2]:
                        contains = False
                        break
                if contains:
                    adjacent = False
                    break
            if adjacent:
                out_p.append(p)
                out_m.append(m)
    return np.array(out_p, dtype=np.intp), np.array(out_m, dtype=np.intp)

