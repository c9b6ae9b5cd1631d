"""Minimal total analog time: ``min sum(t)  s.t.  M t = b, t >= 0``.

:func:`solve_min_time` runs the two-phase revised simplex kernel;
:func:`enumerate_basic_solutions` is a brute-force oracle over all bases
that shares no code with it.
"""
from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import CapExceeded, DimensionMismatch, NumericalFailure
from .hamiltonian import ProblemVector
from .signs import SignMatrix

TOL_PIVOT = 1e-10
TOL_FEAS = 1e-9
TOL_OPT = 1e-9
SUPPORT_TOL = 1e-11


class Status(str, enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    NUMERICAL_FAILURE = "numerical_failure"


@dataclass(frozen=True)
class LpSolution:
    t: np.ndarray
    objective: float
    support: tuple[int, ...]
    status: Status
    residual: float
    duals: np.ndarray = field(repr=False)
    iterations: int = 0


def _as_arrays(M, b):
    if isinstance(M, SignMatrix):
        A = M.dense
        if isinstance(b, ProblemVector):
            if b.index != M.index:
                raise DimensionMismatch("problem vector and sign matrix rows differ")
            b = b.values
    else:
        A = np.asarray(M, dtype=float)
        if isinstance(b, ProblemVector):
            b = b.values
    b = np.asarray(b, dtype=float)
    if A.ndim != 2 or b.shape != (A.shape[0],):
        raise DimensionMismatch(f"matrix {A.shape} and vector {b.shape} do not match")
    return A, b


def solve_min_time(M: SignMatrix | np.ndarray, b: ProblemVector | np.ndarray, max_iter: int = 0) -> LpSolution:
    """Globally minimal ``sum(t)`` over nonnegative ``t`` with ``M t = b``.

    The result is a basic solution, so at most ``d`` times are nonzero.
    Optimality is re-checked here from the returned duals ``y``:
    ``1 - M.T @ y >= -1e-9`` and ``b @ y == sum(t)``.
    """
    A, b = _as_arrays(M, b)
    d, n = A.shape
    if not np.any(b):
        return LpSolution(np.zeros(n), 0.0, (), Status.OPTIMAL, 0.0, np.zeros(d))
    status, t, y, iterations = kernels.simplex_min_sum(
        A, b, tol_pivot=TOL_PIVOT, tol_feas=TOL_FEAS, tol_opt=TOL_OPT, max_iter=max_iter
    )
    if status == 1:
        return LpSolution(t, math.inf, (), Status.INFEASIBLE, math.inf, y, iterations)
    if status != 0:
        raise NumericalFailure(f"simplex stopped after {iterations} pivots without a certificate")
    t = np.where(t > SUPPORT_TOL, t, 0.0)
    residual = float(np.abs(A @ t - b).max())
    scale = max(1.0, float(np.abs(b).max()))
    objective = float(t.sum())
    if residual > 1e-8 * scale:
        raise NumericalFailure(f"primal residual {residual:.3e} exceeds tolerance")
    if float((1.0 - A.T @ y).min()) < -10 * TOL_OPT * max(1.0, float(np.abs(y).sum())):
        raise NumericalFailure("dual certificate violates reduced-cost tolerance")
    gap = abs(float(b @ y) - objective)
    if gap > 1e-8 * max(1.0, objective):
        raise NumericalFailure(f"duality gap {gap:.3e} exceeds tolerance")
    support = tuple(int(k) for k in np.flatnonzero(t))
    return LpSolution(t, objective, support, Status.OPTIMAL, residual, y, iterations)


def enumerate_basic_solutions(
    M: SignMatrix | np.ndarray, b: ProblemVector | np.ndarray, cap: int = 2_000_000, chunk: int = 4096
) -> float:
    """Minimal ``sum(t)`` over every feasible basic solution, by brute force.

    Each of the ``C(d', d)`` column subsets is solved as a square system; the
    entries of ``M`` are integers, so a basis is singular exactly when its
    determinant rounds to zero.
    """
    A, b = _as_arrays(M, b)
    d, n = A.shape
    total = math.comb(n, d)
    if total > cap:
        raise CapExceeded(f"{total} bases exceed the enumeration cap of {cap}")
    if not np.any(b):
        return 0.0
    feas_tol = 1e-9 * max(1.0, float(np.abs(b).max()))
    best = math.inf
    combos = itertools.combinations(range(n), d)
    while True:
        batch = np.array(list(itertools.islice(combos, chunk)), dtype=np.intp)
        if batch.size == 0:
            break
        bases = np.transpose(A[:, batch], (1, 0, 2))  # (chunk, d, d)
        regular = np.abs(np.linalg.det(bases)) > 0.5
        if not regular.any():
            continue
        x = np.linalg.solve(bases[regular], np.broadcast_to(b, (int(regular.sum()), d))[..., None])[..., 0]
        feasible = (x >= -feas_tol).all(axis=1)
        if feasible.any():
            best = min(best, float(x[feasible].sum(axis=1).min()))
    return best
