"""Facets of ``conv(columns of M)``, its inradius about the origin, and the
problems sitting at the facet points closest to the origin.

Facets are enumerated with the double description method on the polar:
a facet ``a.x <= c`` of the hull is an extreme ray ``(a, c)`` of the cone
``{(a, c): p.a - c <= 0 for every point p, c >= 0}``. Integer point sets
are handled in exact int64 arithmetic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .errors import CapExceeded, DegenerateHull, InvalidProblem
from .hamiltonian import ProblemVector
from .lp import solve_min_time
from .signs import SignMatrix

DEFAULT_RAY_CAP = 200_000
FLOAT_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class FacetSet:
    """H-representation ``normals @ x <= offsets`` with per-facet vertex incidence."""

    dim: int
    normals: np.ndarray
    offsets: np.ndarray
    incidence: tuple[tuple[int, ...], ...]

    def __len__(self):
        return len(self.offsets)

    def __eq__(self, other):
        if not isinstance(other, FacetSet):
            return NotImplemented
        return (
            self.dim == other.dim
            and self.incidence == other.incidence
            and np.array_equal(self.normals, other.normals)
            and np.array_equal(self.offsets, other.offsets)
        )

    @property
    def distances(self) -> np.ndarray:
        return self.offsets / np.linalg.norm(self.normals.astype(float), axis=1)

    def contains(self, x, tol: float = 1e-9) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(np.all(self.normals @ x <= self.offsets + tol))


def _points(M) -> np.ndarray:
    P = M.entries if isinstance(M, SignMatrix) else np.asarray(M)
    if P.ndim != 2:
        raise InvalidProblem("points must be given as a (dim x count) array")
    return P


def _exact_rays(A0: np.ndarray) -> np.ndarray:
    """Integer columns ``r_i`` with ``A0 r_i = -c_i e_i`` (``c_i > 0``)."""
    D = A0.shape[0]
    aug = [[Fraction(int(v)) for v in row] + [Fraction(-int(i == j)) for j in range(D)] for i, row in enumerate(A0)]
    for col in range(D):
        piv = next(r for r in range(col, D) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for r in range(D):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    rays = np.zeros((D, D), dtype=np.int64)
    for i in range(D):
        col = [aug[r][D + i] for r in range(D)]
        lcm = math.lcm(*(v.denominator for v in col))
        ints = [int(v * lcm) for v in col]
        g = math.gcd(*ints)
        rays[i] = [v // g for v in ints]
    return rays


def _normalize_int(R: np.ndarray) -> np.ndarray:
    g = np.gcd.reduce(np.abs(R), axis=1)
    g[g == 0] = 1
    R = R // g[:, None]
    if np.abs(R).max(initial=0) > 2**40:
        raise CapExceeded("integer growth in facet enumeration")
    return R


def facet_enumeration(M, cap: int = DEFAULT_RAY_CAP) -> FacetSet:
    """Complete, irredundant facet list of the convex hull of the columns of ``M``.

    ``M`` is a :class:`SignMatrix` or a ``(dim, count)`` array of points. The
    origin must lie strictly inside the hull. ``cap`` bounds the number of
    intermediate rays.
    """
    P = _points(M)
    d, v = P.shape
    exact = np.issubdtype(P.dtype, np.integer) or np.array_equal(P, np.round(P))
    if np.linalg.matrix_rank(P.astype(float)) < d:
        raise DegenerateHull(f"{v} points do not span R^{d}")
    D = d + 1
    # constraint rows: p.a - c <= 0 for each point, then -c <= 0
    A = np.zeros((v + 1, D), dtype=np.int64 if exact else float)
    A[:v, :d] = P.T
    A[:v, d] = -1
    A[v, d] = -1
    order = [v] + list(range(v))
    basis, rank = [], 0
    for k in order:
        if np.linalg.matrix_rank(A[basis + [k]].astype(float)) > rank:
            basis.append(k)
            rank += 1
        if rank == D:
            break
    if rank < D:
        raise DegenerateHull("constraint system is not pointed")
    if exact:
        R = _exact_rays(A[basis])
    else:
        R = -np.linalg.inv(A[basis]).T
        R /= np.abs(R).max(axis=1, keepdims=True)
    K = v + 1
    Z = np.zeros((D, K), dtype=bool)
    vals0 = R @ A[basis].T
    for c, k in enumerate(basis):
        Z[:, k] = np.abs(vals0[:, c]) <= (0 if exact else FLOAT_TOL)
    for k in (k for k in order if k not in basis):
        a = A[k]
        vals = R @ a
        if exact:
            zero = vals == 0
        else:
            zero = np.abs(vals) <= FLOAT_TOL * np.linalg.norm(a)
            vals = np.where(zero, 0.0, vals)
        plus = np.flatnonzero(vals > 0)
        minus = np.flatnonzero(vals < 0)
        Z[zero, k] = True
        if plus.size == 0:
            continue
        pp, mm = kernels.dd_adjacent_pairs(Z, plus, minus, D - 2)
        new = vals[pp, None] * R[mm] - vals[mm, None] * R[pp]
        if exact:
            new = _normalize_int(new)
        else:
            new /= np.abs(new).max(axis=1, keepdims=True)
        newZ = Z[pp] & Z[mm]
        newZ[:, k] = True
        keep = vals <= 0
        R = np.vstack([R[keep], new])
        Z = np.vstack([Z[keep], newZ])
        if len(R) > cap:
            raise CapExceeded(f"{len(R)} intermediate rays exceed the cap of {cap}")
    normals, offsets = R[:, :d], R[:, d]
    if np.any(offsets <= (0 if exact else FLOAT_TOL)):
        raise DegenerateHull("origin is not strictly inside the hull")
    if not exact:
        normals = normals / offsets[:, None]
        offsets = np.ones(len(offsets))
    order = sorted(range(len(offsets)), key=lambda f: (tuple(normals[f]), offsets[f]))
    normals, offsets = normals[order], offsets[order]
    lhs = normals @ P
    if exact:
        incidence = tuple(tuple(int(c) for c in np.flatnonzero(row == off)) for row, off in zip(lhs, offsets))
    else:
        incidence = tuple(
            tuple(int(c) for c in np.flatnonzero(np.abs(row - off) <= FLOAT_TOL)) for row, off in zip(lhs, offsets)
        )
    return FacetSet(d, normals, offsets, incidence)


def validate(f: FacetSet, M, tol: float = 1e-9) -> bool:
    """Every point inside every halfspace and every facet spanned by its vertices."""
    P = _points(M).astype(float)
    if np.any(f.normals @ P > f.offsets[:, None] + tol):
        return False
    for inc in f.incidence:
        if len(inc) < f.dim or np.linalg.matrix_rank(P[:, list(inc)]) < f.dim:
            return False
    return True


def inradius(f: FacetSet) -> float:
    """Distance from the origin to the nearest facet hyperplane."""
    if len(f) == 0:
        raise InvalidProblem("empty facet set")
    return float(f.distances.min())


@dataclass(frozen=True)
class FacetProblem:
    facet: int
    distance: float
    values: np.ndarray
    objective: float


def facet_center_problems(f: FacetSet, M, radius: float | None = None) -> list[FacetProblem]:
    """Solve the problem at each facet's closest point to the origin.

    The foot of the perpendicular, ``offset / |a|^2 * a``, is rescaled to
    ``radius`` (default ``sqrt(dim)``, the column norm of a sign matrix).
    """
    if radius is None:
        radius = math.sqrt(f.dim)
    normals = f.normals.astype(float)
    out = []
    for k, (a, c) in enumerate(zip(normals, f.offsets)):
        foot = (float(c) / float(a @ a)) * a
        b = foot * (radius / np.linalg.norm(foot))
        if isinstance(M, SignMatrix):
            objective = solve_min_time(M, ProblemVector(M.n, M.model, M.index, b)).objective
        else:
            objective = solve_min_time(np.asarray(M, dtype=float), b).objective
        out.append(FacetProblem(k, float(f.distances[k]), b, objective))
    return out


def gauge(M, b) -> float:
    """Minimal total time for ``b``; equals ``|b| / |b~|`` with ``b~`` the
    boundary point on the ray through ``b``."""
    values = b.values if isinstance(b, ProblemVector) else np.asarray(b, dtype=float)
    if not np.any(values):
        raise InvalidProblem("gauge of the zero vector")
    A = M if isinstance(M, SignMatrix) else np.asarray(M, dtype=float)
    if isinstance(M, SignMatrix) and not isinstance(b, ProblemVector):
        b = ProblemVector(M.n, M.model, M.index, values)
    return solve_min_time(A, b).objective
