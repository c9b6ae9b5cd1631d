"""Schedule synthesis, time bounds and worst-case problem construction."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import CapExceeded, InvalidProblem, WrongModel
from .hamiltonian import (
    CouplingKey,
    ModelKind,
    ProblemVector,
    TwoBodyHamiltonian,
    build_problem_vector,
    coupling_index,
    norms,
)
from .lp import solve_min_time
from .signs import DEFAULT_COLUMN_CAP, GateLayer, build_sign_matrix, restrict_rows

SQRT3 = math.sqrt(3.0)

WORST_SIGNS = ((-1, -1, -1), (-1, 1, 1), (1, -1, 1), (1, 1, -1))
WORST_AXIS_TRIPLES = (
    ("xx", "yy", "zz"),
    ("xx", "yz", "zy"),
    ("yy", "xz", "zx"),
    ("zz", "xy", "yx"),
    ("xy", "yz", "zx"),
    ("xz", "zy", "yx"),
)


@dataclass(frozen=True)
class Schedule:
    """Ordered digital-analog blocks ``(gate layer, analog time)``."""

    n: int
    model: ModelKind
    T: float
    blocks: tuple[tuple[GateLayer, float], ...]
    source: TwoBodyHamiltonian | None = None
    problem: TwoBodyHamiltonian | None = None

    def __post_init__(self):
        object.__setattr__(self, "model", ModelKind.parse(self.model))
        object.__setattr__(self, "blocks", tuple((str(g), float(t)) for g, t in self.blocks))
        for layer, time in self.blocks:
            if len(layer) != self.n:
                raise InvalidProblem(f"layer {layer!r} does not cover {self.n} qubits")
            if not time >= 0:
                raise InvalidProblem(f"negative block time {time}")

    @property
    def total_time(self) -> float:
        return math.fsum(t for _, t in self.blocks)

    @property
    def times(self) -> np.ndarray:
        return np.array([t for _, t in self.blocks])

    @property
    def layers(self) -> list[GateLayer]:
        return [g for g, _ in self.blocks]

    def with_times(self, times: Sequence[float]) -> "Schedule":
        blocks = tuple((g, float(t)) for (g, _), t in zip(self.blocks, times))
        return Schedule(self.n, self.model, self.T, blocks, self.source, self.problem)


@dataclass(frozen=True)
class BoundsReport:
    """Time bounds evaluated on ``b``, which already carries the factor ``T``.

    lower       ``||b||_inf``
    upper       ``sqrt(3) ||b||_2``
    legacy      ``2 ||b||_1``
    conjecture  ``||b||_inf * (n if n odd else n - 1)``
    """

    lower: float
    upper: float
    legacy: float
    conjecture: float
    achieved: float | None = None

    def sandwich_holds(self, tol: float = 1e-6) -> bool:
        if self.achieved is None:
            return True
        return self.lower - tol <= self.achieved <= self.upper + tol

    def to_dict(self) -> dict:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "legacy": self.legacy,
            "conjecture": self.conjecture,
            "achieved": self.achieved,
        }


def conjecture_factor(n: int) -> int:
    return n if n % 2 else n - 1


def bounds_report(b: ProblemVector | np.ndarray, n: int | None = None, achieved: float | None = None) -> BoundsReport:
    if n is None:
        if not isinstance(b, ProblemVector):
            raise InvalidProblem("qubit count required for a bare vector")
        n = b.n
    l1, l2, linf = norms(b)
    return BoundsReport(
        lower=linf,
        upper=SQRT3 * l2,
        legacy=2.0 * l1,
        conjecture=linf * conjecture_factor(n),
        achieved=achieved,
    )


def compile(
    hP: TwoBodyHamiltonian,
    hS: TwoBodyHamiltonian,
    T: float = 1.0,
    model: ModelKind | str | None = None,
    cap: int | None = DEFAULT_COLUMN_CAP,
    zero_tol: float = 0.0,
) -> Schedule:
    """Minimal-total-time schedule realizing ``exp(-i T H_P)`` from ``H_S``.

    Zero-time blocks are dropped, so the block count is at most the number of
    retained couplings.
    """
    if model is not None and ModelKind.parse(model) is not hP.model:
        raise WrongModel(f"Hamiltonians are {hP.model.value}, requested {ModelKind.parse(model).value}")
    b = build_problem_vector(hP, hS, T, zero_tol=zero_tol)
    M = build_sign_matrix(b.n, b.model, cap=cap)
    if len(b.index) != M.d:
        M = restrict_rows(M, b.index)
    sol = solve_min_time(M, b)
    blocks = tuple((M.layers[k], float(sol.t[k])) for k in sol.support)
    return Schedule(b.n, b.model, float(T), blocks, source=hS, problem=hP)


def _parse_signs(signs) -> tuple[int, int, int]:
    if isinstance(signs, str):
        signs = tuple(-1 if c == "-" else 1 if c == "+" else None for c in signs)
    signs = tuple(signs)
    if signs not in WORST_SIGNS:
        raise InvalidProblem(f"sign pattern {signs} is not one of {WORST_SIGNS}")
    return signs


def _normalize_triple(triple) -> tuple[str, str, str]:
    triple = tuple(str(p).lower() for p in triple)
    for listed in WORST_AXIS_TRIPLES:
        if len(triple) == 3 and sorted(triple) == sorted(listed):
            return triple
    raise InvalidProblem(f"axis triple {triple} is not a worst-case triple")


def worst_case_problem(n: int, model: ModelKind | str, support, signs=(-1, -1, -1), alpha: float = 1.0) -> ProblemVector:
    """Three-sparse problem vector whose optimal time is ``sqrt(3) ||b||_2``.

    ``support`` is a qubit triangle ``(i, j, k)``: the ``zz`` couplings on its
    three edges get the signs in edge order ``(i,j), (i,k), (j,k)``. In the
    general model it may instead be ``((i, j), ("xx", "yy", "zz"))``, a qubit
    pair with one of the six worst axis triples, signs applied in the order
    the triple is given.
    """
    model = ModelKind.parse(model)
    signs = _parse_signs(signs)
    if not alpha > 0:
        raise InvalidProblem(f"scale must be positive, got {alpha}")
    support = tuple(support)
    if len(support) == 3 and all(isinstance(q, (int, np.integer)) for q in support):
        i, j, k = sorted(int(q) for q in support)
        if len(set(support)) != 3 or i < 1 or k > n:
            raise InvalidProblem(f"triangle {support} needs three distinct qubits in 1..{n}")
        keys = [CouplingKey(i, j), CouplingKey(i, k), CouplingKey(j, k)]
    elif model is ModelKind.GENERAL and len(support) == 2:
        (i, j), triple = support
        i, j = int(i), int(j)
        if not 1 <= i < j <= n:
            raise InvalidProblem(f"pair {(i, j)} needs 1 <= i < j <= {n}")
        keys = [CouplingKey(i, j, p[0], p[1]) for p in _normalize_triple(triple)]
    else:
        raise InvalidProblem(f"support {support!r} is not valid for the {model.value} model")
    index = coupling_index(n, model)
    values = np.zeros(len(index))
    for key, s in zip(keys, signs):
        values[index.index(key)] = s * alpha
    return ProblemVector(n, model, index, values, 1.0)


def enumerate_worst_directions(n: int, model: ModelKind | str = ModelKind.ZZ, alpha: float = 1.0, max_n: int = 16) -> list[ProblemVector]:
    """All ``4 * C(n, 3)`` triangle worst cases of the ZZ model."""
    model = ModelKind.parse(model)
    if model is not ModelKind.ZZ:
        raise WrongModel("worst directions are enumerated for the ZZ model")
    if n > max_n:
        raise CapExceeded(f"n={n} exceeds the cap of {max_n}")
    if n < 3:
        return []
    return [
        worst_case_problem(n, model, tri, signs, alpha)
        for tri in itertools.combinations(range(1, n + 1), 3)
        for signs in WORST_SIGNS
    ]


def general_worst_problems(n: int, alpha: float = 1.0) -> list[ProblemVector]:
    """Every qubit pair with every worst axis triple and sign pattern (general model)."""
    return [
        worst_case_problem(n, ModelKind.GENERAL, ((i, j), triple), signs, alpha)
        for i, j in itertools.combinations(range(1, n + 1), 2)
        for triple in WORST_AXIS_TRIPLES
        for signs in WORST_SIGNS
    ]


@dataclass(frozen=True)
class GapRecord:
    values: np.ndarray = field(repr=False)
    source: str
    achieved: float
    conjecture: float
    ratio: float
    violates: bool


def gap_record(b: ProblemVector, source: str, achieved: float | None = None) -> GapRecord:
    if achieved is None:
        achieved = solve_min_time(build_sign_matrix(b.n, b.model, cap=None), b).objective
    bound = bounds_report(b).conjecture
    ratio = achieved / bound if bound > 0 else (math.inf if achieved > 0 else 1.0)
    return GapRecord(np.array(b.values), source, achieved, bound, ratio, ratio > 1 + 1e-9)


def conjecture_gap_search(
    n: int,
    model: ModelKind | str,
    samples: int,
    seed: int,
    kinds: Iterable[str] | None = None,
    include_structured: bool = True,
) -> list[GapRecord]:
    """Ratio of achieved time to the conjectured ``||b||_inf * (n or n-1)`` bound.

    Samples come from the sweep distributions; ratios above ``1 + 1e-9`` are
    flagged, not raised.
    """
    from .experiments import DEFAULT_KINDS, Distribution, instance_rng, sample

    model = ModelKind.parse(model)
    M = build_sign_matrix(n, model, cap=None)
    index = M.index
    records = []
    if include_structured:
        structured = [("all_minus_one", ProblemVector(n, model, index, -np.ones(M.d)))]
        if n >= 3:
            structured += [("worst_triangle", worst_case_problem(n, model, (1, 2, 3), s)) for s in WORST_SIGNS]
        if model is ModelKind.GENERAL:
            structured += [("worst_pair", worst_case_problem(n, model, ((1, 2), t))) for t in WORST_AXIS_TRIPLES]
        for source, b in structured:
            records.append(gap_record(b, source, solve_min_time(M, b).objective))
    radius = math.sqrt(M.d)
    for kind in kinds or DEFAULT_KINDS:
        dist = Distribution(kind, radius)
        for s in range(samples):
            values = sample(dist, M.d, instance_rng(seed, model, n, dist.kind, s))
            b = ProblemVector(n, model, index, values)
            records.append(gap_record(b, dist.kind.value, solve_min_time(M, b).objective))
    return records
