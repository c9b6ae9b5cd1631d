"""Two-body Hamiltonians and the problem vector ``b = T * hP / hS``.

Qubits are numbered from 1. Couplings are ordered by qubit pair ``(i, j)``
and then, in the general model, by the axis pair in row-major order
``xx, xy, xz, yx, yy, yz, zx, zy, zz``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple

import numpy as np

from .errors import EmptyProblem, IncompatiblePair, InvalidSize, ParseError

AXES = ("x", "y", "z")
AXIS_PAIRS = tuple((mu, nu) for mu in AXES for nu in AXES)
AXIS_ORDER = ",".join(mu + nu for mu, nu in AXIS_PAIRS)


class ModelKind(str, enum.Enum):
    ZZ = "zz"
    GENERAL = "general"

    @classmethod
    def parse(cls, value: "ModelKind | str") -> "ModelKind":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ParseError(f"unknown model {value!r}; expected 'zz' or 'general'") from None


class CouplingKey(NamedTuple):
    i: int
    j: int
    mu: str = "z"
    nu: str = "z"

    def label(self) -> str:
        return f"{self.i}-{self.j}:{self.mu}{self.nu}"


def check_key(key: CouplingKey, n: int, model: ModelKind) -> None:
    if not (1 <= key.i < key.j <= n):
        raise ParseError(f"coupling {tuple(key)} needs 1 <= i < j <= {n}")
    if key.mu not in AXES or key.nu not in AXES:
        raise ParseError(f"coupling {tuple(key)} has an axis outside x, y, z")
    if model is ModelKind.ZZ and (key.mu, key.nu) != ("z", "z"):
        raise ParseError(f"coupling {tuple(key)} is not zz in the ZZ model")


def coupling_index(n: int, model: ModelKind | str) -> list[CouplingKey]:
    """Canonical row order of couplings for ``n`` qubits."""
    model = ModelKind.parse(model)
    if n < 2:
        raise InvalidSize(f"need at least 2 qubits, got {n}")
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    if model is ModelKind.ZZ:
        return [CouplingKey(i, j, "z", "z") for i, j in pairs]
    return [CouplingKey(i, j, mu, nu) for i, j in pairs for mu, nu in AXIS_PAIRS]


@dataclass(frozen=True)
class TwoBodyHamiltonian:
    """Sparse map from coupling key to real coefficient; absent keys are 0."""

    n: int
    model: ModelKind
    couplings: Mapping[CouplingKey, float] = field(default_factory=dict)

    def __post_init__(self):
        model = ModelKind.parse(self.model)
        object.__setattr__(self, "model", model)
        if self.n < 2:
            raise InvalidSize(f"need at least 2 qubits, got {self.n}")
        clean = {}
        for key, value in self.couplings.items():
            key = CouplingKey(*key)
            check_key(key, self.n, model)
            value = float(value)
            if not math.isfinite(value):
                raise ParseError(f"coupling {tuple(key)} is not finite")
            clean[key] = value
        object.__setattr__(self, "couplings", clean)

    def __getitem__(self, key) -> float:
        return self.couplings.get(CouplingKey(*key), 0.0)

    def vector(self, index: Iterable[CouplingKey] | None = None) -> np.ndarray:
        if index is None:
            index = coupling_index(self.n, self.model)
        return np.array([self[key] for key in index], dtype=float)

    @classmethod
    def from_vector(cls, n, model, values, index=None) -> "TwoBodyHamiltonian":
        model = ModelKind.parse(model)
        if index is None:
            index = coupling_index(n, model)
        values = np.asarray(values, dtype=float)
        if len(values) != len(index):
            raise InvalidSize(f"{len(values)} values for {len(index)} couplings")
        return cls(n, model, {k: float(v) for k, v in zip(index, values) if v != 0.0})

    @classmethod
    def uniform(cls, n, model, value=1.0) -> "TwoBodyHamiltonian":
        """All-to-all Hamiltonian with every coupling equal to ``value``."""
        return cls(n, model, {k: value for k in coupling_index(n, model)})


@dataclass(frozen=True, eq=False)
class ProblemVector:
    n: int
    model: ModelKind
    index: tuple[CouplingKey, ...]
    values: np.ndarray
    T: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "model", ModelKind.parse(self.model))
        object.__setattr__(self, "index", tuple(CouplingKey(*k) for k in self.index))
        values = np.array(self.values, dtype=float)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        if len(self.index) != len(values) or len(values) == 0:
            raise InvalidSize(f"index/values lengths {len(self.index)}/{len(values)}")

    @property
    def d(self) -> int:
        return len(self.values)

    def __eq__(self, other):
        if not isinstance(other, ProblemVector):
            return NotImplemented
        return (self.n, self.model, self.index, self.T) == (
            other.n, other.model, other.index, other.T
        ) and np.array_equal(self.values, other.values)

    def scaled(self, c: float) -> "ProblemVector":
        return ProblemVector(self.n, self.model, self.index, c * self.values, self.T)


def build_problem_vector(
    hP: TwoBodyHamiltonian, hS: TwoBodyHamiltonian, T: float = 1.0, zero_tol: float = 0.0
) -> ProblemVector:
    """Form ``b = T * hP / hS`` over the couplings that are not zero in both.

    A coupling that is zero in both Hamiltonians is dropped. One that is zero
    only in ``hS`` cannot be produced and raises :class:`IncompatiblePair`.
    Coefficients with ``|h| <= zero_tol`` count as zero.
    """
    if hP.n != hS.n or hP.model is not hS.model:
        raise IncompatiblePair(
            f"problem ({hP.n}, {hP.model.value}) and source ({hS.n}, {hS.model.value}) differ"
        )
    if not T >= 0:
        raise InvalidSize(f"T must be nonnegative, got {T}")
    index, values = [], []
    for key in coupling_index(hP.n, hP.model):
        p, s = hP[key], hS[key]
        p_zero, s_zero = abs(p) <= zero_tol, abs(s) <= zero_tol
        if s_zero and p_zero:
            continue
        if s_zero:
            raise IncompatiblePair(f"source coupling {key.label()} is zero but problem has {p}")
        index.append(key)
        values.append(0.0 if p_zero else T * p / s)
    if not index:
        raise EmptyProblem("every coupling is zero in both Hamiltonians")
    return ProblemVector(hP.n, hP.model, tuple(index), np.array(values), float(T))


def norms(b: ProblemVector | np.ndarray) -> tuple[float, float, float]:
    v = b.values if isinstance(b, ProblemVector) else np.asarray(b, dtype=float)
    if v.size == 0:
        return 0.0, 0.0, 0.0
    return float(np.abs(v).sum()), float(np.linalg.norm(v)), float(np.abs(v).max())
