"""Randomized sweeps of the optimal total time over problem distributions.

Every sample draws from its own generator seeded by
``(seed, model, n, distribution, sample index)``, so results do not depend
on how samples are split across worker processes.
"""
from __future__ import annotations

import csv
import enum
import io
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import CapExceeded, InvalidProblem
from .hamiltonian import ModelKind
from .lp import solve_min_time
from .signs import build_sign_matrix

SQRT3 = math.sqrt(3.0)
CSV_COLUMNS = ("model", "n", "distribution", "samples", "min", "mean", "max", "lower", "upper", "seed")
SIZE_CAPS = {ModelKind.ZZ: 10, ModelKind.GENERAL: 5}


class Kind(str, enum.Enum):
    UNIFORM_SPHERE = "uniform_sphere"
    AXES_PERTURBED = "axes_perturbed"
    SPARSE_AXES = "sparse_axes"


DEFAULT_KINDS = tuple(Kind)
_KIND_CODE = {k: c for c, k in enumerate(Kind)}
_MODEL_CODE = {ModelKind.ZZ: 0, ModelKind.GENERAL: 1}


@dataclass(frozen=True)
class Distribution:
    kind: Kind
    radius: float
    half_width: float = 0.1
    max_nonzeros: int = 6

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        if not self.radius > 0:
            raise InvalidProblem(f"radius must be positive, got {self.radius}")
        if self.half_width < 0:
            raise InvalidProblem(f"negative perturbation half-width {self.half_width}")
        if self.max_nonzeros < 1:
            raise InvalidProblem(f"max_nonzeros must be at least 1, got {self.max_nonzeros}")


def instance_rng(seed: int, model, n: int, kind, index: int) -> np.random.Generator:
    key = (_MODEL_CODE[ModelKind.parse(model)], int(n), _KIND_CODE[Kind(kind)], int(index))
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=key))


def sample(dist: Distribution, d: int, rng: np.random.Generator) -> np.ndarray:
    """One problem vector of length ``d`` with 2-norm ``dist.radius``.

    uniform_sphere: normalized standard normal.
    axes_perturbed: entries uniform over {-1, 0, 1} (all-zero redrawn),
        plus uniform noise in ``[-w, w]`` on every entry.
    sparse_axes: ``k`` entries of ±1 with ``k`` uniform in ``1..max_nonzeros``.
    """
    if d < 1:
        raise InvalidProblem("dimension must be positive")
    if dist.kind is Kind.UNIFORM_SPHERE:
        v = rng.standard_normal(d)
        while not np.any(v):
            v = rng.standard_normal(d)
    elif dist.kind is Kind.AXES_PERTURBED:
        v = rng.integers(-1, 2, size=d).astype(float)
        while not np.any(v):
            v = rng.integers(-1, 2, size=d).astype(float)
        if dist.half_width > 0:
            v = v + rng.uniform(-dist.half_width, dist.half_width, size=d)
    else:
        k = int(rng.integers(1, min(dist.max_nonzeros, d) + 1))
        v = np.zeros(d)
        v[rng.choice(d, size=k, replace=False)] = rng.choice((-1.0, 1.0), size=k)
    return v * (dist.radius / np.linalg.norm(v))


@dataclass(frozen=True)
class ExperimentRecord:
    model: ModelKind
    n: int
    distribution: Kind
    samples: int
    min: float
    mean: float
    max: float
    lower: float
    upper: float
    seed: int
    wall_time: float = 0.0

    def csv_row(self) -> list[str]:
        return [
            self.model.value, str(self.n), self.distribution.value, str(self.samples),
            repr(self.min), repr(self.mean), repr(self.max), repr(self.lower), repr(self.upper), str(self.seed),
        ]


def _solve_chunk(args):
    model, n, kind, seed, start, stop, half_width, max_nonzeros = args
    M = build_sign_matrix(n, model, cap=None)
    dist = Distribution(kind, math.sqrt(M.d), half_width, max_nonzeros)
    out = []
    for s in range(start, stop):
        b = sample(dist, M.d, instance_rng(seed, model, n, kind, s))
        out.append((s, b, solve_min_time(M, b).objective))
    return out


def evaluate(model, n: int, kind, samples: int, seed: int, workers: int = 1,
             half_width: float = 0.1, max_nonzeros: int = 6, chunk: int = 100):
    """Solve ``samples`` draws; returns ``(values, achieved)`` ordered by sample index."""
    model = ModelKind.parse(model)
    kind = Kind(kind)
    tasks = [
        (model, n, kind, seed, s, min(s + chunk, samples), half_width, max_nonzeros)
        for s in range(0, samples, chunk)
    ]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_solve_chunk, tasks))
    else:
        parts = [_solve_chunk(t) for t in tasks]
    rows = sorted((r for part in parts for r in part), key=lambda r: r[0])
    return [r[1] for r in rows], np.array([r[2] for r in rows])


def run_sweep(
    model,
    n_min: int,
    n_max: int,
    samples: int,
    kinds: Iterable = DEFAULT_KINDS,
    seed: int = 0,
    workers: int = 1,
    jsonl: io.TextIOBase | None = None,
    size_caps: dict | None = None,
) -> list[ExperimentRecord]:
    """Per-``n`` min/mean/max of the optimal time at radius ``sqrt(d)``.

    Under that normalization the lower bound is 1 and the upper bound is
    ``sqrt(3 d)``.
    """
    model = ModelKind.parse(model)
    cap = (size_caps or SIZE_CAPS)[model]
    if n_max > cap:
        raise CapExceeded(f"{model.value} sweeps are capped at n={cap}, got {n_max}")
    if samples < 1:
        raise InvalidProblem("need at least one sample")
    records = []
    for n in range(n_min, n_max + 1):
        d = build_sign_matrix(n, model, cap=None).d
        for kind in kinds:
            kind = Kind(kind)
            t0 = time.perf_counter()
            values, achieved = evaluate(model, n, kind, samples, seed, workers)
            if jsonl is not None:
                for s, (b, a) in enumerate(zip(values, achieved)):
                    jsonl.write(json.dumps({
                        "model": model.value, "n": n, "distribution": kind.value,
                        "sample": s, "b": b.tolist(), "achieved": float(a),
                    }) + "\n")
            records.append(ExperimentRecord(
                model, n, kind, samples,
                float(achieved.min()), math.fsum(achieved) / len(achieved), float(achieved.max()),
                1.0, SQRT3 * math.sqrt(d), int(seed), time.perf_counter() - t0,
            ))
    return records


def records_to_csv(records: Sequence[ExperimentRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for rec in records:
        writer.writerow(rec.csv_row())
    return buf.getvalue()


def records_from_csv(text: str) -> list[ExperimentRecord]:
    rows = list(csv.DictReader(io.StringIO(text)))
    return [
        ExperimentRecord(
            ModelKind.parse(r["model"]), int(r["n"]), Kind(r["distribution"]), int(r["samples"]),
            float(r["min"]), float(r["mean"]), float(r["max"]), float(r["lower"]), float(r["upper"]),
            int(r["seed"]),
        )
        for r in rows
    ]
