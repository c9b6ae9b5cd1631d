"""Gate layers and the ±1 sign matrix ``M``.

Sandwiching an analog block between Pauli gates flips the sign of every
coupling term whose Pauli anticommutes with the gate. Column ``k`` of ``M``
holds the effective sign of every coupling under gate layer ``k``.

A gate layer is a string with one letter per qubit, e.g. ``"IXZI"``.
"""
from __future__ import annotations

import functools
import io
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import EmptySelection, InvalidSize, SizeCapExceeded
from .hamiltonian import AXES, CouplingKey, ModelKind, coupling_index

GateLayer = str

DEFAULT_COLUMN_CAP = 4**7

_GATES = {ModelKind.ZZ: "IX", ModelKind.GENERAL: "IXYZ"}


def single_sign(gate: str, axis: str) -> int:
    """Sign picked up by ``sigma^axis`` under conjugation by ``gate``."""
    if gate == "I" or gate.lower() == axis:
        return 1
    return -1


def layer_sign(layer: GateLayer, c: CouplingKey) -> int:
    if len(layer) < c.j:
        raise InvalidSize(f"layer {layer!r} is shorter than qubit {c.j}")
    return single_sign(layer[c.i - 1], c.mu) * single_sign(layer[c.j - 1], c.nu)


def enumerate_layers(n: int, model: ModelKind | str) -> list[GateLayer]:
    """All distinct gate layers, identity first, then lexicographic.

    In the ZZ model a layer and its I<->X complement give the same column, so
    only layers with ``I`` on qubit 1 are kept (``2**(n-1)`` of them).
    """
    model = ModelKind.parse(model)
    if n < 2:
        raise InvalidSize(f"need at least 2 qubits, got {n}")
    gates = _GATES[model]
    layers = [""]
    for _ in range(n):
        layers = [prefix + g for prefix in layers for g in gates]
    if model is ModelKind.ZZ:
        layers = [layer for layer in layers if layer[0] == "I"]
    return layers


def _axis_signs(layers: Sequence[GateLayer], n: int) -> np.ndarray:
    """Table ``U[q, a, k]`` = single_sign(layers[k][q], AXES[a])."""
    codes = np.array([[("IXYZ".index(g)) for g in layer] for layer in layers], dtype=np.int8)
    # rows: gate I, X, Y, Z; columns: axis x, y, z
    table = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], dtype=np.int8)
    return np.transpose(table[codes], (1, 2, 0)).reshape(n, 3, len(layers))


@dataclass(frozen=True, eq=False)
class SignMatrix:
    n: int
    model: ModelKind
    index: tuple[CouplingKey, ...]
    layers: tuple[GateLayer, ...]
    entries: np.ndarray

    def __post_init__(self):
        entries = np.array(self.entries, dtype=np.int8)
        if entries.shape != (len(self.index), len(self.layers)):
            raise InvalidSize(
                f"entries shape {entries.shape} for {len(self.index)} rows, {len(self.layers)} columns"
            )
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "index", tuple(self.index))
        object.__setattr__(self, "layers", tuple(self.layers))

    @property
    def d(self) -> int:
        return self.entries.shape[0]

    @property
    def n_columns(self) -> int:
        return self.entries.shape[1]

    @functools.cached_property
    def dense(self) -> np.ndarray:
        """Float64 copy used by the solvers."""
        a = self.entries.astype(np.float64)
        a.setflags(write=False)
        return a

    def __eq__(self, other):
        if not isinstance(other, SignMatrix):
            return NotImplemented
        return (self.n, self.model, self.index, self.layers) == (
            other.n, other.model, other.index, other.layers
        ) and np.array_equal(self.entries, other.entries)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("coupling," + ",".join(self.layers) + "\n")
        for key, row in zip(self.index, self.entries):
            buf.write(key.label() + "," + ",".join(str(int(v)) for v in row) + "\n")
        return buf.getvalue()


@dataclass(frozen=True)
class RecursionBlocks:
    """Sign blocks of the couplings added with the last qubit.

    ``blocks[g]`` is the block for the gate ``gates[g]`` on the new qubit;
    rows are the new couplings in canonical order, columns follow ``base``.
    """

    gates: str
    new_index: tuple[CouplingKey, ...]
    blocks: tuple[np.ndarray, ...]
    base: SignMatrix


def _sign_entries(n, model, index, layers) -> np.ndarray:
    u = _axis_signs(layers, n)
    ii = np.array([k.i - 1 for k in index])
    jj = np.array([k.j - 1 for k in index])
    mu = np.array([AXES.index(k.mu) for k in index])
    nu = np.array([AXES.index(k.nu) for k in index])
    return u[ii, mu, :] * u[jj, nu, :]


def _check_cap(n, model, cap):
    count = 2 ** (n - 1) if model is ModelKind.ZZ else 4**n
    if cap is not None and count > cap:
        raise SizeCapExceeded(f"{count} gate layers exceed the cap of {cap}")


@functools.lru_cache(maxsize=32)
def _build_cached(n: int, model: ModelKind) -> SignMatrix:
    index = coupling_index(n, model)
    layers = enumerate_layers(n, model)
    return SignMatrix(n, model, index, layers, _sign_entries(n, model, index, layers))


def build_sign_matrix(n: int, model: ModelKind | str, cap: int | None = DEFAULT_COLUMN_CAP) -> SignMatrix:
    """Sign matrix with rows in canonical coupling order and one column per layer."""
    model = ModelKind.parse(model)
    if n < 2:
        raise InvalidSize(f"need at least 2 qubits, got {n}")
    _check_cap(n, model, cap)
    return _build_cached(n, model)


def build_sign_matrix_recursive(
    n: int, model: ModelKind | str, cap: int | None = DEFAULT_COLUMN_CAP
) -> tuple[SignMatrix, RecursionBlocks]:
    """Grow ``M`` one qubit at a time from the two-qubit base.

    Each step stacks ``[L_g ; M(m)]`` for every gate ``g`` the new qubit can
    carry (``I, X`` in the ZZ model, ``I, X, Y, Z`` otherwise), where ``L_g``
    holds the signs of the couplings to the new qubit.
    """
    model = ModelKind.parse(model)
    if n < 3:
        raise InvalidSize(f"recursive construction starts at 3 qubits, got {n}")
    _check_cap(n, model, cap)
    gates = _GATES[model]
    base = build_sign_matrix(2, model, cap=None)
    blocks = None
    for m in range(2, n):
        new_index = tuple(k for k in coupling_index(m + 1, model) if k.j == m + 1)
        # signs of qubit i on axis mu for every base column
        u_old = _axis_signs(base.layers, m)
        l_blocks = []
        for g in gates:
            block = np.empty((len(new_index), base.n_columns), dtype=np.int8)
            for r, key in enumerate(new_index):
                block[r] = u_old[key.i - 1, AXES.index(key.mu)] * single_sign(g, key.nu)
            l_blocks.append(block)
        stacked = np.vstack([np.hstack(l_blocks), np.hstack([base.entries] * len(gates))])
        block_rows = list(new_index) + list(base.index)
        full_index = coupling_index(m + 1, model)
        order = [block_rows.index(k) for k in full_index]
        layers = [layer + g for g in gates for layer in base.layers]
        blocks = RecursionBlocks(gates, new_index, tuple(l_blocks), base)
        base = SignMatrix(m + 1, model, full_index, layers, stacked[order])
    return base, blocks


def column_multiset(entries: np.ndarray) -> list[tuple[int, ...]]:
    return sorted(tuple(int(v) for v in col) for col in np.asarray(entries).T)


def restrict_rows(M: SignMatrix, kept: Iterable[CouplingKey]) -> SignMatrix:
    """Keep only the rows in ``kept`` and merge columns that became identical.

    The first layer of each group of duplicate columns is the one retained.
    """
    kept = {CouplingKey(*k) for k in kept}
    if not kept:
        raise EmptySelection("no rows selected")
    missing = kept.difference(M.index)
    if missing:
        raise EmptySelection(f"rows not in matrix: {sorted(missing)}")
    rows = [r for r, key in enumerate(M.index) if key in kept]
    sub = M.entries[rows]
    _, first = np.unique(sub, axis=1, return_index=True)
    cols = np.sort(first)
    return SignMatrix(
        M.n,
        M.model,
        [M.index[r] for r in rows],
        [M.layers[c] for c in cols],
        sub[:, cols],
    )
