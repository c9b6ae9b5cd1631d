"""Independent checks that a schedule reproduces ``T * H_P``.

Nothing here touches the sign-matrix code: signs come from explicit 2x2
Pauli conjugation, and the dense checks build the full ``2**n`` operators.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass, field

import numpy as np

from .errors import CapExceeded, DimensionMismatch, WrongModel
from .hamiltonian import ModelKind, TwoBodyHamiltonian, coupling_index

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}
DENSE_CAP = 10


@dataclass
class VerificationReport:
    coupling_residual: float | None = None
    matrix_residual: float | None = None
    unitary_residual: float | None = None
    tolerances: dict = field(default_factory=dict)
    passed: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return bool(self.passed) and all(self.passed.values())

    def merge(self, other: "VerificationReport") -> "VerificationReport":
        out = VerificationReport(
            self.coupling_residual if other.coupling_residual is None else other.coupling_residual,
            self.matrix_residual if other.matrix_residual is None else other.matrix_residual,
            self.unitary_residual if other.unitary_residual is None else other.unitary_residual,
            {**self.tolerances, **other.tolerances},
            {**self.passed, **other.passed},
        )
        return out

    def to_dict(self) -> dict:
        return {
            "coupling_residual": self.coupling_residual,
            "matrix_residual": self.matrix_residual,
            "unitary_residual": self.unitary_residual,
            "tolerances": dict(self.tolerances),
            "passed": dict(self.passed),
            "ok": self.ok,
        }


@functools.lru_cache(maxsize=None)
def conjugation_sign(gate: str, axis: str) -> int:
    """``+1`` or ``-1`` such that ``G sigma G^dagger = sign * sigma``."""
    g, s = PAULI[gate], PAULI[axis.upper()]
    value = np.trace(g @ s @ g.conj().T @ s).real / 2
    return int(round(value))


def _check_inputs(schedule, hS, hP):
    for h in (hS, hP):
        if h.n != schedule.n or h.model is not schedule.model:
            raise DimensionMismatch(
                f"Hamiltonian ({h.n}, {h.model.value}) does not match schedule ({schedule.n}, {schedule.model.value})"
            )
    for layer, _ in schedule.blocks:
        if len(layer) != schedule.n:
            raise DimensionMismatch(f"layer {layer!r} does not cover {schedule.n} qubits")


def verify_couplings(schedule, hS: TwoBodyHamiltonian, hP: TwoBodyHamiltonian, tol: float | None = None) -> VerificationReport:
    """Max-norm of ``sum_k t_k sign_k * hS - T * hP`` over every coupling."""
    _check_inputs(schedule, hS, hP)
    target_scale = max(1.0, abs(schedule.T) * max((abs(v) for v in hP.couplings.values()), default=0.0))
    if tol is None:
        tol = 1e-8 * target_scale
    residual = 0.0
    for key in coupling_index(schedule.n, schedule.model):
        acc = 0.0
        source = hS[key]
        for layer, t in schedule.blocks:
            sign = conjugation_sign(layer[key.i - 1], key.mu) * conjugation_sign(layer[key.j - 1], key.nu)
            acc += t * sign * source
        residual = max(residual, abs(acc - schedule.T * hP[key]))
    return VerificationReport(
        coupling_residual=residual,
        tolerances={"coupling": tol},
        passed={"coupling": residual <= tol},
    )


def pauli_string(ops: dict[int, str], n: int) -> np.ndarray:
    """Dense ``2**n`` operator with Pauli ``ops[q]`` on qubit ``q`` (1-based)."""
    out = np.ones((1, 1), dtype=complex)
    for q in range(1, n + 1):
        out = np.kron(out, PAULI[ops.get(q, "I")])
    return out


def dense_hamiltonian(h: TwoBodyHamiltonian) -> np.ndarray:
    dim = 2**h.n
    H = np.zeros((dim, dim), dtype=complex)
    for key, value in h.couplings.items():
        if value == 0.0:
            continue
        H += value * pauli_string({key.i: key.mu.upper(), key.j: key.nu.upper()}, h.n)
    return H


def layer_operator(layer: str) -> np.ndarray:
    return pauli_string({q + 1: g for q, g in enumerate(layer)}, len(layer))


def matrix_oracle(schedule, hS, hP, cap: int = DENSE_CAP, rtol: float = 1e-8) -> VerificationReport:
    """Frobenius distance between ``sum_k t_k V_k H_S V_k^dagger`` and ``T H_P``."""
    _check_inputs(schedule, hS, hP)
    if schedule.n > cap:
        raise CapExceeded(f"dense check limited to {cap} qubits, got {schedule.n}")
    HS = dense_hamiltonian(hS)
    target = schedule.T * dense_hamiltonian(hP)
    acc = np.zeros_like(HS)
    for layer, t in schedule.blocks:
        V = layer_operator(layer)
        acc += t * (V @ HS @ V.conj().T)
    residual = float(np.linalg.norm(acc - target))
    tol = rtol * (1.0 + float(np.linalg.norm(target)))
    return VerificationReport(matrix_residual=residual, tolerances={"matrix": tol}, passed={"matrix": residual <= tol})


def zz_unitary_oracle(schedule, hS, hP, cap: int = DENSE_CAP, tol: float = 1e-8) -> VerificationReport:
    """Operator-norm distance of ``prod_k V_k^dagger e^{-i t_k H_S} V_k`` from ``e^{-i T H_P}``.

    ZZ Hamiltonians are diagonal, so every exponential is exact.
    """
    if schedule.model is not ModelKind.ZZ:
        raise WrongModel("the exact unitary check needs commuting ZZ couplings")
    _check_inputs(schedule, hS, hP)
    if schedule.n > cap:
        raise CapExceeded(f"dense check limited to {cap} qubits, got {schedule.n}")
    HS = dense_hamiltonian(hS)
    HP = dense_hamiltonian(hP)
    U = np.eye(2**schedule.n, dtype=complex)
    for layer, t in schedule.blocks:
        V = layer_operator(layer)
        U = V.conj().T @ np.diag(np.exp(-1j * t * np.diag(HS).real)) @ V @ U
    target = np.diag(np.exp(-1j * schedule.T * np.diag(HP).real))
    residual = float(np.linalg.norm(U - target, ord=2))
    return VerificationReport(unitary_residual=residual, tolerances={"unitary": tol}, passed={"unitary": residual <= tol})


def verify_all(schedule, hS, hP, cap: int = DENSE_CAP) -> VerificationReport:
    report = verify_couplings(schedule, hS, hP)
    if schedule.n <= cap:
        report = report.merge(matrix_oracle(schedule, hS, hP, cap=cap))
        if schedule.model is ModelKind.ZZ:
            report = report.merge(zz_unitary_oracle(schedule, hS, hP, cap=cap))
    return report
