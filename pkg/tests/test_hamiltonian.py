import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from daqc.errors import EmptyProblem, IncompatiblePair, InvalidSize, ParseError
from daqc.hamiltonian import (
    CouplingKey,
    ModelKind,
    ProblemVector,
    TwoBodyHamiltonian,
    build_problem_vector,
    coupling_index,
    norms,
)


def test_zz_index_three_qubits():
    assert [(k.i, k.j) for k in coupling_index(3, "zz")] == [(1, 2), (1, 3), (2, 3)]


def test_zz_index_two_qubits():
    assert coupling_index(2, ModelKind.ZZ) == [CouplingKey(1, 2, "z", "z")]


def test_general_index_diagonal_positions():
    index = coupling_index(2, "general")
    assert len(index) == 9
    # 1-based positions 1, 5, 9 carry xx, yy, zz
    assert index[0] == CouplingKey(1, 2, "x", "x")
    assert index[4] == CouplingKey(1, 2, "y", "y")
    assert index[8] == CouplingKey(1, 2, "z", "z")
    assert [k.mu + k.nu for k in index] == ["xx", "xy", "xz", "yx", "yy", "yz", "zx", "zy", "zz"]


@pytest.mark.parametrize("n", [2, 3, 5, 7])
@pytest.mark.parametrize("model", list(ModelKind))
def test_index_strictly_ordered(n, model):
    index = coupling_index(n, model)
    assert index == sorted(index) and len(set(index)) == len(index)
    per_pair = 1 if model is ModelKind.ZZ else 9
    assert len(index) == per_pair * n * (n - 1) // 2


def test_index_rejects_single_qubit():
    with pytest.raises(InvalidSize):
        coupling_index(1, "zz")


def test_identity_ratio():
    h = TwoBodyHamiltonian.uniform(4, "zz")
    b = build_problem_vector(h, h, 1.0)
    assert b.index == tuple(coupling_index(4, "zz"))
    np.testing.assert_array_equal(b.values, np.ones(6))


def test_missing_source_coupling_is_incompatible():
    hS = TwoBodyHamiltonian(3, "zz", {(1, 3): 1.0, (2, 3): 1.0})
    hP = TwoBodyHamiltonian.uniform(3, "zz")
    with pytest.raises(IncompatiblePair):
        build_problem_vector(hP, hS, 1.0)


def test_doubly_zero_coupling_removed():
    hS = TwoBodyHamiltonian(3, "zz", {(1, 3): 2.0, (2, 3): 1.0})
    hP = TwoBodyHamiltonian(3, "zz", {(1, 3): 1.0, (2, 3): -3.0})
    b = build_problem_vector(hP, hS, 2.0)
    assert [(k.i, k.j) for k in b.index] == [(1, 3), (2, 3)]
    np.testing.assert_allclose(b.values, [1.0, -6.0])


def test_all_removed_is_empty():
    h = TwoBodyHamiltonian(3, "zz", {})
    with pytest.raises(EmptyProblem):
        build_problem_vector(h, h)


def test_zero_threshold():
    hS = TwoBodyHamiltonian.uniform(2, "zz", 1e-14)
    hP = TwoBodyHamiltonian.uniform(2, "zz", 1e-15)
    assert build_problem_vector(hP, hS).d == 1
    with pytest.raises(EmptyProblem):
        build_problem_vector(hP, hS, zero_tol=1e-12)


def test_model_mismatch():
    with pytest.raises(IncompatiblePair):
        build_problem_vector(TwoBodyHamiltonian.uniform(2, "zz"), TwoBodyHamiltonian.uniform(2, "general"))


def test_zz_rejects_other_axes():
    with pytest.raises(ParseError):
        TwoBodyHamiltonian(2, "zz", {(1, 2, "x", "z"): 1.0})
    with pytest.raises(ParseError):
        TwoBodyHamiltonian(3, "zz", {(2, 1): 1.0})


@pytest.mark.parametrize(
    "values, expected",
    [
        ([-1, -1, -1], (3, math.sqrt(3), 1)),
        ([1, 0, 0], (1, 1, 1)),
        ([-1, 0, 0, 0, -1, 0, 0, 0, -1], (3, math.sqrt(3), 1)),
    ],
)
def test_norms(values, expected):
    np.testing.assert_allclose(norms(np.array(values, float)), expected)


coefficients = st.floats(min_value=-10, max_value=10, allow_nan=False).filter(lambda v: abs(v) > 1e-3)


@settings(max_examples=60, deadline=None)
@given(
    st.lists(coefficients, min_size=6, max_size=6),
    st.lists(coefficients, min_size=6, max_size=6),
    st.floats(min_value=0, max_value=5),
    st.floats(min_value=0, max_value=5),
)
def test_scaling_and_elementwise(p, s, T, c):
    hP = TwoBodyHamiltonian.from_vector(4, "zz", p)
    hS = TwoBodyHamiltonian.from_vector(4, "zz", s)
    b = build_problem_vector(hP, hS, T)
    np.testing.assert_allclose(build_problem_vector(hP, hS, c * T).values, c * b.values, rtol=1e-12, atol=1e-12)
    for key, v in zip(b.index, b.values):
        assert v * hS[key] == pytest.approx(T * hP[key], rel=1e-12, abs=1e-12)


def test_problem_vector_equality_and_scaling():
    b = ProblemVector(3, "zz", coupling_index(3, "zz"), [1.0, -2.0, 0.5])
    assert b == ProblemVector(3, "zz", coupling_index(3, "zz"), [1.0, -2.0, 0.5])
    np.testing.assert_allclose(b.scaled(2).values, [2, -4, 1])
