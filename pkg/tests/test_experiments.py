import io
import json
import math

import numpy as np
import pytest

from daqc.errors import CapExceeded, InvalidProblem
from daqc.experiments import (
    Distribution, Kind, evaluate, instance_rng, records_from_csv, records_to_csv, run_sweep, sample,
)


@pytest.mark.parametrize("kind", list(Kind))
@pytest.mark.parametrize("d", [1, 3, 10, 45])
def test_sample_radius(kind, d):
    dist = Distribution(kind, math.sqrt(d))
    for k in range(20):
        v = sample(dist, d, instance_rng(1, "zz", 3, kind, k))
        assert v.shape == (d,)
        assert np.linalg.norm(v) == pytest.approx(math.sqrt(d), rel=1e-12)


def test_sparse_axes_support():
    dist = Distribution("sparse_axes", 1.0)
    sizes = set()
    for k in range(300):
        v = sample(dist, 28, instance_rng(0, "zz", 8, "sparse_axes", k))
        nz = np.flatnonzero(v)
        sizes.add(len(nz))
        assert 1 <= len(nz) <= 6
        assert np.allclose(np.abs(v[nz]), np.abs(v[nz[0]]))
    assert sizes == set(range(1, 7))


def test_sparse_axes_small_dimension():
    v = sample(Distribution("sparse_axes", 1.0), 3, np.random.default_rng(0))
    assert np.count_nonzero(v) <= 3


def test_axes_without_noise_are_ternary():
    dist = Distribution("axes_perturbed", 1.0, half_width=0.0)
    for k in range(50):
        v = sample(dist, 10, instance_rng(2, "zz", 5, "axes_perturbed", k))
        nz = v[v != 0]
        assert np.allclose(np.abs(nz), np.abs(nz[0]))


def test_axes_noise_bounded():
    # with radius = norm of the unperturbed draw, noise stays within w per entry
    w = 0.1
    rng = np.random.default_rng(5)
    for _ in range(50):
        v = sample(Distribution("axes_perturbed", 1.0, half_width=w), 6, rng)
        base = np.round(v / np.abs(v).max())
        assert np.all(np.abs(v - base * np.abs(v).max()) <= 2 * w * np.abs(v).max() / (1 - w) + 1e-12)


def test_distribution_validation():
    with pytest.raises(InvalidProblem):
        Distribution("uniform_sphere", 0.0)
    with pytest.raises(InvalidProblem):
        Distribution("sparse_axes", 1.0, max_nonzeros=0)
    with pytest.raises(ValueError):
        Distribution("gaussian", 1.0)


def test_instance_rng_keys_differ():
    draws = {
        instance_rng(0, m, n, k, i).random()
        for m in ("zz", "general") for n in (3, 4) for k in Kind for i in (0, 1)
    }
    assert len(draws) == 2 * 2 * 3 * 2
    assert instance_rng(7, "zz", 3, "sparse_axes", 4).random() == instance_rng(7, "zz", 3, "sparse_axes", 4).random()


@pytest.mark.parametrize("model,n_max", [("zz", 6), ("general", 3)])
def test_sweep_bounds(model, n_max):
    n_min = 3 if model == "zz" else 2
    recs = run_sweep(model, n_min, n_max, 30, seed=3)
    assert len(recs) == 3 * (n_max - n_min + 1)
    for r in recs:
        assert r.lower == 1.0
        assert r.lower - 1e-9 <= r.min <= r.mean <= r.max <= r.upper + 1e-6


def test_worker_count_does_not_change_results():
    a_vals, a = evaluate("zz", 5, "uniform_sphere", 60, seed=11, workers=1, chunk=7)
    b_vals, b = evaluate("zz", 5, "uniform_sphere", 60, seed=11, workers=3, chunk=7)
    assert np.array_equal(a, b)
    assert all(np.array_equal(x, y) for x, y in zip(a_vals, b_vals))


def test_csv_round_trip_and_determinism():
    first = records_to_csv(run_sweep("zz", 3, 4, 20, seed=9))
    second = records_to_csv(run_sweep("zz", 3, 4, 20, seed=9))
    assert first == second
    assert first.splitlines()[0] == "model,n,distribution,samples,min,mean,max,lower,upper,seed"
    assert records_to_csv(records_from_csv(first)) == first


def test_jsonl_dump():
    buf = io.StringIO()
    recs = run_sweep("zz", 3, 3, 5, kinds=["sparse_axes"], seed=1, jsonl=buf)
    lines = [json.loads(l) for l in buf.getvalue().splitlines()]
    assert len(lines) == 5
    assert max(l["achieved"] for l in lines) == recs[0].max


def test_sweep_caps():
    with pytest.raises(CapExceeded):
        run_sweep("general", 2, 6, 1)
    with pytest.raises(InvalidProblem):
        run_sweep("zz", 3, 3, 0)
