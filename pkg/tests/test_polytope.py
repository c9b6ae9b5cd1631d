import itertools
import math

import numpy as np
import pytest
from scipy.spatial import ConvexHull

from daqc.errors import CapExceeded, DegenerateHull
from daqc.hamiltonian import ProblemVector
from daqc.polytope import facet_center_problems, facet_enumeration, gauge, inradius, validate
from daqc.signs import build_sign_matrix

SQUARE = np.array([[1, 1, -1, -1], [1, -1, 1, -1]])
INV_SQRT3 = 1 / math.sqrt(3)


def brute_force_facets(P):
    """Oracle: every d-subset spanning a supporting hyperplane, deduplicated."""
    d, v = P.shape
    found = set()
    for subset in itertools.combinations(range(v), d):
        A = P[:, subset].T.astype(float)
        if abs(np.linalg.det(A)) < 1e-9:
            continue
        a = np.linalg.solve(A, np.ones(d))  # hyperplane a.x = 1 through the subset
        vals = a @ P
        if np.all(vals <= 1 + 1e-9):
            found.add(tuple(np.round(a, 9)))
    return found


def test_square_fixture(backend):
    f = facet_enumeration(SQUARE)
    assert len(f) == 4
    assert inradius(f) == 1.0
    assert validate(f, SQUARE)


def test_scaled_float_square():
    f = facet_enumeration(0.25 * SQUARE)
    assert len(f) == 4 and inradius(f) == pytest.approx(0.25)


def test_tetrahedron(backend):
    M = build_sign_matrix(3, "zz")
    f = facet_enumeration(M)
    assert len(f) == 4
    assert inradius(f) == pytest.approx(INV_SQRT3, abs=1e-12)
    # plane x + y + z = -1 through the three non-identity columns
    k = [tuple(a) for a in f.normals].index((-1, -1, -1))
    assert f.offsets[k] == 1
    assert f.incidence[k] == (1, 2, 3)


@pytest.mark.parametrize("n,model,count", [(3, "zz", 4), (4, "zz", 16), (5, "zz", 56), (2, "general", 24)])
def test_facet_counts_and_inradius(backend, n, model, count):
    M = build_sign_matrix(n, model)
    f = facet_enumeration(M)
    assert len(f) == count
    assert validate(f, M)
    assert abs(inradius(f) - INV_SQRT3) <= 1e-9
    assert np.all(f.offsets > 0)


@pytest.mark.parametrize("n,model", [(3, "zz"), (4, "zz"), (2, "general")])
def test_matches_brute_force(n, model):
    M = build_sign_matrix(n, model)
    f = facet_enumeration(M)
    ours = {tuple(np.round(a / c, 9)) for a, c in zip(f.normals.astype(float), f.offsets)}
    assert ours == brute_force_facets(M.entries)


@pytest.mark.parametrize("n", [3, 4])
def test_matches_qhull_distances(n):
    M = build_sign_matrix(n, "zz")
    hull = ConvexHull(M.dense.T)
    qhull_min = float(np.min(-hull.equations[:, -1]))
    assert inradius(facet_enumeration(M)) == pytest.approx(qhull_min, abs=1e-9)


def test_degenerate_inputs():
    with pytest.raises(DegenerateHull):
        facet_enumeration(np.array([[1, -1, 0], [1, -1, 0], [0, 0, 0]]))
    with pytest.raises(DegenerateHull):
        facet_enumeration(np.array([[1, 2, 1], [0, 1, 2]]))


def test_ray_cap():
    with pytest.raises(CapExceeded):
        facet_enumeration(build_sign_matrix(5, "zz"), cap=10)


def test_facet_centers_tetrahedron():
    M = build_sign_matrix(3, "zz")
    f = facet_enumeration(M)
    problems = facet_center_problems(f, M)
    for p in problems:
        assert np.abs(p.values).max() == pytest.approx(1.0)
        assert p.objective == pytest.approx(3.0, abs=1e-9)
    assert max(p.objective for p in problems) == pytest.approx(3.0)
    assert {tuple(np.sign(p.values)) for p in problems} == {(-1, -1, -1), (-1, 1, 1), (1, -1, 1), (1, 1, -1)}


@pytest.mark.parametrize("n", [4, 5])
def test_facet_centers_only_nearest_saturate(n):
    M = build_sign_matrix(n, "zz")
    f = facet_enumeration(M)
    radius = math.sqrt(M.d)
    for p in facet_center_problems(f, M):
        assert p.objective == pytest.approx(radius / p.distance, rel=1e-9)
        nearest = abs(p.distance - INV_SQRT3) <= 1e-9
        if nearest:
            assert p.objective == pytest.approx(math.sqrt(3) * radius, abs=1e-6)
        else:
            assert p.objective < math.sqrt(3) * radius - 1e-6


def test_facet_center_homogeneity():
    M = build_sign_matrix(4, "zz")
    f = facet_enumeration(M)
    a = facet_center_problems(f, M, radius=1.0)
    b = facet_center_problems(f, M, radius=3.5)
    for x, y in zip(a, b):
        assert y.objective == pytest.approx(3.5 * x.objective)


def test_gauge_examples():
    M = build_sign_matrix(3, "zz")
    assert gauge(M, np.full(3, -1 / 3)) == pytest.approx(1.0)
    assert gauge(M, M.dense[:, 2]) == pytest.approx(1.0)
    assert gauge(M, 2 * M.dense[:, 2]) == pytest.approx(2.0)
    b = ProblemVector(M.n, M.model, M.index, [0.2, -0.4, 0.9])
    boundary = b.values / gauge(M, b)
    assert gauge(M, boundary) == pytest.approx(1.0)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_gauge_two_sided(rng, n):
    M = build_sign_matrix(n, "zz")
    r = inradius(facet_enumeration(M))
    for _ in range(50):
        b = rng.normal(size=M.d)
        g = gauge(M, b)
        norm = np.linalg.norm(b)
        assert g * r <= norm + 1e-9
        assert norm <= g * math.sqrt(M.d) + 1e-9
