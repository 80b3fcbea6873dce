import math

import numpy as np
import pytest

from pantsdec.complex import census, is_even, validate
from pantsdec.labeling import check_admissible, euler_characteristic
from pantsdec.tropical import (NotInPi, PointType, arc_bound, build_pi2_complex, classify,
                               fiber_arcs, fiber_descriptor, normal_form, pi1_project,
                               pi2_project, pi2_vertex_coordinates, sample_fiber)


@pytest.mark.parametrize("p, t", [
    ([1, 1, 0, 0], (0, 0)),
    ([1, 1, 1, 1], (0, 2)),
    ([1, 1, 0.5, 0], (1, 1)),
    ([1, 1, 0], (0, 0)),
    ([1, 1, 1], (0, 1)),
    ([1, 1, 0.4], (1, 1)),
    ([1, 1, 0.3, 0.6], (2, 2)),
    ([1, 1, 1, 0.5], (1, 2)),
    ([1, 1, 1, 0], (0, 1)),
    ([3, 3, 1.5], (1, 1)),
])
def test_classify(p, t):
    assert classify(p) == PointType(*t)


def test_classify_rejects_unique_max():
    with pytest.raises(NotInPi):
        classify([1, 0.9, 0.2])
    with pytest.raises(ValueError):
        classify([0, 0, 0])
    with pytest.raises(ValueError):
        classify([1, -1, 1])


def test_classify_tolerance():
    assert classify([1, 1 - 1e-12, 0.2]) == PointType(1, 1)
    with pytest.raises(NotInPi):
        classify([1, 1 - 1e-6, 0.2])
    assert classify([1, 1 - 1e-6, 0.2], tol=1e-5) == PointType(1, 1)


def test_normal_form():
    assert normal_form([2, 4, 1]).tolist() == [0.5, 1, 0.25]


@pytest.mark.parametrize("p, image", [
    ([1, 0.6, 0.3], [1, 1, 0.5]),
    ([0.2, 1.0, 0.5, 0.3], [0.4, 1, 1, 0.6]),
    ([1, 1, 0.3], [1, 1, 0.3]),
])
def test_pi2_project(p, image):
    assert np.allclose(pi2_project(p), image, atol=1e-12)


def test_pi2_rejects_vertices():
    with pytest.raises(ValueError):
        pi2_project([1, 0, 0])


def test_pi1_project():
    assert pi1_project([1, -1, 0]).tolist() == [1, 1, 0]
    assert np.allclose(pi1_project([1j] * 4), [1, 1, 1, 1])
    th, t = 0.7, 0.4
    z = [np.exp(1j * th), -np.exp(1j * th) - t, t]
    assert np.allclose(pi1_project(z), [1, abs(-np.exp(1j * th) - t), t])
    with pytest.raises(ValueError):
        pi1_project([0, 0])


@pytest.mark.parametrize("t, base, rank, chi", [
    ((0, 0), "point", 0, 1),
    ((1, 1), "point", 1, 0),
    ((0, 1), "theta", 0, -1),
    ((2, 2), "point", 2, 0),
    ((1, 2), "theta", 1, 0),
    ((0, 2), "F2", 0, 1),
])
def test_fiber_descriptor(t, base, rank, chi):
    d = fiber_descriptor(t)
    assert (d.base, d.torus_rank, d.euler) == (base, rank, chi)
    k, l = t
    assert d.euler == ((-1) ** l if k == 0 else 0)


def test_fiber_descriptor_unsupported():
    with pytest.raises(ValueError):
        fiber_descriptor((0, 3))


def test_point_fiber():
    z = sample_fiber([1, 1, 0], 5)
    assert z.shape == (5, 3)
    assert np.all(z == np.array([1, -1, 0]))


@pytest.mark.parametrize("t", [0.25, 0.5, 0.9])
def test_arc_endpoints(t):
    x = [1, 1, t]
    arcs = fiber_arcs(x)
    assert len(arcs) == 2
    bound, _ = arc_bound(np.array(x, float), arcs[0])
    assert abs(math.cos(bound) + t / 2) <= 1e-12
    z = sample_fiber(x, 10)
    first, last = z[0], z[4]
    for row in (first, last):
        assert abs(math.cos(np.angle(row[1])) + t / 2) <= 1e-12
        assert abs(abs(row[0]) - 1) <= 1e-12


def test_theta_graph_meeting_points():
    z = sample_fiber([1, 1, 1], 9)
    ends = [z[0], z[2]]
    for row in ends:
        assert abs(abs(np.angle(row[1])) - 2 * math.pi / 3) <= 1e-12
        assert np.allclose(np.abs(row), 1, atol=1e-12)
    w = np.exp(2j * math.pi / 3)
    found = {tuple(np.round(r / r[2], 9)) for r in z}
    assert tuple(np.round([w.conjugate(), w, 1], 9)) in found
    assert tuple(np.round([w, w.conjugate(), 1], 9)) in found


@pytest.mark.parametrize("x", [[1, 1, 0.5], [1, 1, 1], [1, 1, 0.3, 0.6], [0.7, 1, 1, 0.2]])
def test_sample_properties(x):
    z = sample_fiber(x, 200)
    assert z.shape == (200, len(x))
    xn = normal_form(x)
    for row in z:
        assert abs(row.sum()) <= 1e-12
        assert np.max(np.abs(pi2_project(pi1_project(row)) - xn)) <= 1e-9
        # the coordinate carrying the excess is at least the common maximum
        assert np.sort(np.abs(row))[-2] <= 1 + 1e-12


def test_sample_unsupported():
    with pytest.raises(ValueError):
        sample_fiber([1, 1, 1, 1], 10)
    with pytest.raises(NotInPi):
        sample_fiber([1, 0.5, 0.2], 10)
    with pytest.raises(ValueError):
        sample_fiber([1, 1, 0.5], 0)


def test_pi2_complex_structure():
    X, dots, lab = build_pi2_complex()
    assert validate(X).ok and is_even(X)
    c = census(X)
    assert (c.n0, c.n1, c.n2, c.e11, c.e12, c.f) == (6, 4, 1, 12, 4, 6)
    assert euler_characteristic(X) == 3
    assert check_admissible(X.with_dots(dots), lab).ok


def test_pi2_coordinates_match_types():
    X, _, _ = build_pi2_complex()
    coords = pi2_vertex_coordinates()
    kinds = {v.id: v.type for v in X.vertices}
    for vid, p in coords.items():
        t = classify(p)
        assert t.k == 0
        assert (0, t.l) == tuple(kinds[vid])
