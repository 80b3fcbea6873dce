import itertools

import pytest

from pantsdec.complex import corner_position, default_dots
from pantsdec.fixtures import (D, D_NEG, bigon, doubled_pants, monogon, polygon, polygon_labeling,
                               polygon_labels, square, triangle)
from pantsdec.groups import build_curve_diagram, parse_presentation, to_even_complex
from pantsdec.labeling import (Labeling, check_admissible, euler_characteristic, even_auto_label,
                               face_monodromy, normalize_positive, vertex_sign_move)
from pantsdec.matrix import IDENTITY, Gl2z, label
from pantsdec.tropical import build_pi2_complex


@pytest.fixture(scope="module")
def pi2():
    X, dots, lab = build_pi2_complex()
    return X, lab


def test_triangle_admissible():
    X, lab = triangle()
    assert all(m == Gl2z(1, -1, 0, -1) for m in polygon_labels(X, lab))
    assert check_admissible(X, lab).ok


@pytest.mark.parametrize("eps, eps2", list(itertools.product((1, -1), repeat=2)))
def test_monogon_never_admissible(eps, eps2):
    X, _ = monogon()
    for k in range(-10, 11):
        v = check_admissible(X, polygon_labeling([label(eps, k, eps2)]))
        assert not v.ok and v.face_violations


def test_pi2_tropical_labeling(pi2):
    X, lab = pi2
    v = check_admissible(X, lab)
    assert v.ok, v.summary()
    # the dotted faces are those over {1,2} and {3,4}
    for fid in range(6):
        assert face_monodromy(X, lab, fid) == IDENTITY


def test_pi2_labels(pi2):
    X, lab = pi2
    skew = [e for e in X.edges if lab[_side_of(X, e.id)] == Gl2z(1, -1, 0, -1)]
    assert len(skew) == 4
    assert all(lab[_side_of(X, e.id)] == D for e in X.edges if e not in skew)


def _side_of(X, eid):
    for fid, i, e, _ in X.side_occurrences():
        if e == eid:
            return fid, 2 * i + 1


def test_missing_dots_is_an_error(pi2):
    X, lab = pi2
    with pytest.raises(ValueError):
        check_admissible(X.with_dots({}), lab)


def test_domain_mismatch(pi2):
    X, lab = pi2
    with pytest.raises(ValueError):
        check_admissible(X, polygon_labeling([D, D]))


def test_euler(pi2):
    assert euler_characteristic(pi2[0]) == 3
    for n in range(1, 7):
        assert euler_characteristic(polygon(n)) == n
    assert euler_characteristic(doubled_pants()[0]) == -2


def test_sign_move_on_bigon():
    X, lab = bigon()
    for v in (0, 1):
        out = vertex_sign_move(X, lab, v)
        assert polygon_labels(X, out) == [D_NEG, D]
        assert check_admissible(X, out).ok
        assert vertex_sign_move(X, out, v) == lab


def test_sign_move_at_centre(pi2):
    X, lab = pi2
    out = vertex_sign_move(X, lab, 0)
    assert check_admissible(X, out).ok
    for fid, i, e, _ in X.side_occurrences():
        ref = (fid, 2 * i + 1)
        if e in (0, 1, 2, 3):
            assert out[ref] == -lab[ref]
        else:
            assert out[ref] == lab[ref]


def test_sign_move_rejects_loops():
    X, lab = monogon()
    with pytest.raises(ValueError):
        vertex_sign_move(X, lab, 0)


def test_normalize_positive():
    X, lab = triangle()
    assert normalize_positive(X, lab) == lab
    X, lab = bigon()
    out = normalize_positive(X, lab)
    assert sum(not m.is_positive() for m in polygon_labels(X, out)) <= 1
    X = polygon(4)
    lab = polygon_labeling([D_NEG, D_NEG, D, D])
    assert check_admissible(X, lab).ok
    out = normalize_positive(X, lab)
    assert out.positive and check_admissible(X, out).ok


def test_auto_label_square():
    X, _ = square()
    lab = even_auto_label(X)
    assert all(m == IDENTITY for m in lab.labels.values())
    assert check_admissible(X, lab).ok


def test_auto_label_pi2(pi2):
    X, _ = pi2
    lab = even_auto_label(X, default_dots(X))
    assert check_admissible(X, lab).ok
    assert all(m.det == 1 for m in lab.labels.values())


def test_auto_label_rejects_odd_complex():
    with pytest.raises(ValueError):
        even_auto_label(triangle()[0])


def test_fully_dotted_faces_keep_trivial_labels():
    X = to_even_complex(build_curve_diagram(parse_presentation("a |")))
    X = X.with_dots(default_dots(X))
    lab = even_auto_label(X)
    full = [f for f in X.faces
            if all(X.is_dotted((f.id, corner_position(i))) for i in range(len(f.corners)))]
    assert full
    for f in full:
        assert all(lab[(f.id, 2 * i + 1)] == IDENTITY for i in range(len(f.corners)))


def test_labeling_json_round_trip(pi2):
    X, lab = pi2
    assert Labeling.from_json(lab.to_json()) == lab
    with pytest.raises(ValueError):
        Labeling({(0, 1): Gl2z(1, 0, 1, 1)})
