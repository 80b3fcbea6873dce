"""Small complexes and labelings used throughout the tests and the CLI."""

from __future__ import annotations

from .complex import E11, E12, V00, V01, Edge, Face, SpecialComplex, Vertex, side_position
from .labeling import Labeling
from .matrix import Gl2z, label, positive_label


def polygon(n: int) -> SpecialComplex:
    """Disc with n vertices of type (0,0) and n boundary edges, edge i: v_i -> v_{i+1}."""
    if n < 1:
        raise ValueError("a polygon needs at least one vertex")
    vs = [Vertex(i, V00) for i in range(n)]
    es = [Edge(i, E11, (i, (i + 1) % n)) for i in range(n)]
    f = Face(0, tuple(range(n)), tuple((i, 1) for i in range(n)))
    return SpecialComplex(vs, es, [f])


def polygon_labeling(mats) -> Labeling:
    return Labeling({(0, side_position(i)): m for i, m in enumerate(mats)})


def polygon_labels(X: SpecialComplex, lab: Labeling) -> list[Gl2z]:
    f = X.faces[0]
    return [lab[(f.id, side_position(i))] for i in range(len(f.corners))]


D = label(1, 0, -1)
D_NEG = label(-1, 0, 1)


def bigon():
    return polygon(2), polygon_labeling([D, D_NEG])


def triangle():
    return polygon(3), polygon_labeling([positive_label(-1)] * 3)


def square():
    return polygon(4), polygon_labeling([D] * 4)


def pentagon():
    # the square after a CP2-bar blowup at one vertex
    u = positive_label(1)
    return polygon(5), polygon_labeling([u, u, D, D, u])


def monogon(k: int = 0, eps: int = 1, eps2: int = -1):
    return polygon(1), polygon_labeling([label(eps, k, eps2)])


def doubled_pants():
    """Two (0,1) vertices joined by three boundary edges and one interior edge."""
    v, w = 0, 1
    vs = [Vertex(v, V01), Vertex(w, V01)]
    es = [Edge(j, E11, (v, w)) for j in range(3)] + [Edge(3, E12, (v, w))]
    fs = [Face(j, (v, w), ((j, 1), (3, -1))) for j in range(3)]
    X = SpecialComplex(vs, es, fs)
    return X, Labeling.constant(X, D)


def pi2_model():
    from .tropical import build_pi2_complex
    X, dots, lab = build_pi2_complex()
    return X.with_dots(dots), lab


FIXTURES = {
    "bigon": bigon,
    "triangle": triangle,
    "square": square,
    "pentagon": pentagon,
    "monogon": monogon,
    "doubled-pants": doubled_pants,
    "pi2": pi2_model,
}
