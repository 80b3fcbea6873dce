"""Barycentric points of the simplex, the retraction onto Pi_n, fibers over
low-dimensional strata, and the Pi_2 model complex."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .complex import E11, E12, V00, V01, V02, Edge, Face, SpecialComplex, Vertex, side_position
from .labeling import Labeling
from .matrix import label

DEFAULT_TOL = 1e-9


class NotInPi(ValueError):
    """The point has a unique maximal coordinate."""


@dataclass(frozen=True)
class PointType:
    k: int
    l: int

    def to_json(self) -> list[int]:
        return [self.k, self.l]


def _as_point(p, allow_vertex: bool = True) -> np.ndarray:
    x = np.asarray(p, dtype=float)
    if x.ndim != 1 or len(x) < 2:
        raise ValueError("a barycentric point needs at least two coordinates")
    if np.any(x < 0) or not np.all(np.isfinite(x)):
        raise ValueError(f"coordinates must be finite and nonnegative: {list(p)}")
    if not np.any(x > 0):
        raise ValueError("coordinates are all zero")
    if not allow_vertex and np.count_nonzero(x) < 2:
        raise ValueError("vertices of the simplex are excluded")
    return x


def normal_form(p) -> np.ndarray:
    x = _as_point(p)
    return x / x.max()


def classify(p, tol: float = DEFAULT_TOL) -> PointType:
    """Type (k, l) of a point of Pi_n; raises NotInPi if its maximum is unique."""
    x = normal_form(p)
    n = len(x) - 2
    ones = int(np.sum(np.abs(x - 1.0) <= tol))
    zeros = int(np.sum(x <= tol))
    if ones < 2:
        raise NotInPi(f"{list(p)} has a unique maximum")
    l = n - zeros
    return PointType(l - ones + 2, l)


def pi2_project(p, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Replace the unique maximum by the second largest coordinate and normalize."""
    x = _as_point(p, allow_vertex=False)
    order = np.argsort(-x, kind="stable")
    top, second = x[order[0]], x[order[1]]
    y = x.copy()
    if top - second > tol * top:
        y[order[0]] = second
    return y / y.max()


def pi1_project(z) -> np.ndarray:
    w = np.abs(np.asarray(z, dtype=complex))
    if not np.any(w > 0):
        raise ValueError("zero vector")
    return w


# ---------------------------------------------------------------- fibers

@dataclass(frozen=True)
class FiberDescriptor:
    base: str  # "point", "theta" or "F2"
    torus_rank: int
    euler: int
    note: str

    def to_json(self) -> dict:
        return {"base": self.base, "torus_rank": self.torus_rank, "euler": self.euler,
                "note": self.note}


_FIBERS = {
    (0, 0): FiberDescriptor("point", 0, 1, "a point"),
    (1, 1): FiberDescriptor("point", 1, 0, "a circle"),
    (0, 1): FiberDescriptor("theta", 0, -1, "a theta graph"),
    (2, 2): FiberDescriptor("point", 2, 0, "a torus"),
    (1, 2): FiberDescriptor("theta", 1, 0, "theta graph times a circle"),
    (0, 2): FiberDescriptor("F2", 0, 1, "homotopic to a once-punctured 3-torus"),
}


def fiber_descriptor(t: PointType | tuple[int, int]) -> FiberDescriptor:
    key = (t.k, t.l) if isinstance(t, PointType) else tuple(t)
    if key not in _FIBERS:
        raise ValueError(f"no fiber description for type {key} (only n <= 2)")
    return _FIBERS[key]


@dataclass(frozen=True)
class FiberArc:
    """One piece of a fiber: coordinate ``top`` carries the excess modulus.

    ``turn`` rotates by the free angle theta with |theta| <= ``bound(phi)``;
    ``spin`` (n = 2 only) rotates by phi over the full circle; ``fixed`` is real.
    """

    top: int
    turn: int
    spin: int | None
    fixed: int


def _supported(x: np.ndarray, tol: float) -> PointType:
    t = classify(x, tol)
    n = len(x) - 2
    if (n, t.k, t.l) not in {(1, 0, 0), (1, 1, 1), (1, 0, 1), (2, 2, 2)}:
        raise ValueError(f"sampling is implemented for types (0,0), (1,1), (0,1) with n = 1 "
                         f"and (2,2) with n = 2, not {(t.k, t.l)} with n = {n}")
    return t


def fiber_arcs(p, tol: float = DEFAULT_TOL) -> list[FiberArc]:
    x = normal_form(p)
    _supported(x, tol)
    tops = [i for i in range(len(x)) if abs(x[i] - 1) <= tol]
    arcs = []
    for m in tops:
        rest = [i for i in range(len(x)) if i != m]
        turn = next(i for i in rest if abs(x[i] - 1) <= tol)
        others = [i for i in rest if i != turn]
        spin = others[0] if len(others) == 2 else None
        arcs.append(FiberArc(m, turn, spin, others[-1]))
    return arcs


def arc_bound(x: np.ndarray, arc: FiberArc, phi: float = 0.0) -> tuple[float, complex]:
    """Half-width of the allowed theta interval and the centre offset w."""
    w = complex(x[arc.fixed])
    if arc.spin is not None:
        w += x[arc.spin] * np.exp(1j * phi)
    r = abs(w)
    a = x[arc.turn]
    if r < 1e-15:
        return math.pi, w
    c = (1.0 - a * a - r * r) / (2 * a * r)
    return math.acos(max(-1.0, min(1.0, c))), w


def fiber_point(x: np.ndarray, arc: FiberArc, theta: float, phi: float = 0.0) -> np.ndarray:
    z = np.zeros(len(x), dtype=complex)
    z[arc.fixed] = x[arc.fixed]
    if arc.spin is not None:
        z[arc.spin] = x[arc.spin] * np.exp(1j * phi)
    z[arc.turn] = x[arc.turn] * np.exp(1j * theta)
    z[arc.top] = -(z.sum() - z[arc.top])
    return z


def sample_fiber(p, count: int = 100, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Points z with sum 0 lying over p, as a (count, n+2) complex array.

    Arcs are sampled on closed parameter grids, so their endpoints are included.
    """
    if count < 1:
        raise ValueError("count must be positive")
    x = normal_form(p)
    t = _supported(x, tol)
    if (t.k, t.l) == (0, 0):
        i, j = [i for i in range(len(x)) if abs(x[i] - 1) <= tol]
        z = np.zeros(len(x), dtype=complex)
        z[i], z[j] = 1, -1
        return np.tile(z, (count, 1))
    arcs = fiber_arcs(x, tol)
    per = [count // len(arcs) + (1 if a < count % len(arcs) else 0) for a in range(len(arcs))]
    rows = []
    for arc, k in zip(arcs, per):
        if k == 0:
            continue
        if arc.spin is None:
            bound, w = arc_bound(x, arc)
            thetas = np.linspace(-bound, bound, k) if k > 1 else np.array([0.0])
            rows += [fiber_point(x, arc, th + np.angle(w)) for th in thetas]
        else:
            nphi = max(1, int(math.ceil(math.sqrt(k))))
            ntheta = int(math.ceil(k / nphi))
            made = 0
            for phi in np.linspace(0, 2 * math.pi, nphi, endpoint=False):
                bound, w = arc_bound(x, arc, phi)
                thetas = np.linspace(-bound, bound, ntheta) if ntheta > 1 else np.array([0.0])
                for th in thetas:
                    if made == k:
                        break
                    rows.append(fiber_point(x, arc, th + np.angle(w), phi))
                    made += 1
    return np.array(rows)


# ---------------------------------------------------------------- the Pi_2 model

PAIRS = tuple(combinations(range(1, 5), 2))  # (1,2), (1,3), (1,4), (2,3), (2,4), (3,4)
CENTRE = 0


def _q(i: int) -> int:
    return i


def _qq(pair: tuple[int, int]) -> int:
    return 5 + PAIRS.index(pair)


def _spoke(i: int) -> int:
    return i - 1


def _rim(pair: tuple[int, int], which: int) -> int:
    return 4 + 2 * PAIRS.index(pair) + (0 if which == pair[0] else 1)


def pi2_vertex_coordinates() -> dict[int, tuple[float, ...]]:
    """Barycentric coordinates of the vertices of the Pi_2 model."""
    coords = {CENTRE: (1.0, 1.0, 1.0, 1.0)}
    for i in range(1, 5):
        coords[_q(i)] = tuple(0.0 if j == i else 1.0 for j in range(1, 5))
    for pair in PAIRS:
        coords[_qq(pair)] = tuple(0.0 if j in pair else 1.0 for j in range(1, 5))
    return coords


def build_pi2_complex() -> tuple[SpecialComplex, dict, Labeling]:
    """The Pi_2 complex with its dot marking and tropical labeling.

    Vertex 0 is the centre, 1..4 are the (0,1) points and 5..10 the (0,0)
    points in pair order.  Face p runs centre, q_i, q_ij, q_j for the p-th pair.
    """
    vs = [Vertex(CENTRE, V02)] + [Vertex(_q(i), V01) for i in range(1, 5)]
    vs += [Vertex(_qq(pair), V00) for pair in PAIRS]
    es = [Edge(_spoke(i), E12, (CENTRE, _q(i))) for i in range(1, 5)]
    for pair in PAIRS:
        for i in pair:
            es.append(Edge(_rim(pair, i), E11, (_q(i), _qq(pair))))
    es.sort(key=lambda e: e.id)
    fs = []
    for p, (i, j) in enumerate(PAIRS):
        fs.append(Face(p, (CENTRE, _q(i), _qq((i, j)), _q(j)),
                       ((_spoke(i), 1), (_rim((i, j), i), 1), (_rim((i, j), j), -1), (_spoke(j), -1))))
    dots = {CENTRE: [(PAIRS.index((1, 2)), 0), (PAIRS.index((3, 4)), 0)]}
    X = SpecialComplex(vs, es, fs, dots)

    diag = label(1, 0, -1)
    skew = label(1, -1, -1)
    special = {_rim((1, 2), 1), _rim((1, 2), 2), _rim((3, 4), 3), _rim((3, 4), 4)}
    labels = {}
    for f in fs:
        for i, (e, _) in enumerate(f.sides):
            # both labels are involutions, so the traversal direction does not matter
            labels[(f.id, side_position(i))] = skew if e in special else diag
    return X, dots, Labeling(labels)
