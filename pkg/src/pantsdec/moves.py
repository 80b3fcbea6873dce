"""Blowup and surgery moves, blowdowns, polygon classification and a brute-force
enumerator of admissible polygon labelings."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum

from .complex import E11, V00, Edge, Face, SpecialComplex, Vertex, side_position, validate
from .fixtures import polygon, polygon_labeling
from .labeling import Labeling, _polygon_cycle, check_admissible, normalize_positive
from .matrix import IDENTITY, J, Gl2z, label

# matrices of the three moves, acting on the traversal labels L1 (before the
# site) and L2 (after it)
CP2_LEFT = Gl2z(-1, 1, 0, -1)
CP2_RIGHT = Gl2z(1, 1, 0, 1)
CP2_NEW = Gl2z(1, -1, 0, -1)
CP2BAR_LEFT = Gl2z(1, 1, 0, 1)
CP2BAR_RIGHT = Gl2z(1, -1, 0, 1)
CP2BAR_NEW = Gl2z(1, 1, 0, -1)
S2XS2_MIDDLE = label(1, 0, -1)
S2XS2_LAST = label(-1, 0, 1)


class MoveKind(str, Enum):
    CP2 = "CP2"
    CP2BAR = "CP2BAR"
    S2XS2 = "S2XS2"
    S2TWIST = "S2TWIST"  # the nontrivial S2 bundle over S2, only produced by blowdowns
    SIGN = "SIGN"


@dataclass
class MoveRecord:
    kind: MoveKind
    site: int
    direction: str  # "up" for blowups, "down" for blowdowns
    before: dict
    after: dict

    def to_json(self) -> dict:
        return {"kind": self.kind.value, "site": self.site, "direction": self.direction,
                "before": self.before, "after": self.after}

    def replay(self):
        """Re-apply the move to the recorded before-state."""
        X = SpecialComplex.from_json(self.before["complex"])
        lab = Labeling.from_json(self.before["labeling"])
        if self.direction == "up":
            return blowup(X, lab, self.site, self.kind)
        if self.kind is MoveKind.SIGN:
            from .labeling import vertex_sign_move
            return X, vertex_sign_move(X, lab, self.site), self
        return blowdown(X, lab, self.site)


def _snapshot(X: SpecialComplex, lab: Labeling) -> dict:
    return {"complex": X.to_json(), "labeling": lab.to_json()}


@dataclass(frozen=True)
class DiffeoType:
    cp2: int = 0
    cp2bar: int = 0
    s2xs2: int = 0

    @property
    def is_s4(self) -> bool:
        return self.cp2 == self.cp2bar == self.s2xs2 == 0

    @property
    def euler(self) -> int:
        return 2 + self.cp2 + self.cp2bar + 2 * self.s2xs2

    @property
    def signature(self) -> int:
        return self.cp2 - self.cp2bar

    def __add__(self, other: "DiffeoType") -> "DiffeoType":
        return DiffeoType(self.cp2 + other.cp2, self.cp2bar + other.cp2bar,
                          self.s2xs2 + other.s2xs2)

    def name(self) -> str:
        if self.is_s4:
            return "S4"
        parts = []
        for n, s in ((self.cp2, "CP2"), (self.cp2bar, "CP2bar"), (self.s2xs2, "S2xS2")):
            if n:
                parts.append(s if n == 1 else f"{n}{s}")
        return " # ".join(parts)

    def to_json(self) -> dict:
        return {"name": self.name(), "cp2": self.cp2, "cp2bar": self.cp2bar, "s2xs2": self.s2xs2}


def normalized_form(d: DiffeoType) -> DiffeoType:
    """Rewrite S2xS2 summands as CP2 # CP2bar once a CP2 or CP2bar is present.

    Uses (S2xS2) # CP2 = 2CP2 # CP2bar, a standard fact of 4-manifold topology
    that the combinatorial calculus itself does not provide.
    """
    if d.s2xs2 and (d.cp2 or d.cp2bar):
        return DiffeoType(d.cp2 + d.s2xs2, d.cp2bar + d.s2xs2, 0)
    return d


SUMMAND = {MoveKind.CP2: DiffeoType(1, 0, 0), MoveKind.CP2BAR: DiffeoType(0, 1, 0),
           MoveKind.S2XS2: DiffeoType(0, 0, 1), MoveKind.S2TWIST: DiffeoType(1, 1, 0)}


def _next_id(ids) -> int:
    return max(ids, default=-1) + 1


def _face_side(X: SpecialComplex, eid: int) -> tuple[Face, int]:
    for f in X.faces:
        for i, (e, _) in enumerate(f.sides):
            if e == eid:
                return f, i
    raise ValueError(f"edge {eid} lies on no face")


def _corner_of(X: SpecialComplex, vid: int) -> tuple[Face, int]:
    for f in X.faces:
        for i, c in enumerate(f.corners):
            if c == vid:
                return f, i
    raise ValueError(f"vertex {vid} has no corner")


def _rebuild(X: SpecialComplex, lab: Labeling, old: Face, new: Face, new_labels: list[Gl2z],
             vertices, edges) -> tuple[SpecialComplex, Labeling]:
    faces = [new if f.id == old.id else f for f in X.faces]
    labels = {ref: m for ref, m in lab.items() if ref[0] != old.id}
    for i, m in enumerate(new_labels):
        labels[(new.id, side_position(i))] = m
    Y = SpecialComplex(vertices, edges, faces, X.dots)
    rep = validate(Y)
    if not rep.ok:
        raise AssertionError(f"move broke the incidence structure: {rep.errors[0]}")
    return Y, Labeling(labels)


def _with_ends(e: Edge, d: int, start: int, end: int) -> Edge:
    """Edge traversed (with direction d) from start to end."""
    return Edge(e.id, e.type, (start, end) if d == 1 else (end, start))


def _require_oriented(*mats: Gl2z) -> None:
    for m in mats:
        if m.det != -1:
            raise ValueError(f"moves need oriented labels next to the site, got {m}")


def blowup(X: SpecialComplex, lab: Labeling, site: int, kind) -> tuple[SpecialComplex, Labeling, MoveRecord]:
    """CP2 / CP2BAR at a (0,0) vertex ``site``; S2XS2 on the (1,1) edge ``site``."""
    kind = MoveKind(kind)
    if kind is MoveKind.SIGN:
        raise ValueError("use vertex_sign_move for sign moves")
    if kind is MoveKind.S2TWIST:
        raise ValueError("S2TWIST is a blowdown outcome; blow up CP2 and CP2BAR instead")
    if not check_admissible(X, lab).ok:
        raise ValueError("input labeling is not admissible")
    before = _snapshot(X, lab)
    if kind in (MoveKind.CP2, MoveKind.CP2BAR):
        if not X.has_vertex(site) or X.vtype(site) != V00:
            raise ValueError(f"site {site} is not a (0,0) vertex")
        f, i = _corner_of(X, site)
        n = len(f.corners)
        e_in, d_in = f.sides[(i - 1) % n]
        e_out, d_out = f.sides[i]
        if e_in == e_out:
            raise ValueError(f"vertex {site} sits on a loop edge")
        L1 = lab[(f.id, side_position((i - 1) % n))]
        L2 = lab[(f.id, side_position(i))]
        _require_oriented(L1, L2)
        left, right, new = ((CP2_LEFT, CP2_RIGHT, CP2_NEW) if kind is MoveKind.CP2
                            else (CP2BAR_LEFT, CP2BAR_RIGHT, CP2BAR_NEW))
        v_new = _next_id(v.id for v in X.vertices)
        e_new = _next_id(e.id for e in X.edges)
        vertices = list(X.vertices) + [Vertex(v_new, V00)]
        edges = []
        for e in X.edges:
            if e.id == e_out:
                other = e.ends[1] if d_out == 1 else e.ends[0]
                e = _with_ends(e, d_out, v_new, other)
            edges.append(e)
        edges.append(Edge(e_new, E11, (site, v_new)))
        corners = f.corners[:i] + (site, v_new) + f.corners[i + 1:]
        sides = f.sides[:i] + ((e_new, 1),) + f.sides[i:]
        labels = [lab[(f.id, side_position(j))] for j in range(n)]
        labels[(i - 1) % n] = L1 @ left
        labels[i] = right @ L2
        labels = labels[:i] + [new] + labels[i:]
    else:
        if not X.has_edge(site) or X.etype(site) != E11:
            raise ValueError(f"site {site} is not a (1,1) edge")
        f, i = _face_side(X, site)
        n = len(f.corners)
        e_id, d = f.sides[i]
        a = _next_id(v.id for v in X.vertices)
        b = a + 1
        n1 = _next_id(e.id for e in X.edges)
        n2 = n1 + 1
        start, end = f.corners[i], f.corners[(i + 1) % n]
        vertices = list(X.vertices) + [Vertex(a, V00), Vertex(b, V00)]
        edges = [(_with_ends(e, d, start, a) if e.id == e_id else e) for e in X.edges]
        edges += [Edge(n1, E11, (a, b)), Edge(n2, E11, (b, end))]
        corners = f.corners[:i + 1] + (a, b) + f.corners[i + 1:]
        sides = f.sides[:i + 1] + ((n1, 1), (n2, 1)) + f.sides[i + 1:]
        labels = [lab[(f.id, side_position(j))] for j in range(n)]
        labels = labels[:i + 1] + [S2XS2_MIDDLE, S2XS2_LAST] + labels[i + 1:]
    new_face = Face(f.id, corners, sides)
    Y, lab2 = _rebuild(X, lab, f, new_face, labels, vertices, edges)
    verdict = check_admissible(Y, lab2)
    if not verdict.ok:
        raise ValueError(f"{kind.value} move produced an inadmissible labeling:\n{verdict.summary()}")
    return Y, lab2, MoveRecord(kind, site, "up", before, _snapshot(Y, lab2))


def sphere_square(m: Gl2z) -> int:
    """Self-intersection of the sphere over an edge with oriented label m."""
    if m.det != -1:
        raise ValueError(f"label {m} is not oriented")
    return -m.a * m.b


def blowdown(X: SpecialComplex, lab: Labeling, edge: int) -> tuple[SpecialComplex, Labeling, MoveRecord]:
    """Undo a move at a (1,1) edge whose sphere has self-intersection +1, -1 or 0."""
    if not check_admissible(X, lab).ok:
        raise ValueError("input labeling is not admissible")
    if not X.has_edge(edge) or X.etype(edge) != E11:
        raise ValueError(f"edge {edge} is not a (1,1) edge")
    f, i = _face_side(X, edge)
    n = len(f.corners)
    T = lab[(f.id, side_position(i))]
    ss = sphere_square(T)
    if abs(ss) > 1:
        raise ValueError(f"edge {edge} has |k| = {abs(T.b)} >= 2; no move applies")
    sign = T.a  # T = sign * (positive label)
    a, b = f.corners[i], f.corners[(i + 1) % n]
    if a == b or X.vtype(a) != V00 or X.vtype(b) != V00:
        raise ValueError(f"edge {edge} must join two distinct (0,0) vertices")
    prev_i, next_i = (i - 1) % n, (i + 1) % n
    if len({prev_i, i, next_i}) < 3:
        raise ValueError("blowdown would leave a monogon")
    e_prev, d_prev = f.sides[prev_i]
    e_next, d_next = f.sides[next_i]
    L1 = lab[(f.id, side_position(prev_i))]
    L2 = lab[(f.id, side_position(next_i))]
    _require_oriented(L1, L2)
    before = _snapshot(X, lab)
    labels = [lab[(f.id, side_position(j))] for j in range(n)]
    if ss != 0:
        kind = MoveKind.CP2 if ss == 1 else MoveKind.CP2BAR
        left, right = ((CP2_LEFT, CP2_RIGHT) if kind is MoveKind.CP2 else (CP2BAR_LEFT, CP2BAR_RIGHT))
        keep, drop = min(a, b), max(a, b)
        labels[prev_i] = L1 @ left.inverse()
        if sign == -1:
            labels[prev_i] = -labels[prev_i]
        labels[next_i] = right.inverse() @ L2
        edges = []
        for e in X.edges:
            if e.id == edge:
                continue
            if drop in e.ends:
                e = Edge(e.id, e.type, tuple(keep if w == drop else w for w in e.ends))
            edges.append(e)
        vertices = [v for v in X.vertices if v.id != drop]
        corners = list(f.corners)
        corners[i] = corners[(i + 1) % n] = keep
        # keep corner j as the start of side j, also when side i closes the word
        del corners[i + 1 if i + 1 < n else i]
        sides = list(f.sides)
        del sides[i]
        del labels[i]
        new_face = Face(f.id, tuple(corners), tuple(sides))
    else:
        # the split-off bundle is trivial exactly when the second removed sphere is even
        kind = MoveKind.S2XS2 if sphere_square(L2) % 2 == 0 else MoveKind.S2TWIST
        if len({e_prev, edge, e_next}) < 3:
            raise ValueError("surgery move needs three distinct edges")
        merged = L2 @ S2XS2_LAST @ L1
        if sign == -1:
            merged = -merged
        start = f.corners[prev_i]
        end = f.corners[(next_i + 1) % n]
        edges = []
        for e in X.edges:
            if e.id in (edge, e_next):
                continue
            if e.id == e_prev:
                e = _with_ends(e, d_prev, start, end)
            edges.append(e)
        vertices = [v for v in X.vertices if v.id not in (a, b)]
        drop_c = {i, next_i}
        drop_s = {i, next_i}
        corners = [c for j, c in enumerate(f.corners) if j not in drop_c]
        sides = [s for j, s in enumerate(f.sides) if j not in drop_s]
        labels[prev_i] = merged
        labels = [m for j, m in enumerate(labels) if j not in drop_s]
        new_face = Face(f.id, tuple(corners), tuple(sides))
    Y, lab2 = _rebuild(X, lab, f, new_face, labels, vertices, edges)
    verdict = check_admissible(Y, lab2)
    if not verdict.ok:
        raise ValueError(f"blowdown produced an inadmissible labeling:\n{verdict.summary()}")
    return Y, lab2, MoveRecord(kind, edge, "down", before, _snapshot(Y, lab2))


def _eligible(X: SpecialComplex, lab: Labeling) -> list[int]:
    f = X.faces[0]
    n = len(f.corners)
    out = []
    for i, (e, _) in enumerate(f.sides):
        ss = sphere_square(lab[(f.id, side_position(i))])
        if abs(ss) > 1:
            continue
        if ss == 0 and n < 4:
            continue
        if n < 3:
            continue
        out.append(e)
    return sorted(out)


def classify_polygon(X: SpecialComplex, lab: Labeling, choose=min,
                     trace: list | None = None) -> DiffeoType:
    """Blow down until the bigon is reached and return the summands removed."""
    _polygon_cycle(X)
    if not lab.oriented:
        raise ValueError("classification needs an oriented labeling")
    if not check_admissible(X, lab).ok:
        raise ValueError("labeling is not admissible")
    total = DiffeoType()
    lab = normalize_positive(X, lab)
    while len(X.faces[0].corners) > 2:
        cands = _eligible(X, lab)
        if not cands:
            raise ValueError("no blowdown applies (every |k| >= 2)")
        X, lab, rec = blowdown(X, lab, choose(cands))
        if trace is not None:
            trace.append(rec)
        total = total + SUMMAND[rec.kind]
        lab = normalize_positive(X, lab)
    return total


def _polygon_product(mats) -> Gl2z:
    out = IDENTITY
    for m in mats:
        out = J @ m @ out
    return out


def enumerate_admissible(n: int, kmax: int) -> list[tuple[list[Gl2z], DiffeoType]]:
    """All oriented admissible labelings of the n-gon with |k| <= kmax.

    Up to sign moves every oriented labeling has all labels positive except
    possibly the last one, so only those representatives are scanned.
    """
    if n < 1 or kmax < 0:
        raise ValueError("need n >= 1 and kmax >= 0")
    X = polygon(n)
    out = []
    minus_one = Gl2z(-1, 0, 0, -1)
    for ks in itertools.product(range(-kmax, kmax + 1), repeat=n):
        mats = [Gl2z(1, k, 0, -1) for k in ks]
        p = _polygon_product(mats)
        if p == minus_one:
            mats[-1] = -mats[-1]
        elif p != IDENTITY:
            continue
        out.append((mats, classify_polygon(X, polygon_labeling(mats))))
    return out
