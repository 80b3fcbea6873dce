"""Special 2-complexes: incidence data, validation, strata census and dot markings.

A face is stored as a cyclic word ``c0 s0 c1 s1 ... c_{n-1} s_{n-1}`` where side
``s_i = (edge, dir)`` runs from corner ``c_i`` to corner ``c_{i+1}``.  Positions
in the word are 0-based: corner ``i`` sits at position ``2i`` and side ``i`` at
``2i + 1``.  Corner and side references used by dots and labelings are
``(face id, position)`` pairs.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Mapping

V00, V01, V02 = (0, 0), (0, 1), (0, 2)
E11, E12 = (1, 1), (1, 2)
VERTEX_TYPES = (V00, V01, V02)
EDGE_TYPES = (E11, E12)

CornerRef = tuple[int, int]
EdgeEnd = tuple[int, int]  # (edge id, 0 for the start, 1 for the end)


@dataclass(frozen=True)
class Vertex:
    id: int
    type: tuple[int, int]


@dataclass(frozen=True)
class Edge:
    id: int
    type: tuple[int, int]
    ends: tuple[int, int]

    @property
    def is_loop(self) -> bool:
        return self.ends[0] == self.ends[1]


@dataclass(frozen=True)
class Face:
    id: int
    corners: tuple[int, ...]
    sides: tuple[tuple[int, int], ...]

    def __len__(self) -> int:
        return len(self.corners)

    def corner_at(self, position: int) -> int:
        return self.corners[position // 2]

    def side_at(self, position: int) -> tuple[int, int]:
        return self.sides[position // 2]

    def word(self) -> list:
        out = []
        for c, s in zip(self.corners, self.sides):
            out.append(("corner", c))
            out.append(("side", s))
        return out


def side_position(i: int) -> int:
    return 2 * i + 1


def corner_position(i: int) -> int:
    return 2 * i


@dataclass(frozen=True)
class Issue:
    kind: str
    cell: str
    message: str

    def to_json(self) -> dict:
        return {"kind": self.kind, "cell": self.cell, "message": self.message}


@dataclass
class ValidationReport:
    errors: list[Issue] = field(default_factory=list)
    warnings: list[Issue] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "errors": [i.to_json() for i in self.errors],
            "warnings": [i.to_json() for i in self.warnings],
        }


@dataclass(frozen=True)
class StrataCensus:
    n0: int
    n1: int
    n2: int
    e11: int
    e12: int
    f: int

    @property
    def vertices(self) -> int:
        return self.n0 + self.n1 + self.n2

    def to_json(self) -> dict:
        return {"n0": self.n0, "n1": self.n1, "n2": self.n2,
                "e11": self.e11, "e12": self.e12, "f": self.f}


class SpecialComplex:
    """Immutable incidence structure of a special 2-complex."""

    def __init__(self, vertices: Iterable[Vertex], edges: Iterable[Edge],
                 faces: Iterable[Face], dots: Mapping[int, Iterable[CornerRef]] | None = None):
        self.vertices: tuple[Vertex, ...] = tuple(vertices)
        self.edges: tuple[Edge, ...] = tuple(edges)
        self.faces: tuple[Face, ...] = tuple(faces)
        dmap = {}
        for v, refs in (dots or {}).items():
            dmap[int(v)] = tuple(sorted(tuple(r) for r in refs))
        self.dots: dict[int, tuple[CornerRef, ...]] = dict(sorted(dmap.items()))
        self._v = {v.id: v for v in self.vertices}
        self._e = {e.id: e for e in self.edges}
        self._f = {f.id: f for f in self.faces}
        self._dotted = {r for refs in self.dots.values() for r in refs}

    # lookups
    def vertex(self, vid: int) -> Vertex:
        return self._v[vid]

    def edge(self, eid: int) -> Edge:
        return self._e[eid]

    def face(self, fid: int) -> Face:
        return self._f[fid]

    def has_vertex(self, vid) -> bool:
        return vid in self._v

    def has_edge(self, eid) -> bool:
        return eid in self._e

    def vtype(self, vid: int) -> tuple[int, int]:
        return self._v[vid].type

    def etype(self, eid: int) -> tuple[int, int]:
        return self._e[eid].type

    def is_dotted(self, ref: CornerRef) -> bool:
        return tuple(ref) in self._dotted

    def with_dots(self, dots: Mapping[int, Iterable[CornerRef]]) -> "SpecialComplex":
        return SpecialComplex(self.vertices, self.edges, self.faces, dots)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SpecialComplex):
            return NotImplemented
        return (self.vertices == other.vertices and self.edges == other.edges
                and self.faces == other.faces and self.dots == other.dots)

    def __repr__(self) -> str:
        c = census(self)
        return (f"SpecialComplex(n0={c.n0}, n1={c.n1}, n2={c.n2}, "
                f"e11={c.e11}, e12={c.e12}, f={c.f})")

    # occurrences
    def side_occurrences(self):
        """Yield (face id, side index, edge id, dir) for every face side."""
        for f in self.faces:
            for i, (e, d) in enumerate(f.sides):
                yield f.id, i, e, d

    def edge_occurrences(self) -> dict[int, list[tuple[int, int, int]]]:
        occ: dict[int, list] = {e.id: [] for e in self.edges}
        for fid, i, e, d in self.side_occurrences():
            occ.setdefault(e, []).append((fid, i, d))
        return occ

    def corners_at(self) -> dict[int, list[tuple[int, int]]]:
        out: dict[int, list] = {v.id: [] for v in self.vertices}
        for f in self.faces:
            for i, c in enumerate(f.corners):
                out.setdefault(c, []).append((f.id, i))
        return out

    def edge_ends_at(self) -> dict[int, list[EdgeEnd]]:
        out: dict[int, list] = {v.id: [] for v in self.vertices}
        for e in self.edges:
            out.setdefault(e.ends[0], []).append((e.id, 0))
            out.setdefault(e.ends[1], []).append((e.id, 1))
        return out

    def corner_ends(self, face: Face, i: int) -> tuple[EdgeEnd, EdgeEnd]:
        """Edge-ends spanned by corner i of a face: arriving side, departing side."""
        e_in, d_in = face.sides[i - 1]
        e_out, d_out = face.sides[i]
        return (e_in, 1 if d_in == 1 else 0), (e_out, 0 if d_out == 1 else 1)

    def corner_pair(self, ref: CornerRef) -> frozenset:
        f = self.face(ref[0])
        return frozenset(self.corner_ends(f, ref[1] // 2))

    def corner_refs_at(self, vid: int) -> list[CornerRef]:
        refs = []
        for f in self.faces:
            for i, c in enumerate(f.corners):
                if c == vid:
                    refs.append((f.id, corner_position(i)))
        return refs

    # serialization
    def to_json(self) -> dict:
        doc = {
            "vertices": [{"id": v.id, "type": list(v.type)} for v in self.vertices],
            "edges": [{"id": e.id, "type": list(e.type), "ends": list(e.ends)} for e in self.edges],
            "faces": [],
            "dots": {str(v): [list(r) for r in refs] for v, refs in self.dots.items()},
        }
        for f in self.faces:
            word = []
            for c, (e, d) in zip(f.corners, f.sides):
                word.append({"corner": c})
                word.append({"side": {"edge": e, "dir": d}})
            doc["faces"].append({"id": f.id, "word": word})
        return doc

    @classmethod
    def from_json(cls, doc: Mapping) -> "SpecialComplex":
        try:
            vertices = [Vertex(_int(v["id"]), _pair(v["type"])) for v in doc["vertices"]]
            edges = []
            for e in doc["edges"]:
                ends = e["ends"]
                if len(ends) != 2:
                    raise ValueError(f"edge {e['id']} must have two ends")
                edges.append(Edge(_int(e["id"]), _pair(e["type"]), (_int(ends[0]), _int(ends[1]))))
            faces = []
            for f in doc["faces"]:
                word = f["word"]
                if len(word) % 2:
                    raise ValueError(f"face {f['id']}: word must alternate corners and sides")
                corners, sides = [], []
                for j, item in enumerate(word):
                    if j % 2 == 0:
                        if "corner" not in item:
                            raise ValueError(f"face {f['id']}: expected a corner at position {j}")
                        corners.append(_int(item["corner"]))
                    else:
                        if "side" not in item:
                            raise ValueError(f"face {f['id']}: expected a side at position {j}")
                        s = item["side"]
                        sides.append((_int(s["edge"]), _int(s["dir"])))
                faces.append(Face(_int(f["id"]), tuple(corners), tuple(sides)))
            dots = {}
            for v, refs in (doc.get("dots") or {}).items():
                dots[int(v)] = [(_int(r[0]), _int(r[1])) for r in refs]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed complex document: {exc!r}") from exc
        return cls(vertices, edges, faces, dots)


def _int(x) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise ValueError(f"expected an integer, got {x!r}")
    return x


def _pair(x) -> tuple[int, int]:
    if isinstance(x, str):
        x = x.strip("()[] ").split(",")
        x = [int(t) for t in x]
    if len(x) != 2:
        raise ValueError(f"expected a type pair, got {x!r}")
    return (int(x[0]), int(x[1]))


def validate(X: SpecialComplex) -> ValidationReport:
    """Check all local conditions of a special complex; never raises."""
    rep = ValidationReport()
    err = lambda kind, cell, msg: rep.errors.append(Issue(kind, cell, msg))
    warn = lambda kind, cell, msg: rep.warnings.append(Issue(kind, cell, msg))

    for name, items in (("vertex", X.vertices), ("edge", X.edges), ("face", X.faces)):
        for i, n in Counter(c.id for c in items).items():
            if n > 1:
                err("duplicate-id", f"{name} {i}", f"id used {n} times")

    for v in X.vertices:
        if v.type not in VERTEX_TYPES:
            err("bad-type", f"vertex {v.id}", f"unknown vertex type {v.type}")
    for e in X.edges:
        if e.type not in EDGE_TYPES:
            err("bad-type", f"edge {e.id}", f"unknown edge type {e.type}")
            continue
        allowed = (V00, V01) if e.type == E11 else (V01, V02)
        for w in e.ends:
            if not X.has_vertex(w):
                err("dangling", f"edge {e.id}", f"endpoint {w} is not a vertex")
            elif X.vtype(w) not in allowed:
                err("endpoint-type", f"edge {e.id}",
                    f"{e.type} edge has endpoint {w} of type {X.vtype(w)}")
        if e.is_loop:
            warn("loop", f"edge {e.id}", "loop edge (both ends at the same vertex)")
    if rep.errors:
        return rep

    structural = False
    no_cells = not X.vertices and not X.edges
    for f in X.faces:
        if len(f.corners) != len(f.sides):
            err("word", f"face {f.id}", "corners and sides do not alternate")
            structural = True
            continue
        if not f.corners:
            if no_cells:
                continue  # a closed surface component without 0- and 1-cells
            err("word", f"face {f.id}", "empty boundary word")
            structural = True
            continue
        n = len(f.corners)
        for i, (e, d) in enumerate(f.sides):
            if not X.has_edge(e):
                err("dangling", f"face {f.id}", f"side {i} uses unknown edge {e}")
                structural = True
                continue
            if d not in (1, -1):
                err("word", f"face {f.id}", f"side {i} has direction {d}")
                structural = True
                continue
            a, b = X.edge(e).ends
            start, end = (a, b) if d == 1 else (b, a)
            if start != f.corners[i] or end != f.corners[(i + 1) % n]:
                err("word", f"face {f.id}",
                    f"side {i} (edge {e}, dir {d}) does not join corners "
                    f"{f.corners[i]} -> {f.corners[(i + 1) % n]}")
                structural = True
    if structural:
        return rep

    occ = X.edge_occurrences()
    for e in X.edges:
        want = 1 if e.type == E11 else 3
        if len(occ[e.id]) != want:
            err("sheets", f"edge {e.id}",
                f"{e.type} edge has {len(occ[e.id])} face sides, expected {want}")

    ends_at = X.edge_ends_at()
    corner_pairs: dict[int, list] = defaultdict(list)
    for f in X.faces:
        for i, c in enumerate(f.corners):
            corner_pairs[c].append(((f.id, corner_position(i)), X.corner_ends(f, i)))

    for v in X.vertices:
        ends = ends_at[v.id]
        types = Counter(X.etype(e) for e, _ in ends)
        pairs = corner_pairs.get(v.id, [])
        cell = f"vertex {v.id}"
        if v.type == V00:
            if types != Counter({E11: 2}):
                err("link", cell, f"(0,0) vertex needs two (1,1) edge-ends, has {dict(types)}")
            elif len(pairs) != 1:
                err("link", cell, f"(0,0) vertex needs 1 corner, has {len(pairs)}")
            elif set(pairs[0][1]) != set(ends):
                err("link", cell, "corner does not span the two edge-ends")
        elif v.type == V01:
            if types != Counter({E11: 3, E12: 1}):
                err("link", cell, f"(0,1) vertex needs 3 (1,1) and 1 (1,2) edge-ends, has {dict(types)}")
            elif len(pairs) != 3:
                err("link", cell, f"(0,1) vertex needs 3 corners, has {len(pairs)}")
            else:
                inner = [x for x in ends if X.etype(x[0]) == E12][0]
                outer = {x for x in ends if X.etype(x[0]) == E11}
                seen = set()
                for _, (p, q) in pairs:
                    s = {p, q}
                    if inner not in s or not (s - {inner}) <= outer or len(s) != 2:
                        err("link", cell, "corner does not pair the (1,2) end with a (1,1) end")
                        break
                    seen |= s - {inner}
                else:
                    if seen != outer:
                        err("link", cell, "corners do not reach every (1,1) end")
        else:
            if types != Counter({E12: 4}):
                err("link", cell, f"(0,2) vertex needs four (1,2) edge-ends, has {dict(types)}")
            elif len(pairs) != 6:
                err("link", cell, f"(0,2) vertex needs 6 corners, has {len(pairs)}")
            else:
                spans = [frozenset(p) for _, p in pairs]
                if any(len(s) != 2 for s in spans) or len(set(spans)) != 6:
                    err("link", cell, "corners do not form the complete graph on the four edge-ends")

    for vid, refs in X.dots.items():
        cell = f"vertex {vid}"
        if not X.has_vertex(vid) or X.vtype(vid) != V02:
            err("dots", cell, "dots placed on a vertex that is not of type (0,2)")
            continue
        if len(refs) != 2 or len(set(refs)) != 2:
            err("dots", cell, "a dot marking needs two distinct corners")
            continue
        spans = []
        for ref in refs:
            fid, pos = ref
            if fid not in X._f or pos % 2 or pos // 2 >= len(X.face(fid)) \
                    or X.face(fid).corner_at(pos) != vid:
                err("dots", cell, f"corner {ref} is not a corner at this vertex")
                break
            spans.append(X.corner_pair(ref))
        else:
            if spans[0] & spans[1]:
                err("dots", cell, "dotted corners are not opposite")
    for v in X.vertices:
        if v.type == V02 and v.id not in X.dots:
            warn("dots", f"vertex {v.id}", "no dot marking")
    return rep


def census(X: SpecialComplex) -> StrataCensus:
    vt = Counter(v.type for v in X.vertices)
    et = Counter(e.type for e in X.edges)
    return StrataCensus(vt[V00], vt[V01], vt[V02], et[E11], et[E12], len(X.faces))


def is_even(X: SpecialComplex) -> bool:
    return all(len(f.corners) % 2 == 0 for f in X.faces)


def is_closed(X: SpecialComplex) -> bool:
    return not any(v.type in (V00, V01) for v in X.vertices) and \
        not any(e.type == E11 for e in X.edges)


@dataclass(frozen=True)
class BoundaryInterior:
    boundary_vertices: tuple[int, ...]
    boundary_edges: tuple[int, ...]
    interior_components: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]
    is_surface: bool

    @property
    def boundary_nonempty(self) -> bool:
        return bool(self.boundary_vertices or self.boundary_edges)

    def to_json(self) -> dict:
        return {
            "boundary_vertices": list(self.boundary_vertices),
            "boundary_edges": list(self.boundary_edges),
            "interior_components": [{"vertices": list(vs), "edges": list(es)}
                                    for vs, es in self.interior_components],
            "is_surface": self.is_surface,
        }


def boundary_and_interior(X: SpecialComplex) -> BoundaryInterior:
    """Boundary subcomplex and the components of the interior 1-skeleton.

    Interior components are returned as (vertex ids, edge ids): the (0,2)
    vertices and (1,2) edges of each component.
    """
    bverts = tuple(v.id for v in X.vertices if v.type in (V00, V01))
    bedges = tuple(e.id for e in X.edges if e.type == E11)
    parent: dict = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for v in X.vertices:
        if v.type == V02:
            find(("v", v.id))
    for e in X.edges:
        if e.type != E12:
            continue
        find(("e", e.id))
        for w in e.ends:
            if X.vtype(w) == V02:
                parent[find(("e", e.id))] = find(("v", w))
    groups: dict = defaultdict(lambda: ([], []))
    for key in list(parent):
        root = find(key)
        kind, i = key
        groups[root][0 if kind == "v" else 1].append(i)
    comps = sorted((tuple(sorted(vs)), tuple(sorted(es))) for vs, es in groups.values())
    return BoundaryInterior(bverts, bedges, tuple(comps), not X.vertices and not X.edges)


def default_dots(X: SpecialComplex) -> dict[int, tuple[CornerRef, CornerRef]]:
    """Dot every (0,2) vertex at its lowest corner (face id, position) and the opposite one."""
    refs_at: dict[int, list] = defaultdict(list)
    for f in X.faces:
        for i, c in enumerate(f.corners):
            if X.vtype(c) == V02:
                refs_at[c].append((f.id, corner_position(i)))
    out = {}
    for v in X.vertices:
        if v.type != V02:
            continue
        refs = sorted(refs_at[v.id])
        if not refs:
            continue
        first = refs[0]
        span = X.corner_pair(first)
        opposite = [r for r in refs[1:] if not (X.corner_pair(r) & span)]
        if not opposite:
            raise ValueError(f"vertex {v.id} has no corner opposite to {first}")
        out[v.id] = (first, opposite[0])
    return out


def relabel(X: SpecialComplex, vmap: Mapping[int, int], emap: Mapping[int, int],
            fmap: Mapping[int, int]) -> SpecialComplex:
    """Rename vertex, edge and face ids (positions inside words are unchanged)."""
    vs = [Vertex(vmap[v.id], v.type) for v in X.vertices]
    es = [Edge(emap[e.id], e.type, (vmap[e.ends[0]], vmap[e.ends[1]])) for e in X.edges]
    fs = [Face(fmap[f.id], tuple(vmap[c] for c in f.corners),
               tuple((emap[e], d) for e, d in f.sides)) for f in X.faces]
    dots = {vmap[v]: [(fmap[r[0]], r[1]) for r in refs] for v, refs in X.dots.items()}
    return SpecialComplex(vs, es, fs, dots)
