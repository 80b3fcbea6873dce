"""From a finite presentation to a labeled special complex with pi_1 = G.

The surface S of genus k is drawn as a sphere with 2k rectangular holes on
the x-axis, hole H_i^+ glued to H_i^- by a reflection.  Every letter of a
relator passes through its handle at a port on the top side of the holes;
consecutive ports are joined by rectilinear arcs above the holes.
"""

from __future__ import annotations

import re
from collections import defaultdict
from dataclasses import dataclass, field

from .complex import (E11, E12, V00, V01, V02, Edge, Face, SpecialComplex, Vertex, census,
                      default_dots, is_closed, is_even, validate)
from .invariants import (H1, NodalReport, Presentation, assemble_nodal, attach_self_intersections,
                         check_iso_criteria, h1_invariants, pi1_presentation)
from .labeling import Labeling, check_admissible, euler_characteristic, even_auto_label

SCHEMA_VERSION = 1


class PipelineError(RuntimeError):
    def __init__(self, stage: str, message: str):
        super().__init__(f"{stage}: {message}")
        self.stage = stage
        self.message = message


# ---------------------------------------------------------------- parsing

_TOKEN = re.compile(r"([A-Za-z][A-Za-z0-9_]*)(?:\^(-?\d+))?")


def parse_presentation(text: str) -> Presentation:
    """Parse ``"a,b | abAB, aa"``; an uppercase single letter is an inverse.

    Multi-letter generator names are separated by spaces in words and may
    carry an exponent, as in ``"x1,x2 | x1^2 x2^-1"``.
    """
    if "|" not in text:
        raise ValueError("expected '<generators> | <relators>'")
    left, right = text.split("|", 1)
    names = [g.strip() for g in left.split(",") if g.strip()]
    if not names:
        raise ValueError("empty generator list")
    if len(set(names)) != len(names):
        raise ValueError("repeated generator name")
    for g in names:
        if not re.fullmatch(r"[A-Za-z][A-Za-z0-9_]*", g):
            raise ValueError(f"bad generator name {g!r}")
    single = all(len(g) == 1 for g in names)
    if single and any(g.isupper() for g in names):
        raise ValueError("single-letter generators must be lowercase")
    index = {g: i + 1 for i, g in enumerate(names)}
    relators = []
    for word in right.split(","):
        word = word.strip()
        if not word:
            continue
        letters: list[int] = []
        if single:
            pos = 0
            w = word.replace(" ", "")
            while pos < len(w):
                ch = w[pos]
                pos += 1
                if ch.lower() not in index or not ch.isalpha():
                    raise ValueError(f"unknown letter {ch!r} in {word!r}")
                g = index[ch.lower()] * (-1 if ch.isupper() else 1)
                m = re.match(r"\^(-?\d+)", w[pos:])
                power = 1
                if m:
                    power = int(m.group(1))
                    pos += m.end()
                letters += _power(g, power)
        else:
            for tok in word.split():
                m = _TOKEN.fullmatch(tok)
                if not m or m.group(1) not in index:
                    raise ValueError(f"unknown letter {tok!r} in {word!r}")
                power = int(m.group(2)) if m.group(2) else 1
                letters += _power(index[m.group(1)], power)
        relators.append(tuple(letters))
    return Presentation(len(names), tuple(relators), tuple(names))


def _power(g: int, n: int) -> list[int]:
    return [g if n > 0 else -g] * abs(n)


def padded_relators(p: Presentation) -> list[tuple[tuple[int, ...], str]]:
    """Relators with the trivial blocks g g g^-1 g^-1 appended for every generator.

    The doubled block makes each curve pass from H_i^- back to H_i^+, which keeps
    the planar picture connected, so the arrangement always fills.
    """
    pad = tuple(x for g in range(1, p.ngens + 1) for x in (g, g, -g, -g))
    if not p.relators:
        return [(pad, "padding")]
    return [(tuple(r) + pad, "relator") for r in p.relators]


# ---------------------------------------------------------------- planar layout

E_, N_, W_, S_ = (1, 0), (0, 1), (-1, 0), (0, -1)
CCW = (E_, N_, W_, S_)
SLOT = 10
HOLE_DEPTH = 20
HOLE_GAP = 20
MARGIN = 3
BASE_HEIGHT = 100
LEVEL = 40


@dataclass(frozen=True)
class Port:
    gen: int  # 0-based generator
    side: int  # +1 for H^+, -1 for H^-
    slot: int
    x: int


@dataclass(frozen=True)
class ArcPath:
    """Rectilinear arc of one relator copy from an exit port to the next entry port."""

    index: int
    relator: int
    copy: int
    start: int  # x of exit port
    end: int  # x of entry port
    height: int

    @property
    def points(self) -> list[tuple[int, int]]:
        return [(self.start, 0), (self.start, self.height), (self.end, self.height), (self.end, 0)]


@dataclass(frozen=True)
class Crossing:
    """Horizontal of arc ``over`` crosses the vertical of arc ``under`` at one of its ends."""

    over: int
    under: int
    end: int  # 0: start (exit) end of ``under``, 1: entry end
    x: int
    y: int


@dataclass
class Layout:
    copies: int
    holes: dict[tuple[int, int], tuple[int, int]]  # (gen, side) -> (x0, slots)
    arcs: list[ArcPath]
    crossings: list[Crossing]
    letters: list[list[tuple[Port, Port]]]  # per relator copy: (entry, exit) per letter

    def hole_x0(self, gen: int, side: int) -> int:
        return self.holes[(gen, side)][0]

    def slots(self, gen: int) -> int:
        return self.holes[(gen, 1)][1]

    def port_x(self, gen: int, side: int, slot: int) -> int:
        return self.hole_x0(gen, side) + SLOT * (slot + 1)

    def width(self, gen: int) -> int:
        return SLOT * (self.slots(gen) + 1)


def _layout(k: int, words: list[tuple[int, ...]], copies: int) -> Layout:
    occ = [0] * k
    slots_of = []  # per relator, per letter: the domino index
    for w in words:
        row = []
        for x in w:
            g = abs(x) - 1
            row.append(occ[g])
            occ[g] += 1
        slots_of.append(row)
    holes = {}
    x0 = 0
    for g in range(k):
        n = copies * occ[g]
        for side in (1, -1):
            holes[(g, side)] = (x0, n)
            x0 += SLOT * (n + 1) + HOLE_GAP
    lay = Layout(copies, holes, [], [], [])

    def port(g: int, side: int, slot: int) -> Port:
        n = lay.slots(g)
        s = slot if side == 1 else n - 1 - slot
        return Port(g, side, slot, lay.port_x(g, side, s))

    # the slot on H^+ used by copy c of an occurrence with sign eps
    def plus_slot(m: int, eps: int, c: int) -> int:
        if copies == 1:
            return m
        first = c if eps == 1 else 1 - c
        return 2 * m + (0 if first == 0 else 1)

    arc_index = 0
    for r, w in enumerate(words):
        letters_c = []
        for c in range(copies):
            row = []
            for j, x in enumerate(w):
                g, eps = abs(x) - 1, (1 if x > 0 else -1)
                s = plus_slot(slots_of[r][j], eps, c)
                entry = port(g, eps, s)
                exit_ = port(g, -eps, s)
                row.append((entry, exit_))
            letters_c.append(row)
        for j in range(len(w)):
            height = BASE_HEIGHT + LEVEL * arc_index
            for c in range(copies):
                p = letters_c[c][j][1].x
                q = letters_c[c][(j + 1) % len(w)][0].x
                if c == 1:
                    # the second copy runs outside the first on rightward arcs, inside on leftward ones
                    height += SLOT if q > p else -SLOT
                lay.arcs.append(ArcPath(arc_index, r, c, p, q, height))
            arc_index += 1
        lay.letters += letters_c
    base = [a for a in lay.arcs if a.copy == 0]
    for a in base:
        lo, hi = sorted((a.start, a.end))
        for b in base:
            if b.height <= a.height:
                continue
            for end, xv in ((0, b.start), (1, b.end)):
                if lo < xv < hi:
                    lay.crossings.append(Crossing(a.index, b.index, end, xv, a.height))
    return lay


class _Planar:
    """Planar graph of axis-parallel segments with integer coordinates."""

    def __init__(self):
        self.segments: list[tuple[tuple[int, int], tuple[int, int], tuple]] = []
        self.adj: dict[tuple[int, int], dict[tuple[int, int], tuple[int, int]]] = defaultdict(dict)
        self.tag: dict[tuple, tuple] = {}

    def polyline(self, points, tag, closed=False):
        pts = list(points) + ([points[0]] if closed else [])
        for p, q in zip(pts, pts[1:]):
            if p != q:
                if p[0] != q[0] and p[1] != q[1]:
                    raise ValueError("segments must be axis-parallel")
                self.segments.append((p, q, tag))

    def build(self):
        cuts: list[set] = [{p, q} for p, q, _ in self.segments]
        horiz = [(i, s) for i, s in enumerate(self.segments) if s[0][1] == s[1][1]]
        vert = [(i, s) for i, s in enumerate(self.segments) if s[0][0] == s[1][0]]
        for i, (p, q, _) in horiz:
            y = p[1]
            x1, x2 = sorted((p[0], q[0]))
            for j, (r, s, _) in vert:
                x = r[0]
                y1, y2 = sorted((r[1], s[1]))
                if x1 <= x <= x2 and y1 <= y <= y2:
                    cuts[i].add((x, y))
                    cuts[j].add((x, y))
        # collinear touching (endpoints of one segment on another)
        for group in (horiz, vert):
            axis = 1 if group is horiz else 0
            by_line = defaultdict(list)
            for i, (p, q, _) in group:
                by_line[p[axis]].append(i)
            for ids in by_line.values():
                for i in ids:
                    p, q, _ = self.segments[i]
                    lo, hi = sorted((p[1 - axis], q[1 - axis]))
                    for j in ids:
                        if i == j:
                            continue
                        for pt in self.segments[j][:2]:
                            if lo <= pt[1 - axis] <= hi:
                                cuts[i].add(pt)
        for i, (p, q, tag) in enumerate(self.segments):
            axis = 0 if p[1] == q[1] else 1
            pts = sorted(cuts[i], key=lambda t: t[axis])
            for u, v in zip(pts, pts[1:]):
                d = _dir(u, v)
                if d in self.adj[u]:
                    raise ValueError(f"overlapping segments at {u}->{v}")
                self.adj[u][d] = v
                self.adj[v][(-d[0], -d[1])] = u
                self.tag[(u, v)] = tag
                self.tag[(v, u)] = tag

    def degree(self, v) -> int:
        return len(self.adj[v])

    def faces(self) -> list[list[tuple[int, int]]]:
        seen = set()
        out = []
        for u in sorted(self.adj):
            for d in CCW:
                if d not in self.adj[u] or (u, d) in seen:
                    continue
                cycle = []
                cu, cd = u, d
                while (cu, cd) not in seen:
                    seen.add((cu, cd))
                    cycle.append(cu)
                    v = self.adj[cu][cd]
                    back = (-cd[0], -cd[1])
                    i = CCW.index(back)
                    for t in range(1, 5):
                        nd = CCW[(i - t) % 4]
                        if nd in self.adj[v]:
                            break
                    cu, cd = v, nd
                out.append(cycle)
        return out

    def connected(self) -> bool:
        nodes = list(self.adj)
        if not nodes:
            return True
        seen = {nodes[0]}
        stack = [nodes[0]]
        while stack:
            v = stack.pop()
            for w in self.adj[v].values():
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(nodes)


def _dir(u, v) -> tuple[int, int]:
    dx, dy = v[0] - u[0], v[1] - u[1]
    return ((dx > 0) - (dx < 0), (dy > 0) - (dy < 0))


def _area(cycle) -> float:
    s = 0
    for (x1, y1), (x2, y2) in zip(cycle, cycle[1:] + cycle[:1]):
        s += x1 * y2 - x2 * y1
    return s / 2


# ---------------------------------------------------------------- curve diagram

@dataclass(frozen=True)
class Curve:
    role: str  # "meridian", "relator" or "padding"
    generator: int | None
    word: tuple[int, ...]


@dataclass
class CurveDiagram:
    presentation: Presentation
    genus: int
    curves: list[Curve]
    layout: Layout
    crossings: int
    regions: int
    filling: bool

    def to_json(self) -> dict:
        return {
            "genus": self.genus,
            "curves": [{"role": c.role, "generator": c.generator, "word": list(c.word)}
                       for c in self.curves],
            "crossings": self.crossings,
            "regions": self.regions,
            "filling": self.filling,
        }


def build_curve_diagram(p: Presentation) -> CurveDiagram:
    if p.ngens < 1:
        raise ValueError("at least one generator is needed")
    rels = padded_relators(p)
    curves = [Curve("meridian", g, ()) for g in range(p.ngens)]
    curves += [Curve(role, None, w) for w, role in rels]
    lay = _layout(p.ngens, [w for w, _ in rels], 1)
    G = _draw(lay, gamma=False, squares=False)
    faces = [f for f in G.planar.faces() if not _hole_interior(G.planar, f)]
    filling = G.planar.connected()
    d = CurveDiagram(p, p.ngens, curves, lay, len(lay.crossings), len(faces), filling)
    if not filling:
        raise ValueError("curve arrangement does not fill the surface")
    return d


@dataclass
class _Drawing:
    planar: _Planar
    layout: Layout
    chords: dict  # s node -> n node
    gammas: list  # (crossing, x_lo, x_hi, y_lo, y_hi)
    squares: bool


def _hole_interior(G: _Planar, cycle) -> bool:
    steps = zip(cycle, cycle[1:] + cycle[:1])
    return _area(cycle) > 0 and all(G.tag[(u, v)][0] == "hole" for u, v in steps)


def _draw(lay: Layout, gamma: bool, squares: bool) -> _Drawing:
    G = _Planar()
    for (g, side), (x0, n) in lay.holes.items():
        w = SLOT * (n + 1)
        G.polyline([(x0, 0), (x0 + w, 0), (x0 + w, -HOLE_DEPTH), (x0, -HOLE_DEPTH)],
                   ("hole", g, side), closed=True)
        if squares and side == 1:
            G.polyline([(x0 - MARGIN, MARGIN), (x0 - MARGIN, -HOLE_DEPTH - MARGIN),
                        (x0 + w + MARGIN, -HOLE_DEPTH - MARGIN), (x0 + w + MARGIN, MARGIN)],
                       ("square", g), closed=True)
    arcs = {(a.index, a.copy): a for a in lay.arcs}
    cuts = defaultdict(list)  # (arc, copy, end) -> [(y_lo, y_hi)]
    chords = {}
    gammas = []
    if gamma:
        for c in lay.crossings:
            over0 = arcs[(c.over, 0)]
            ys = sorted({over0.height, arcs[(c.over, 1)].height})
            under = [arcs[(c.under, cp)] for cp in (0, 1)]
            xs = sorted({u.start if c.end == 0 else u.end for u in under})
            x_lo, x_hi = xs[0] - MARGIN, xs[-1] + MARGIN
            y_lo, y_hi = ys[0] - MARGIN, ys[-1] + MARGIN
            G.polyline([(x_lo, y_lo), (x_hi, y_lo), (x_hi, y_hi), (x_lo, y_hi)],
                       ("gamma", len(gammas)), closed=True)
            for cp in (0, 1):
                cuts[(c.under, cp, c.end)].append((y_lo, y_hi))
            for x in xs:
                chords[(x, y_lo)] = (x, y_hi)
            gammas.append((c, xs, ys, (x_lo, x_hi, y_lo, y_hi)))
    for a in lay.arcs:
        tag = ("rel", a.index, a.copy)
        G.polyline([(a.start, a.height), (a.end, a.height)], tag)
        for end, x in ((0, a.start), (1, a.end)):
            ys = [0]
            for lo, hi in sorted(cuts[(a.index, a.copy, end)]):
                ys += [lo, hi]
            ys.append(a.height)
            for y1, y2 in zip(ys[::2], ys[1::2]):
                G.polyline([(x, y1), (x, y2)], tag)
    G.build()
    return _Drawing(G, lay, chords, gammas, squares)


# ---------------------------------------------------------------- cellular structure

class _Cells:
    """X-vertices, X-edges and the words of closed node paths in a drawing."""

    def __init__(self, D: _Drawing):
        self.D = D
        G = D.planar
        lay = D.layout
        self.ident: dict = {}  # H^- port node -> H^+ port node
        for (g, side), (x0, n) in lay.holes.items():
            if side == -1:
                for s in range(n):
                    self.ident[(lay.port_x(g, -1, s), 0)] = (lay.port_x(g, 1, n - 1 - s), 0)
        nodes = sorted(v for v in G.adj if G.degree(v) >= 3)
        self.is_vertex = set(nodes)
        keep = [v for v in nodes if v not in self.ident]
        self.vid = {v: i for i, v in enumerate(keep)}
        for v, w in self.ident.items():
            self.vid[v] = self.vid[w]
        self.step: dict = {}
        chains: list[list] = []
        for u in nodes:
            for d in CCW:
                if d not in G.adj[u] or (u, G.adj[u][d]) in self.step:
                    continue
                path = [u, G.adj[u][d]]
                while path[-1] not in self.is_vertex:
                    v = path[-1]
                    nxt = [w for w in G.adj[v].values() if w != path[-2]]
                    path.append(nxt[0])
                self._chain(chains, path)
        for s, n in sorted(D.chords.items()):
            self._chain(chains, [s, n])
        self.chains = chains
        # H^- chains become H^+ chains with the reflection
        start = {}
        for ci, path in enumerate(chains):
            tag = G.tag.get((path[0], path[1]))
            if tag and tag[0] == "hole" and tag[2] == 1:
                start[(path[0], _dir(path[0], path[1]))] = (ci, 1)
                start[(path[-1], _dir(path[-1], path[-2]))] = (ci, -1)
        self.alias: dict[int, tuple[int, int]] = {}
        for ci, path in enumerate(chains):
            tag = G.tag.get((path[0], path[1]))
            if tag and tag[0] == "hole" and tag[2] == -1:
                d = _dir(path[0], path[1])
                key = (self.ident[path[0]], (-d[0], d[1]))
                self.alias[ci] = start[key]
        live = [ci for ci in range(len(chains)) if ci not in self.alias]
        self.eid = {ci: i for i, ci in enumerate(live)}

    def _chain(self, chains, path):
        ci = len(chains)
        chains.append(path)
        for u, v in zip(path, path[1:]):
            self.step[(u, v)] = (ci, 1)
            self.step[(v, u)] = (ci, -1)

    def side(self, u, v) -> tuple[int, int]:
        ci, d = self.step[(u, v)]
        if ci in self.alias:
            cj, s = self.alias[ci]
            ci, d = cj, d * s
        return self.eid[ci], d

    def word(self, paths) -> tuple[tuple[int, ...], tuple[tuple[int, int], ...]]:
        """Corners and sides of a closed curve given as consecutive open node paths.

        Each path starts and ends at X-vertices; the end of one path is
        identified with the start of the next.
        """
        corners, sides = [], []
        for path in paths:
            if path[0] not in self.is_vertex or path[-1] not in self.is_vertex:
                raise ValueError("path must start and end at vertices")
            cur = None
            for u, v in zip(path, path[1:]):
                if u in self.is_vertex:
                    cur = self.side(u, v)
                    corners.append(self.vid[u])
                    sides.append(cur)
                elif self.side(u, v) != cur:
                    raise ValueError("inconsistent chain along a path")
        return tuple(corners), tuple(sides)

    def cycle_word(self, cycle):
        i = next(t for t, v in enumerate(cycle) if v in self.is_vertex)
        rot = cycle[i:] + cycle[:i] + [cycle[i]]
        return self.word([rot])

    def walk(self, points) -> list:
        """Node path through axis-parallel waypoints, jumping across chords."""
        G = self.D.planar
        out = [points[0]]
        rev = {n: s for s, n in self.D.chords.items()}
        for target in points[1:]:
            while out[-1] != target:
                cur = out[-1]
                d = _dir(cur, target)
                if d in G.adj[cur]:
                    out.append(G.adj[cur][d])
                elif d == N_ and cur in self.D.chords:
                    out.append(self.D.chords[cur])
                elif d == S_ and cur in rev:
                    out.append(rev[cur])
                else:
                    raise ValueError(f"no way from {cur} toward {target}")
        return out


def _assemble(D: _Drawing) -> SpecialComplex:
    C = _Cells(D)
    G = D.planar
    lay = D.layout
    faces: list[tuple[tuple, tuple]] = []
    for cyc in G.faces():
        if not _hole_interior(G, cyc):
            faces.append(C.cycle_word(cyc))
    for (g, side), (x0, n) in sorted(lay.holes.items()):
        if side != 1:
            continue
        w = SLOT * (n + 1)
        pts = [(x0 + SLOT, 0), (x0 + w, 0), (x0 + w, -HOLE_DEPTH), (x0, -HOLE_DEPTH), (x0, 0),
               (x0 + SLOT, 0)]
        faces.append(C.word([C.walk(pts)]))
        if D.squares:
            top = MARGIN
            pts = [(x0 + SLOT, top), (x0 + w + MARGIN, top), (x0 + w + MARGIN, -HOLE_DEPTH - MARGIN),
                   (x0 - MARGIN, -HOLE_DEPTH - MARGIN), (x0 - MARGIN, top), (x0 + SLOT, top)]
            faces.append(C.word([C.walk(pts)]))
    for c, xs, ys, (x_lo, x_hi, y_lo, y_hi) in D.gammas:
        s1, s2 = (xs[0], y_lo), (xs[1], y_lo)
        n1, n2 = (xs[0], y_hi), (xs[1], y_hi)
        w1, w2 = (x_lo, ys[0]), (x_lo, ys[1])
        e1, e2 = (x_hi, ys[0]), (x_hi, ys[1])
        sw, se, ne, nw = (x_lo, y_lo), (x_hi, y_lo), (x_hi, y_hi), (x_lo, y_hi)
        faces.append(C.word([C.walk([s1, n1]), C.walk([n1, nw, w2, w1, sw, s1])]))
        faces.append(C.word([C.walk([s1, s2]), C.walk([s2, n2]), C.walk([n2, n1]),
                             C.walk([n1, s1])]))
        faces.append(C.word([C.walk([s2, se, e1, e2, ne, n2]), C.walk([n2, s2])]))
    by_rel = defaultdict(list)
    for a in lay.arcs:
        by_rel[(a.relator, a.copy)].append(a)
    for key in sorted(by_rel):
        arcs = sorted(by_rel[key], key=lambda a: a.index)
        faces.append(C.word([C.walk(a.points) for a in arcs]))

    nv = len({v for v in C.vid.values()})
    verts = [Vertex(i, V02) for i in range(nv)]
    edges = []
    for ci, e in sorted(C.eid.items(), key=lambda t: t[1]):
        path = C.chains[ci]
        edges.append(Edge(e, E12, (C.vid[path[0]], C.vid[path[-1]])))
    fs = [Face(i, cs, ss) for i, (cs, ss) in enumerate(faces)]
    return SpecialComplex(verts, edges, fs)


def to_plain_complex(d: CurveDiagram) -> SpecialComplex:
    """X = S with the meridian and relator discs, before the even modifications."""
    return _assemble(_draw(d.layout, gamma=False, squares=False))


def to_even_complex(d: CurveDiagram) -> SpecialComplex:
    """Doubled relator discs, a collar square around each H_i^+ and a gadget at
    every crossing; the result is closed and even."""
    words = [c.word for c in d.curves if c.role != "meridian"]
    lay = _layout(d.genus, words, 2)
    X = _assemble(_draw(lay, gamma=True, squares=True))
    rep = validate(X)
    if not rep.ok:
        raise ValueError("even complex failed validation: " + "; ".join(map(str, rep.errors[:5])))
    if not is_closed(X) or not is_even(X):
        raise ValueError("even complex is not closed and even")
    return X


# ---------------------------------------------------------------- boundary creation

def create_boundary(X: SpecialComplex, edge: int | None = None) -> SpecialComplex:
    """Attach theta x [0,1] along a theta graph drawn across an interior edge.

    The theta graph has vertices a, b in the first two sheets at the edge; its
    arcs cross the edge at p1..p6.  The new boundary theta x 1 has four
    vertices of type (0,0) and two of type (0,1).
    """
    if edge is None:
        cands = [e.id for e in X.edges if e.type == E12 and not e.is_loop]
        if not cands:
            raise ValueError("no interior non-loop edge")
        edge = min(cands)
    try:
        e = X.edge(edge)
    except KeyError:
        raise ValueError(f"no edge {edge}") from None
    if e.type != E12 or e.is_loop:
        raise ValueError(f"edge {edge} is not an interior non-loop edge")
    occ = sorted(X.edge_occurrences()[edge])
    if len(occ) != 3:
        raise ValueError(f"edge {edge} has {len(occ)} sheets")
    u, v = e.ends
    nv = max(x.id for x in X.vertices) + 1
    p = {i: nv + i - 1 for i in range(1, 7)}
    a, b, a1, b1 = nv + 6, nv + 7, nv + 8, nv + 9
    z = [[nv + 10, nv + 11], [nv + 12, nv + 13]]
    ne = max(x.id for x in X.edges) + 1
    ids = iter(range(ne, ne + 100))
    seg = [edge] + [next(ids) for _ in range(6)]
    A = {(j, s): next(ids) for j in range(3) for s in (1, 3, 2)}
    va, vb = next(ids), next(ids)
    top = [[next(ids) for _ in range(3)], [next(ids) for _ in range(3)], [next(ids)]]

    verts = list(X.vertices) + [Vertex(p[i], V02) for i in range(1, 7)]
    verts += [Vertex(a, V02), Vertex(b, V02), Vertex(a1, V01), Vertex(b1, V01)]
    verts += [Vertex(w, V00) for row in z for w in row]
    chain = [u] + [p[i] for i in range(1, 7)] + [v]
    edges = [x for x in X.edges if x.id != edge]
    edges += [Edge(seg[i], E12, (chain[i], chain[i + 1])) for i in range(7)]
    ends = {(0, 1): (a, p[1]), (0, 3): (p[1], p[2]), (0, 2): (p[2], b),
            (1, 1): (a, p[3]), (1, 3): (p[3], p[6]), (1, 2): (p[6], b),
            (2, 1): (a, p[5]), (2, 3): (p[5], p[4]), (2, 2): (p[4], b)}
    edges += [Edge(A[key], E12, ends[key]) for key in sorted(A)]
    edges += [Edge(va, E12, (a, a1)), Edge(vb, E12, (b, b1))]
    top_nodes = [[a1, z[0][0], z[0][1], b1], [a1, z[1][0], z[1][1], b1], [a1, b1]]
    for j in range(3):
        for t, eid in enumerate(top[j]):
            edges.append(Edge(eid, E11, (top_nodes[j][t], top_nodes[j][t + 1])))
    edges.sort(key=lambda x: x.id)

    # replacement paths from u to v, one per sheet: alternating sides and corners
    paths = [
        [(seg[0], 1), p[1], (A[(0, 1)], -1), a, (A[(2, 1)], 1), p[5], (seg[5], 1), p[6], (seg[6], 1)],
        [(seg[0], 1), p[1], (seg[1], 1), p[2], (A[(0, 2)], 1), b, (A[(1, 2)], -1), p[6], (seg[6], 1)],
        [(seg[0], 1), p[1], (A[(0, 3)], 1), p[2], (seg[2], 1), p[3], (A[(1, 3)], 1), p[6],
         (seg[6], 1)],
    ]
    new_faces = {f.id: (list(f.corners), list(f.sides)) for f in X.faces}
    for sheet, (fid, i, d) in sorted(enumerate(occ), key=lambda t: (t[1][0], -t[1][1])):
        cs, ss = new_faces[fid]
        path = paths[sheet]
        psides = path[0::2]
        pcorners = path[1::2]
        if d == -1:
            psides = [(x, -y) for x, y in reversed(psides)]
            pcorners = list(reversed(pcorners))
        new_faces[fid] = (cs[:i + 1] + pcorners + cs[i + 1:], ss[:i] + psides + ss[i + 1:])
    faces = [Face(fid, tuple(cs), tuple(ss)) for fid, (cs, ss) in sorted(new_faces.items())]
    nf = max(f.id for f in X.faces) + 1
    E = seg
    inner = [
        ([a, p[1], p[2], p[3]], [(A[(0, 1)], 1), (E[1], 1), (E[2], 1), (A[(1, 1)], -1)]),
        ([a, p[3], p[4], p[5]], [(A[(1, 1)], 1), (E[3], 1), (E[4], 1), (A[(2, 1)], -1)]),
        ([p[2], p[3], p[4], b], [(E[2], 1), (E[3], 1), (A[(2, 2)], 1), (A[(0, 2)], -1)]),
        ([p[4], p[5], p[6], b], [(E[4], 1), (E[5], 1), (A[(1, 2)], 1), (A[(2, 2)], -1)]),
        ([p[1], p[2]], [(E[1], 1), (A[(0, 3)], -1)]),
        ([p[3], p[4], p[5], p[6]], [(E[3], 1), (A[(2, 3)], -1), (E[5], 1), (A[(1, 3)], -1)]),
        ([p[4], p[5]], [(E[4], 1), (A[(2, 3)], 1)]),
    ]
    alpha_nodes = [[a, p[1], p[2], b], [a, p[3], p[6], b], [a, p[5], p[4], b]]
    for j in range(3):
        cs = alpha_nodes[j][:] + [b1] + list(reversed(top_nodes[j][1:-1])) + [a1]
        ss = [(A[(j, 1)], 1), (A[(j, 3)], 1), (A[(j, 2)], 1), (vb, 1)]
        ss += [(eid, -1) for eid in reversed(top[j])] + [(va, -1)]
        inner.append((cs, ss))
    for t, (cs, ss) in enumerate(inner):
        faces.append(Face(nf + t, tuple(cs), tuple(ss)))
    verts.sort(key=lambda x: x.id)
    return SpecialComplex(verts, edges, faces)


# ---------------------------------------------------------------- the pipeline

@dataclass
class FibrationCertificate:
    presentation: Presentation
    closed: SpecialComplex  # X''
    bounded: SpecialComplex  # X'
    dots: dict
    labeling: Labeling
    admissible: bool
    nodal: NodalReport
    iso: dict
    euler: int
    h1_complex: H1
    h1_presentation: H1
    h1_plain: H1
    diagram: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        names = self.presentation.names
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "fibration-certificate",
            "presentation": {"ngens": self.presentation.ngens,
                             "names": list(names) if names else None,
                             "relators": [list(r) for r in self.presentation.relators],
                             "text": str(self.presentation)},
            "diagram": self.diagram,
            "closed_complex": self.closed.to_json(),
            "complex": self.bounded.with_dots(self.dots).to_json(),
            "labels": self.labeling.to_json()["labels"],
            "verdicts": {
                "admissible": self.admissible,
                "nodal": self.nodal.to_json(),
                "iso_criteria": self.iso,
                "euler": self.euler,
                "h1": {"complex": self.h1_complex.to_json(),
                       "presentation": self.h1_presentation.to_json(),
                       "before_modification": self.h1_plain.to_json()},
            },
        }


def synthesize(p: Presentation) -> FibrationCertificate:
    def stage(name, fn, *args):
        try:
            return fn(*args)
        except PipelineError:
            raise
        except (ValueError, KeyError) as exc:
            raise PipelineError(name, str(exc)) from exc

    d = stage("build_curve_diagram", build_curve_diagram, p)
    plain = stage("to_plain_complex", to_plain_complex, d)
    Xc = stage("to_even_complex", to_even_complex, d)
    h_plain = h1_invariants(plain)
    h_even = h1_invariants(Xc)
    if h_plain != h_even:
        raise PipelineError("to_even_complex", f"H1 changed from {h_plain} to {h_even}")
    Xb = stage("create_boundary", create_boundary, Xc)
    rep = validate(Xb)
    if not rep.ok or not is_even(Xb):
        raise PipelineError("create_boundary", "result is not a valid even complex")
    dots = stage("default_dots", default_dots, Xb)
    lab = stage("even_auto_label", even_auto_label, Xb, dots)
    verdict = check_admissible(Xb.with_dots(dots), lab)
    if not verdict.ok:
        raise PipelineError("check_admissible", verdict.summary())
    nodal = attach_self_intersections(Xb, lab, assemble_nodal(Xb))
    if not all(c.is_sphere for c in nodal.components):
        raise PipelineError("assemble_nodal", "a nodal component is not a sphere")
    iso = check_iso_criteria(Xb, nodal)
    if not iso.verdict:
        raise PipelineError("check_iso_criteria", str(iso.to_json()))
    h_x = h1_invariants(Xb)
    h_p = h1_invariants(p)
    if h_x != h_p:
        raise PipelineError("h1", f"complex gives {h_x}, presentation gives {h_p}")
    return FibrationCertificate(p, Xc, Xb, dots, lab, True, nodal, iso.to_json(),
                                euler_characteristic(Xb), h_x, h_p, h_plain, d.to_json())


@dataclass
class VerificationReport:
    checks: list[tuple[str, bool, str]]

    @property
    def ok(self) -> bool:
        return all(ok for _, ok, _ in self.checks)

    def to_json(self) -> dict:
        return {"schema_version": SCHEMA_VERSION, "ok": self.ok,
                "checks": [{"name": n, "ok": ok, "detail": det} for n, ok, det in self.checks]}


def verify_certificate(doc: dict | FibrationCertificate) -> VerificationReport:
    """Recheck every verdict of a certificate from its stored data alone."""
    if isinstance(doc, FibrationCertificate):
        doc = doc.to_json()
    checks = []

    def check(name, ok, detail=""):
        checks.append((name, bool(ok), detail))

    pres = doc["presentation"]
    p = Presentation(pres["ngens"], tuple(tuple(r) for r in pres["relators"]),
                     tuple(pres["names"]) if pres.get("names") else None)
    Xc = SpecialComplex.from_json(doc["closed_complex"])
    Xb = SpecialComplex.from_json(doc["complex"])
    lab = Labeling.from_json({"labels": doc["labels"]})
    check("closed complex valid", validate(Xc).ok)
    check("closed complex closed", is_closed(Xc))
    check("closed complex even", is_even(Xc))
    check("complex valid", validate(Xb).ok)
    check("complex even", is_even(Xb))
    c = census(Xb)
    check("boundary theta census", (c.n0, c.n1) == (4, 2), f"({c.n0}, {c.n1})")
    bedges = [e for e in Xb.edges if e.type == E11]
    deg = defaultdict(int)
    for e in bedges:
        for w in e.ends:
            deg[w] += 1
    trivalent = sorted(w for w, k in deg.items() if k == 3)
    check("boundary is a theta graph",
          len(trivalent) == 2 and all(k in (2, 3) for k in deg.values()))
    verdict = check_admissible(Xb, lab)
    check("labeling admissible", verdict.ok, verdict.summary())
    nodal = attach_self_intersections(Xb, lab, assemble_nodal(Xb))
    check("nodal components are spheres", all(x.is_sphere for x in nodal.components),
          f"{len(nodal.components)} components")
    check("three nodal spheres", len(nodal.spheres) == 3)
    iso = check_iso_criteria(Xb, nodal)
    check("iso criteria", iso.verdict)
    chi = euler_characteristic(Xb)
    check("euler", chi == doc["verdicts"]["euler"], str(chi))
    hx = h1_invariants(Xb)
    hp = h1_invariants(p)
    hq = h1_invariants(pi1_presentation(Xb)[0])
    check("H1 complex = H1 presentation", hx == hp, f"{hx} vs {hp}")
    check("H1 of pi1 presentation", hq == hp, str(hq))
    stored = doc["verdicts"]["h1"]["complex"]
    check("stored H1", [hx.rank, list(hx.torsion)] == [stored["rank"], stored["torsion"]])
    return VerificationReport(checks)
