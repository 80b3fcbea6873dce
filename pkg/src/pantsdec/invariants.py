"""Nodal surface, sphere self-intersections, pi_1 presentations, H_1 by Smith
normal form, and the criteria under which pi_1(M) -> pi_1(X) is an isomorphism."""

from __future__ import annotations

import heapq
from collections import defaultdict, deque
from dataclasses import dataclass

from .complex import E11, V00, V01, SpecialComplex, boundary_and_interior, side_position
from .labeling import Labeling


# ---------------------------------------------------------------- nodal surface

@dataclass(frozen=True)
class NodalPiece:
    kind: str  # "disc", "annulus" or "pants"
    cell: int  # vertex id for discs and pants, edge id for annuli
    edge_end: tuple[int, int] | None = None  # for discs: the edge-end they cap

    @property
    def slots(self) -> int:
        return {"disc": 1, "annulus": 2, "pants": 3}[self.kind]

    @property
    def euler(self) -> int:
        return {"disc": 1, "annulus": 0, "pants": -1}[self.kind]

    def to_json(self) -> dict:
        out = {"kind": self.kind, "cell": self.cell}
        if self.edge_end is not None:
            out["edge_end"] = list(self.edge_end)
        return out


@dataclass
class NodalComponent:
    pieces: list[NodalPiece]
    euler: int
    embedded: bool
    self_intersection: int | None = None

    @property
    def is_sphere(self) -> bool:
        return self.euler == 2

    @property
    def edges(self) -> list[int]:
        return sorted(p.cell for p in self.pieces if p.kind == "annulus")

    @property
    def pants(self) -> list[int]:
        return sorted(p.cell for p in self.pieces if p.kind == "pants")

    def to_json(self) -> dict:
        return {"euler": self.euler, "is_sphere": self.is_sphere, "embedded": self.embedded,
                "self_intersection": self.self_intersection, "edges": self.edges,
                "pants": self.pants, "pieces": [p.to_json() for p in self.pieces]}


@dataclass
class NodalReport:
    pieces: list[NodalPiece]
    components: list[NodalComponent]
    nodes: list[tuple[int, int, int]]  # (vertex, component, component)

    @property
    def spheres(self) -> list[NodalComponent]:
        return [c for c in self.components if c.is_sphere]

    def component_of_pants(self, vid: int) -> NodalComponent:
        for c in self.components:
            if vid in c.pants:
                return c
        raise KeyError(vid)

    def to_json(self) -> dict:
        return {"components": [c.to_json() for c in self.components],
                "nodes": [list(n) for n in self.nodes],
                "piece_count": len(self.pieces)}


class _UnionFind:
    def __init__(self):
        self.parent: dict = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def assemble_nodal(X: SpecialComplex) -> NodalReport:
    """Glue discs, annuli and pants over the boundary of X into the nodal surface."""
    pieces: list[NodalPiece] = []
    index: dict = {}

    def add(p: NodalPiece, key):
        index[key] = len(pieces)
        pieces.append(p)

    for e in X.edges:
        if e.type != E11:
            continue
        for end in (0, 1):
            w = e.ends[end]
            if X.vtype(w) == V00:
                add(NodalPiece("disc", w, (e.id, end)), ("disc", e.id, end))
    for e in X.edges:
        if e.type == E11:
            add(NodalPiece("annulus", e.id), ("annulus", e.id))
    for v in X.vertices:
        if v.type == V01:
            add(NodalPiece("pants", v.id), ("pants", v.id))

    uf = _UnionFind()
    for i in range(len(pieces)):
        uf.find(i)
    for e in X.edges:
        if e.type != E11:
            continue
        a = index[("annulus", e.id)]
        for end in (0, 1):
            w = e.ends[end]
            if X.vtype(w) == V00:
                uf.union(a, index[("disc", e.id, end)])
            else:
                uf.union(a, index[("pants", w)])

    groups: dict = defaultdict(list)
    for i in range(len(pieces)):
        groups[uf.find(i)].append(i)
    roots = sorted(groups, key=lambda r: min(groups[r]))
    comp_of = {}
    for ci, r in enumerate(roots):
        for i in groups[r]:
            comp_of[i] = ci

    discs_at: dict = defaultdict(list)
    for i, p in enumerate(pieces):
        if p.kind == "disc":
            discs_at[p.cell].append(comp_of[i])
    nodes = []
    immersed = set()
    for v in X.vertices:
        if v.type != V00:
            continue
        ca, cb = sorted(discs_at[v.id])
        nodes.append((v.id, ca, cb))
        if ca == cb:
            immersed.add(ca)
    comps = []
    for ci, r in enumerate(roots):
        ps = [pieces[i] for i in groups[r]]
        comps.append(NodalComponent(ps, sum(p.euler for p in ps), ci not in immersed))
    return NodalReport(pieces, comps, nodes)


def self_intersection(X: SpecialComplex, lab: Labeling, component: NodalComponent) -> int:
    """-(sum of k) over the boundary edges under an embedded component."""
    if not component.embedded:
        raise ValueError("self-intersection is only defined here for embedded components")
    occ = X.edge_occurrences()
    total = 0
    for eid in component.edges:
        (fid, i, _), = occ[eid]
        m = lab[(fid, side_position(i))]
        if not m.is_positive():
            raise ValueError(f"label {m} on edge {eid} is not positive")
        total += m.b
    return -total


def attach_self_intersections(X: SpecialComplex, lab: Labeling, report: NodalReport) -> NodalReport:
    for c in report.components:
        try:
            c.self_intersection = self_intersection(X, lab, c)
        except ValueError:
            c.self_intersection = None
    return report


# ---------------------------------------------------------------- presentations

@dataclass(frozen=True)
class Presentation:
    """Generators 1..n; a relator is a tuple of nonzero ints, -i meaning g_i^-1."""

    ngens: int
    relators: tuple[tuple[int, ...], ...] = ()
    names: tuple[str, ...] | None = None

    def __post_init__(self):
        for r in self.relators:
            for x in r:
                if x == 0 or abs(x) > self.ngens:
                    raise ValueError(f"letter {x} does not name one of {self.ngens} generators")

    def exponent_matrix(self) -> list[dict[int, int]]:
        rows = []
        for r in self.relators:
            row: dict[int, int] = defaultdict(int)
            for x in r:
                row[abs(x) - 1] += 1 if x > 0 else -1
            rows.append({c: v for c, v in row.items() if v})
        return rows

    def word_str(self, r) -> str:
        names = self.names or tuple(f"g{i}" for i in range(1, self.ngens + 1))
        out = []
        for x in r:
            n = names[abs(x) - 1]
            out.append(n if x > 0 else (n.upper() if len(n) == 1 else n + "^-1"))
        return "".join(out) if all(len(n) == 1 for n in names) else " ".join(out)

    def __str__(self) -> str:
        names = self.names or tuple(f"g{i}" for i in range(1, self.ngens + 1))
        return ",".join(names) + " | " + ", ".join(self.word_str(r) for r in self.relators)


def pi1_presentation(X: SpecialComplex) -> tuple[Presentation, tuple[int, ...]]:
    """Presentation of pi_1(X) from a BFS spanning tree of the 1-skeleton.

    Returns the presentation and, for each generator, the edge it comes from.
    """
    if not X.vertices:
        if len(X.faces) > 1:
            raise ValueError("complex is disconnected")
        return Presentation(0, ()), ()
    adj: dict[int, list] = defaultdict(list)
    for e in sorted(X.edges, key=lambda e: e.id):
        a, b = e.ends
        adj[a].append((e.id, b))
        adj[b].append((e.id, a))
    root = min(v.id for v in X.vertices)
    seen = {root}
    tree = set()
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for eid, w in adj[v]:
            if w not in seen:
                seen.add(w)
                tree.add(eid)
                queue.append(w)
    if len(seen) != len(X.vertices):
        raise ValueError("complex is disconnected")
    gens = tuple(sorted(e.id for e in X.edges if e.id not in tree))
    gi = {e: i + 1 for i, e in enumerate(gens)}
    relators = []
    for f in X.faces:
        relators.append(tuple(gi[e] * d for e, d in f.sides if e in gi))
    return Presentation(len(gens), tuple(relators)), gens


# ---------------------------------------------------------------- Smith normal form

def smith_diagonal(rows: list[dict[int, int]], ncols: int) -> list[int]:
    """Nonzero invariant factors of an integer matrix given as sparse rows.

    Unit pivots are eliminated first on the sparse structure (smallest rows
    first); the remaining block is reduced densely.
    """
    rows = [dict(r) for r in rows if r]
    cols: dict[int, set] = defaultdict(set)
    for ri, r in enumerate(rows):
        for c in r:
            cols[c].add(ri)
    alive = set(range(len(rows)))
    diag: list[int] = []
    heap = [(len(r), ri) for ri, r in enumerate(rows)]
    heapq.heapify(heap)
    while heap:
        length, ri = heapq.heappop(heap)
        if ri not in alive:
            continue
        r = rows[ri]
        if length != len(r):
            heapq.heappush(heap, (len(r), ri))
            continue
        if not r:
            alive.discard(ri)
            continue
        units = [c for c, v in r.items() if v in (1, -1)]
        if not units:
            continue
        c = min(units, key=lambda c: (len(cols[c]), c))
        v = r[c]
        for rj in list(cols[c]):
            if rj == ri:
                continue
            other = rows[rj]
            factor = other[c] * v  # v = +-1 so v^-1 = v
            for cc, val in r.items():
                nv = other.get(cc, 0) - factor * val
                if nv:
                    if cc not in other:
                        cols[cc].add(rj)
                    other[cc] = nv
                elif cc in other:
                    del other[cc]
                    cols[cc].discard(rj)
            heapq.heappush(heap, (len(other), rj))
        for cc in r:
            cols[cc].discard(ri)
        alive.discard(ri)
        rows[ri] = {}
        diag.append(1)
    rest = [rows[ri] for ri in sorted(alive) if rows[ri]]
    if rest:
        used = sorted({c for r in rest for c in r})
        pos = {c: i for i, c in enumerate(used)}
        dense = [[0] * len(used) for _ in rest]
        for i, r in enumerate(rest):
            for c, v in r.items():
                dense[i][pos[c]] = v
        diag.extend(_dense_smith(dense))
    return sorted(diag, key=abs)


def _dense_smith(A: list[list[int]]) -> list[int]:
    A = [row[:] for row in A]
    m = len(A)
    n = len(A[0]) if m else 0
    out = []
    t = 0
    while t < min(m, n):
        nz = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        A[t], A[i] = A[i], A[t]
        for row in A:
            row[t], row[j] = row[j], row[t]
        while True:
            p = A[t][t]
            done = True
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // p
                    A[i] = [a - q * b for a, b in zip(A[i], A[t])]
                    if A[i][t]:
                        done = False
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // p
                    for row in A:
                        row[j] -= q * row[t]
                    if A[t][j]:
                        done = False
            if done:
                bad = [(i, j) for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p]
                if not bad:
                    break
                i, _ = bad[0]
                A[t] = [a + b for a, b in zip(A[t], A[i])]
                continue
            # move the smallest remaining entry of the pivot row/column to the pivot
            cands = [(abs(A[i][t]), i, t) for i in range(t, m) if A[i][t]]
            cands += [(abs(A[t][j]), t, j) for j in range(t, n) if A[t][j]]
            _, i, j = min(cands)
            A[t], A[i] = A[i], A[t]
            for row in A:
                row[t], row[j] = row[j], row[t]
        out.append(abs(A[t][t]))
        t += 1
    return out


@dataclass(frozen=True)
class H1:
    rank: int
    torsion: tuple[int, ...] = ()

    def __str__(self) -> str:
        parts = []
        if self.rank:
            parts.append("Z" if self.rank == 1 else f"Z^{self.rank}")
        parts += [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"rank": self.rank, "torsion": list(self.torsion), "text": str(self)}


def _h1_from(diag: list[int], free: int) -> H1:
    d = [abs(x) for x in diag if x]
    return H1(free - len(d), tuple(sorted(x for x in d if x > 1)))


def h1_invariants(obj) -> H1:
    """H_1 of a presentation (abelianized relator matrix) or of a complex (cellular chains)."""
    if isinstance(obj, Presentation):
        return _h1_from(smith_diagonal(obj.exponent_matrix(), obj.ngens), obj.ngens)
    if isinstance(obj, SpecialComplex):
        return _complex_h1(obj)
    raise TypeError(f"cannot compute H1 of {type(obj).__name__}")


def _complex_h1(X: SpecialComplex) -> H1:
    if not X.edges:
        return H1(0)
    uf = _UnionFind()
    for v in X.vertices:
        uf.find(v.id)
    for e in X.edges:
        uf.union(*e.ends)
    components = len({uf.find(v.id) for v in X.vertices})
    rank_d1 = len(X.vertices) - components
    eidx = {e.id: i for i, e in enumerate(X.edges)}
    rows = []
    for f in X.faces:
        row: dict[int, int] = defaultdict(int)
        for e, d in f.sides:
            row[eidx[e]] += d
        rows.append({c: v for c, v in row.items() if v})
    diag = smith_diagonal(rows, len(X.edges))
    return _h1_from(diag, len(X.edges) - rank_d1)


# ---------------------------------------------------------------- iso criteria

@dataclass
class IsoCriteriaReport:
    boundaryNonempty: bool
    interiorOneSkeletonConnected: bool
    notASurface: bool
    allNodalComponentsSpheres: bool
    perComponentBoundaryIncidence: bool
    connected_criterion: bool
    incidence_criterion: bool

    @property
    def verdict(self) -> bool:
        return self.connected_criterion or self.incidence_criterion

    def to_json(self) -> dict:
        return {
            "boundaryNonempty": self.boundaryNonempty,
            "interiorOneSkeletonConnected": self.interiorOneSkeletonConnected,
            "notASurface": self.notASurface,
            "allNodalComponentsSpheres": self.allNodalComponentsSpheres,
            "perComponentBoundaryIncidence": self.perComponentBoundaryIncidence,
            "connectedCriterion": self.connected_criterion,
            "incidenceCriterion": self.incidence_criterion,
            "verdict": self.verdict,
        }


def check_iso_criteria(X: SpecialComplex, nodal: NodalReport | None = None) -> IsoCriteriaReport:
    """Sufficient conditions for pi_1(M) -> pi_1(X) to be an isomorphism.

    Connected criterion: interior 1-skeleton connected (an empty one counts as
    connected), nonempty boundary, every nodal component a sphere.
    Incidence criterion: X is not a surface and every interior component
    reaches a (0,1) vertex whose pants lie in a spherical component.
    """
    if nodal is None:
        nodal = assemble_nodal(X)
    bi = boundary_and_interior(X)
    connected = len(bi.interior_components) <= 1
    spheres = all(c.is_sphere for c in nodal.components)
    sphere_pants = {v for c in nodal.components if c.is_sphere for v in c.pants}
    incidence = True
    for _, edges in bi.interior_components:
        touches = False
        for eid in edges:
            for w in X.edge(eid).ends:
                if X.vtype(w) == V01 and w in sphere_pants:
                    touches = True
        if not touches:
            incidence = False
    by_connection = connected and bi.boundary_nonempty and spheres and not bi.is_surface
    by_incidence = (not bi.is_surface) and incidence
    return IsoCriteriaReport(bi.boundary_nonempty, connected, not bi.is_surface, spheres,
                             incidence, by_connection, by_incidence)
