"""Labelings of special complexes, the admissibility checker, sign moves and the
labeling algorithm for even complexes."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .complex import (E11, E12, V01, V02, SpecialComplex, census, is_even,
                      side_position)
from .matrix import IDENTITY, U, Gl2z, corner_matrix

SideRef = tuple[int, int]  # (face id, word position of the side)


class Labeling:
    """Assignment of a label matrix to every face-side occurrence.

    Labels are stored relative to the direction in which the face traverses
    the side.
    """

    def __init__(self, labels: Mapping[SideRef, Gl2z]):
        clean = {}
        for ref, m in labels.items():
            if not isinstance(m, Gl2z):
                m = Gl2z.from_list(m)
            if not m.is_label():
                raise ValueError(f"label at {ref} is {m}, not of the form [[+-1,k],[0,+-1]]")
            clean[(int(ref[0]), int(ref[1]))] = m
        self.labels: dict[SideRef, Gl2z] = dict(sorted(clean.items()))

    def __getitem__(self, ref: SideRef) -> Gl2z:
        return self.labels[tuple(ref)]

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)

    def items(self):
        return self.labels.items()

    def __eq__(self, other) -> bool:
        return isinstance(other, Labeling) and self.labels == other.labels

    def __repr__(self) -> str:
        return f"Labeling({len(self.labels)} sides)"

    def replace(self, updates: Mapping[SideRef, Gl2z]) -> "Labeling":
        new = dict(self.labels)
        new.update(updates)
        return Labeling(new)

    @property
    def oriented(self) -> bool:
        return all(m.det == -1 for m in self.labels.values())

    @property
    def positive(self) -> bool:
        return all(m.is_positive() for m in self.labels.values())

    def to_json(self) -> dict:
        return {"labels": [{"face": f, "position": p, "matrix": m.to_list()}
                           for (f, p), m in self.labels.items()]}

    @classmethod
    def from_json(cls, doc: Mapping) -> "Labeling":
        try:
            return cls({(item["face"], item["position"]): Gl2z.from_list(item["matrix"])
                        for item in doc["labels"]})
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed labeling document: {exc!r}") from exc

    @classmethod
    def constant(cls, X: SpecialComplex, m: Gl2z = IDENTITY) -> "Labeling":
        return cls({(fid, side_position(i)): m for fid, i, _, _ in X.side_occurrences()})


def side_refs(X: SpecialComplex) -> set[SideRef]:
    return {(fid, side_position(i)) for fid, i, _, _ in X.side_occurrences()}


@dataclass
class EdgeViolation:
    edge: int
    labels: list[Gl2z]
    reason: str

    def to_json(self) -> dict:
        return {"edge": self.edge, "labels": [m.to_list() for m in self.labels],
                "reason": self.reason}


@dataclass
class FaceViolation:
    face: int
    monodromy: Gl2z

    def to_json(self) -> dict:
        return {"face": self.face, "monodromy": self.monodromy.to_list()}


@dataclass
class AdmissibilityVerdict:
    edge_violations: list[EdgeViolation] = field(default_factory=list)
    face_violations: list[FaceViolation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.edge_violations and not self.face_violations

    def to_json(self) -> dict:
        return {"ok": self.ok,
                "edge_violations": [v.to_json() for v in self.edge_violations],
                "face_violations": [v.to_json() for v in self.face_violations]}

    def summary(self) -> str:
        if self.ok:
            return "admissible"
        parts = []
        for v in self.edge_violations:
            parts.append(f"edge {v.edge}: {v.reason}")
        for v in self.face_violations:
            parts.append(f"face {v.face}: monodromy {v.monodromy} != I")
        return "not admissible\n  " + "\n  ".join(parts)


def _check_domain(X: SpecialComplex, lab: Labeling) -> None:
    want = side_refs(X)
    have = set(lab.labels)
    if want != have:
        missing = sorted(want - have)[:5]
        extra = sorted(have - want)[:5]
        raise ValueError(f"labeling domain mismatch (missing {missing}, unexpected {extra})")


def _require_dots(X: SpecialComplex) -> None:
    for v in X.vertices:
        if v.type == V02 and v.id not in X.dots:
            raise ValueError(f"(0,2) vertex {v.id} has no dot marking")


def global_label(m: Gl2z, direction: int) -> Gl2z:
    """Label seen along the edge's own orientation."""
    return m if direction == 1 else m.inverse()


def face_monodromy(X: SpecialComplex, lab: Labeling, fid: int) -> Gl2z:
    """J(c_0) L(s_{n-1}) ... J(c_2) L(s_1) J(c_1) L(s_0)."""
    f = X.face(fid)
    n = len(f.corners)
    out = IDENTITY
    for i in range(n):
        out = lab[(fid, side_position(i))] @ out
        j = (i + 1) % n
        c = f.corners[j]
        out = corner_matrix(X.vtype(c), X.is_dotted((fid, 2 * j))) @ out
    return out


def check_admissible(X: SpecialComplex, lab: Labeling) -> AdmissibilityVerdict:
    _check_domain(X, lab)
    _require_dots(X)
    verdict = AdmissibilityVerdict()
    occ = X.edge_occurrences()
    for e in X.edges:
        if e.type != E12:
            continue
        mats = [global_label(lab[(fid, side_position(i))], d) for fid, i, d in occ[e.id]]
        if len(mats) != 3:
            verdict.edge_violations.append(EdgeViolation(e.id, mats, "edge does not have three sheets"))
            continue
        if len({(m.a, m.d) for m in mats}) != 1:
            verdict.edge_violations.append(EdgeViolation(e.id, mats, "diagonal signs differ"))
        elif sum(m.b for m in mats) != 0:
            verdict.edge_violations.append(
                EdgeViolation(e.id, mats, f"k-sum is {sum(m.b for m in mats)}"))
    for f in X.faces:
        if not f.corners:
            continue
        m = face_monodromy(X, lab, f.id)
        if not m.is_identity():
            verdict.face_violations.append(FaceViolation(f.id, m))
    return verdict


def is_admissible(X: SpecialComplex, lab: Labeling) -> bool:
    return check_admissible(X, lab).ok


def euler_characteristic(X: SpecialComplex) -> int:
    c = census(X)
    return c.n0 - c.n1 + c.n2


def vertex_sign_move(X: SpecialComplex, lab: Labeling, v: int) -> Labeling:
    """Negate every label on the edges with exactly one end at v."""
    if not X.has_vertex(v):
        raise ValueError(f"unknown vertex {v}")
    incident = set()
    for e in X.edges:
        if v in e.ends:
            if e.is_loop:
                raise ValueError(f"vertex {v} carries loop edge {e.id}")
            incident.add(e.id)
    updates = {}
    for fid, i, e, _ in X.side_occurrences():
        if e in incident:
            ref = (fid, side_position(i))
            updates[ref] = -lab[ref]
    return lab.replace(updates)


def _polygon_cycle(X: SpecialComplex) -> list[tuple[int, int]]:
    """For a polygon return [(edge, vertex after it)] in face order."""
    c = census(X)
    if len(X.faces) != 1 or c.n1 or c.n2 or c.e12 or c.n0 != c.e11:
        raise ValueError("not a polygon")
    f = X.faces[0]
    n = len(f.corners)
    return [(f.sides[i][0], f.corners[(i + 1) % n]) for i in range(n)]


def normalize_positive(X: SpecialComplex, lab: Labeling) -> Labeling:
    """Sign moves along a polygon until at most the last label is negative."""
    cycle = _polygon_cycle(X)
    if not lab.oriented:
        raise ValueError("labeling is not oriented")
    f = X.faces[0]
    for i in range(len(cycle) - 1):
        if not lab[(f.id, side_position(i))].is_positive():
            lab = vertex_sign_move(X, lab, cycle[i][1])
    return lab


def even_auto_label(X: SpecialComplex, dots=None, chains: str = "all") -> Labeling:
    """Admissible labeling of an even complex.

    Start from trivial labels.  Around each maximal string of dotted corners
    the incoming side gets U^-1 and the outgoing side U (as traversed), which
    turns the string's product into J for odd strings and I for even ones.
    Labels that land on an interior edge ending at a (0,1) vertex are then
    pushed across that vertex onto the adjacent boundary edge.

    ``chains="odd"`` only decorates odd strings.
    """
    if chains not in ("all", "odd"):
        raise ValueError("chains must be 'all' or 'odd'")
    if dots is not None:
        X = X.with_dots(dots)
    _require_dots(X)
    if not is_even(X):
        raise ValueError("complex is not even")
    U_inv = U.inverse()
    lab: dict[SideRef, Gl2z] = {(fid, side_position(i)): IDENTITY
                                for fid, i, _, _ in X.side_occurrences()}
    for f in X.faces:
        n = len(f.corners)
        dotted = [X.is_dotted((f.id, 2 * i)) for i in range(n)]
        if not any(dotted) or all(dotted):
            continue
        start = dotted.index(False)
        i = 0
        while i < n:
            j = (start + i) % n
            if not dotted[j]:
                i += 1
                continue
            length = 0
            while dotted[(j + length) % n]:
                length += 1
            if chains == "all" or length % 2:
                first, last = j, (j + length - 1) % n
                lab[(f.id, side_position((first - 1) % n))] = U_inv
                lab[(f.id, side_position(last))] = U
            i += length

    # repair across (0,1) corners
    consumed: set[SideRef] = set()
    for f in X.faces:
        n = len(f.corners)
        for i, (e, _) in enumerate(f.sides):
            if X.etype(e) != E11:
                continue
            ref = (f.id, side_position(i))
            before = (f.id, side_position((i - 1) % n))
            after = (f.id, side_position((i + 1) % n))
            left = X.vtype(f.corners[i]) == V01 and X.etype(f.sides[(i - 1) % n][0]) == E12 \
                and not lab[before].is_identity()
            right = X.vtype(f.corners[(i + 1) % n]) == V01 \
                and X.etype(f.sides[(i + 1) % n][0]) == E12 and not lab[after].is_identity()
            for flag, r in ((left, before), (right, after)):
                if flag:
                    if r in consumed:
                        raise ValueError(f"label at {r} is claimed by two boundary edges")
                    consumed.add(r)
            if left and right:
                # the two interior labels cancel across this boundary edge
                if not (lab[after] @ lab[ref] @ lab[before]).is_identity() \
                        or not lab[ref].is_identity():
                    raise ValueError(f"boundary edge {e} in face {f.id} cannot absorb its neighbours")
                lab[before] = IDENTITY
                lab[after] = IDENTITY
            elif left:
                lab[ref] = lab[ref] @ lab[before]
                lab[before] = IDENTITY
            elif right:
                lab[ref] = lab[after] @ lab[ref]
                lab[after] = IDENTITY
    out = Labeling(lab)
    verdict = check_admissible(X, out)
    if not verdict.ok:
        raise ValueError("even auto-labeling failed verification:\n" + verdict.summary())
    return out
