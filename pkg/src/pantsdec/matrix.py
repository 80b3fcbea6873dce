"""Exact 2x2 integer matrices used for labels, corner transitions and monodromy."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable


@dataclass(frozen=True)
class Gl2z:
    """A 2x2 integer matrix [[a, b], [c, d]]."""

    a: int
    b: int
    c: int
    d: int

    def __matmul__(self, other: "Gl2z") -> "Gl2z":
        return Gl2z(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def __neg__(self) -> "Gl2z":
        return Gl2z(-self.a, -self.b, -self.c, -self.d)

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    def inverse(self) -> "Gl2z":
        det = self.det
        if det not in (1, -1):
            raise ValueError(f"matrix {self.to_list()} is not unimodular (det={det})")
        # for det = +-1 the adjugate divided by det is integral
        return Gl2z(det * self.d, -det * self.b, -det * self.c, det * self.a)

    def is_identity(self) -> bool:
        return self == IDENTITY

    # label-shaped matrices [[eps, k], [0, eps2]]
    def is_label(self) -> bool:
        return self.c == 0 and self.a in (1, -1) and self.d in (1, -1)

    def is_oriented(self) -> bool:
        return self.is_label() and self.det == -1

    def is_positive(self) -> bool:
        return self.is_label() and self.a == 1 and self.d == -1

    def to_list(self) -> list[int]:
        return [self.a, self.b, self.c, self.d]

    def rows(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return ((self.a, self.b), (self.c, self.d))

    @classmethod
    def from_list(cls, values: Iterable[int]) -> "Gl2z":
        vals = list(values)
        if len(vals) != 4:
            raise ValueError(f"expected 4 matrix entries, got {len(vals)}")
        for v in vals:
            if isinstance(v, bool) or not isinstance(v, int):
                raise ValueError(f"matrix entries must be integers, got {v!r}")
        return cls(*vals)

    @classmethod
    def from_rows(cls, rows) -> "Gl2z":
        (a, b), (c, d) = rows
        return cls(a, b, c, d)

    def __repr__(self) -> str:
        return f"[[{self.a},{self.b}],[{self.c},{self.d}]]"


IDENTITY = Gl2z(1, 0, 0, 1)


@dataclass(frozen=True)
class LabelMatrix:
    """The upper triangular matrix [[eps, k], [0, eps2]] with eps, eps2 = +-1."""

    eps: int
    k: int
    eps2: int

    def __post_init__(self):
        if self.eps not in (1, -1) or self.eps2 not in (1, -1):
            raise ValueError(f"diagonal entries must be +-1, got {self.eps}, {self.eps2}")

    @property
    def matrix(self) -> Gl2z:
        return Gl2z(self.eps, self.k, 0, self.eps2)

    @property
    def det(self) -> int:
        return self.eps * self.eps2

    @property
    def oriented(self) -> bool:
        return self.det == -1

    @property
    def positive(self) -> bool:
        return self.eps == 1 and self.eps2 == -1

    @classmethod
    def of(cls, m: Gl2z) -> "LabelMatrix":
        if not m.is_label():
            raise ValueError(f"{m} is not of the form [[+-1, k], [0, +-1]]")
        return cls(m.a, m.b, m.d)


def label(eps: int, k: int, eps2: int) -> Gl2z:
    return LabelMatrix(eps, k, eps2).matrix


def positive_label(k: int) -> Gl2z:
    return Gl2z(1, k, 0, -1)


def compose(m1: Gl2z, m2: Gl2z) -> Gl2z:
    """Matrix product m1 * m2 (m2 acts first)."""
    return m1 @ m2


def invert(m: Gl2z) -> Gl2z:
    return m.inverse()


def product(mats: Iterable[Gl2z]) -> Gl2z:
    """Left-to-right product of an iterable of matrices."""
    out = IDENTITY
    for m in mats:
        out = out @ m
    return out


def power(m: Gl2z, n: int) -> Gl2z:
    if n < 0:
        return power(m.inverse(), -n)
    out = IDENTITY
    for _ in range(n):
        out = out @ m
    return out


class CornerKind(Enum):
    J00 = "J00"
    J01 = "J01"
    J02_PLAIN = "J02_plain"
    J02_DOTTED = "J02_dotted"

    @property
    def matrix(self) -> Gl2z:
        return _CORNER_MATRICES[self]


_CORNER_MATRICES = {
    CornerKind.J00: Gl2z(0, 1, 1, 0),
    CornerKind.J01: IDENTITY,
    CornerKind.J02_PLAIN: Gl2z(0, 1, 1, 0),
    CornerKind.J02_DOTTED: Gl2z(-1, 0, 1, 1),
}

J = _CORNER_MATRICES[CornerKind.J00]
J_DOTTED = _CORNER_MATRICES[CornerKind.J02_DOTTED]
U = Gl2z(1, 1, 0, 1)


def corner_kind(vertex_type: tuple[int, int], dotted: bool = False) -> CornerKind:
    vertex_type = tuple(vertex_type)
    if dotted and vertex_type != (0, 2):
        raise ValueError(f"only (0,2) corners can be dotted, got {vertex_type}")
    if vertex_type == (0, 0):
        return CornerKind.J00
    if vertex_type == (0, 1):
        return CornerKind.J01
    if vertex_type == (0, 2):
        return CornerKind.J02_DOTTED if dotted else CornerKind.J02_PLAIN
    raise ValueError(f"unknown vertex type {vertex_type}")


def corner_matrix(vertex_type: tuple[int, int], dotted: bool = False) -> Gl2z:
    return corner_kind(vertex_type, dotted).matrix
