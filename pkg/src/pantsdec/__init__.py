"""Labeled special complexes for pair-of-pants decompositions of 4-manifolds."""

from .complex import SpecialComplex, census, default_dots, is_closed, is_even, validate
from .invariants import (Presentation, assemble_nodal, check_iso_criteria, h1_invariants,
                         pi1_presentation, self_intersection)
from .labeling import Labeling, check_admissible, euler_characteristic, even_auto_label
from .matrix import Gl2z, corner_matrix
from .moves import blowdown, blowup, classify_polygon, enumerate_admissible

__all__ = [
    "Gl2z", "Labeling", "Presentation", "SpecialComplex", "assemble_nodal", "blowdown",
    "blowup", "census", "check_admissible", "check_iso_criteria", "classify_polygon",
    "corner_matrix", "default_dots", "enumerate_admissible", "euler_characteristic",
    "even_auto_label", "h1_invariants", "is_closed", "is_even", "pi1_presentation",
    "self_intersection", "validate",
]
