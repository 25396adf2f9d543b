"""Finite topological spaces, quasi-uniformities and their cardinal invariants."""
__version__ = "0.1.0"

from .relation import Cover, Entourage, alt_power, ball, compose, inverse, star
from .topology import FiniteSpace, Verdict, compute_invariant, invariant_report
from .preuniformity import PreUniformity, canonical
from .monoid import TopoMonoid, make_monoid

__all__ = [
    "Cover", "Entourage", "FiniteSpace", "PreUniformity", "TopoMonoid", "Verdict",
    "alt_power", "ball", "canonical", "compose", "compute_invariant", "invariant_report",
    "inverse", "make_monoid", "star",
]
