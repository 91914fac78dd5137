"""Birational groups of octant lattice-walk models."""
from .stepset import StepSet, canonicalize, decode_diagram, encode_diagram, has_group

__version__ = "0.1.0"

__all__ = ["StepSet", "canonicalize", "decode_diagram", "encode_diagram", "has_group"]
