"""Partially scattered q-polynomials, their linear sets and rank-metric codes."""
from .ff_tower import FieldTower, GF, build_field
from .kernels import BACKEND

__version__ = "0.1.0"

__all__ = ["BACKEND", "FieldTower", "GF", "build_field"]
