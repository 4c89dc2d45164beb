"""Desk-scale experiments on prime-polynomial statistics over F_q[T].

The package computes exact variances of prime-polynomial counts in short
intervals and in arithmetic progressions, checks them against Dirichlet
L-function identities and random-matrix predictions, and evaluates the
twin-prime singular-series pipeline, all at sizes where brute force is an
available oracle.
"""

__version__ = "0.1.0"

from .config import DEFAULT, RunConfig
from .errors import (CapExceededError, FFVarError, InternalCheckError,
                     ValidationError)
from .fields import Field, field_from_q, make_field
from .polys import (Factorization, Poly, count_irreducibles, enumerate_monic,
                    factorize, interval_members, is_irreducible,
                    poly_from_text, poly_to_text, reverse_star, von_mangoldt)

__all__ = [
    "DEFAULT", "RunConfig", "FFVarError", "ValidationError",
    "CapExceededError", "InternalCheckError", "Field", "make_field",
    "field_from_q", "Poly", "Factorization", "factorize", "von_mangoldt",
    "count_irreducibles", "enumerate_monic", "interval_members",
    "is_irreducible", "reverse_star", "poly_from_text", "poly_to_text",
    "__version__",
]
