"""Exact idempotent calculus over the rationals."""

from ._idemcalc import (
    FormatError,
    GenerationError,
    HypothesisError,
    canonical_fixture,
    check_fixture,
    compose,
    generate,
    involute,
    max_ambient_dim,
    orthonormalize,
    product,
    run,
)

__all__ = [
    "FormatError",
    "GenerationError",
    "HypothesisError",
    "canonical_fixture",
    "check_fixture",
    "compose",
    "generate",
    "involute",
    "max_ambient_dim",
    "orthonormalize",
    "product",
    "run",
]
