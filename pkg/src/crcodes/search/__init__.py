"""Exhaustive search for few-weight linear codes."""

from __future__ import annotations

from .engine import (
    SearchOptions,
    SearchOutcome,
    SearchProblem,
    code_weights,
    exhaustive_small_oracle,
    format_generator,
    search,
    verify_code_weights,
)
from .projective import ProjectiveSpace, build_projective_space

__all__ = [
    "ProjectiveSpace",
    "SearchOptions",
    "SearchOutcome",
    "SearchProblem",
    "build_projective_space",
    "code_weights",
    "exhaustive_small_oracle",
    "format_generator",
    "search",
    "verify_code_weights",
]
