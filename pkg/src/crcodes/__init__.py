"""Feasibility screening, coset graphs and code search for completely regular codes."""

from __future__ import annotations

__version__ = "0.1.0"

from .arrays import IntersectionArray
from .code import LinearCode, WeightDistribution, coset_weight_profile, macwilliams, weight_distribution
from .errors import CRCodesError
from .gf import FieldMatrix, PrimeField

__all__ = [
    "CRCodesError",
    "FieldMatrix",
    "IntersectionArray",
    "LinearCode",
    "PrimeField",
    "WeightDistribution",
    "__version__",
    "coset_weight_profile",
    "macwilliams",
    "weight_distribution",
]
