"""
Bifunction oracles and the concrete families used by the problem catalog.
"""

from .base import Bifunction, CallableBifunction
from .families import (
    RootQuadBifunction,
    CubicBifunction,
    FractionalBranch,
    FractionalMaxBifunction,
    bifunction_from_dict,
)

__all__ = [
    # Oracle interface
    "Bifunction",
    "CallableBifunction",

    # Families
    "RootQuadBifunction",
    "CubicBifunction",
    "FractionalBranch",
    "FractionalMaxBifunction",
    "bifunction_from_dict",
]
