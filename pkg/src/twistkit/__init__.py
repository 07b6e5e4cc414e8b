"""Witt vectors, prisms and generalized n-series, with exact verification suites."""

from .delta import DeltaRing, LambdaContext
from .errors import (
    NoSolution,
    NonMonicModulus,
    NotDivisible,
    NotInGhostImage,
    NotInImage,
    NoWitnessFound,
    TwistkitError,
    UnsupportedVartheta,
)
from .gns import FormalGroupLaw, GnsSpec, builtin_gns
from .prism import PrismPresentation, TransversalCoords
from .ring import ZZ, MonicQuotRing, MPoly, MPolyRing, Poly, PolyRing, SeriesTrunc, finite_field
from .sandwich import SandwichContext
from .witt import TruncSet, WittVector

__version__ = "0.1.0"

__all__ = [
    "DeltaRing",
    "FormalGroupLaw",
    "GnsSpec",
    "LambdaContext",
    "MPoly",
    "MPolyRing",
    "MonicQuotRing",
    "NoSolution",
    "NoWitnessFound",
    "NonMonicModulus",
    "NotDivisible",
    "NotInGhostImage",
    "NotInImage",
    "Poly",
    "PolyRing",
    "PrismPresentation",
    "SandwichContext",
    "SeriesTrunc",
    "TransversalCoords",
    "TruncSet",
    "TwistkitError",
    "UnsupportedVartheta",
    "WittVector",
    "ZZ",
    "builtin_gns",
    "finite_field",
]
