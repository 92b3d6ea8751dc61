"""Barut second- and third-order wave equations in the (1/2,0)+(0,1/2) representation."""

from .algebra import GammaSet, Metric, Representation, build_gammas
from .barut import BarutParams, CanonicalParams, LagrangianParams
from .polyop import PolyOperator

__all__ = [
    "BarutParams",
    "CanonicalParams",
    "GammaSet",
    "LagrangianParams",
    "Metric",
    "PolyOperator",
    "Representation",
    "build_gammas",
]
__version__ = "0.1.0"
