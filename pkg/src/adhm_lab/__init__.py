"""Numerical workbench for framed representations of the enhanced ADHM quiver."""

from .datum import (
    ADHMDatum,
    DimVector,
    EnhancedDatum,
    GaugeElement,
    StabilityParameter,
    TOLERANCES,
    act,
    generate_stable,
    is_valid,
    residuals,
)

__version__ = "0.1.0"

__all__ = [
    "ADHMDatum",
    "DimVector",
    "EnhancedDatum",
    "GaugeElement",
    "StabilityParameter",
    "TOLERANCES",
    "act",
    "generate_stable",
    "is_valid",
    "residuals",
]
