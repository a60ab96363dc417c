"""Numerical laboratory for periodic standing waves of the one-dimensional
logarithmic Klein-Gordon equation: wave construction, Hill/Floquet spectral
analysis, orbital-stability verdicts, and pseudo-spectral time evolution."""

from . import errors, evolution, model, spectral, stability, standing_waves
from .model import Grid, PeriodicProfile, PhasePoint, WaveParams

__version__ = "0.1.0"

__all__ = [
    "errors",
    "evolution",
    "model",
    "spectral",
    "stability",
    "standing_waves",
    "Grid",
    "PeriodicProfile",
    "PhasePoint",
    "WaveParams",
]
