"""Spectral free-wave engine with wave-packet decompositions, null forms,
conformal Killing vector fields, and a scaling-law measurement harness."""

from .grid import Field, Grid, lp_norm, to_physical, to_spectral
from .waves import (
    FreeWave,
    WaveState,
    energy,
    energy_inner,
    evaluate,
    from_data,
    random_wave,
)

__all__ = [
    "Field",
    "Grid",
    "lp_norm",
    "to_physical",
    "to_spectral",
    "FreeWave",
    "WaveState",
    "energy",
    "energy_inner",
    "evaluate",
    "from_data",
    "random_wave",
]

__version__ = "0.1.0"
