"""Seeded Monte Carlo BER simulator for antenna-selected space-time coded
links with zero-forcing precoding, analog/hybrid beamforming, and
reflecting-surface cascades."""

from .channel import NoiseParams, PhaseStrategy
from .curves import extract_gain, gains_report, read_curve, write_curve
from .engine import BerCurve, BerPoint, SchemeId, SimConfig, run_frame, run_point, run_sweep, wilson_ci
from .numerics import RandomSource

__all__ = [
    "BerCurve",
    "BerPoint",
    "NoiseParams",
    "PhaseStrategy",
    "RandomSource",
    "SchemeId",
    "SimConfig",
    "extract_gain",
    "gains_report",
    "read_curve",
    "run_frame",
    "run_point",
    "run_sweep",
    "wilson_ci",
    "write_curve",
]

__version__ = "0.1.0"
