"""Rayleigh fading, receiver noise, and reflecting-surface cascades.

All channels are i.i.d. CN(0, 1) flat Rayleigh fading (unit variance per
complex entry).  A passive reflecting surface with ``nref`` elements is a
diagonal matrix ``Phi = alpha * diag(exp(j*theta_r))`` sitting between
the transmitter-side segment H (nref x nt) and the receiver-side segment
G (nr x nref); the cascade seen by the link is ``G @ Phi @ H``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .numerics import RandomSource, matmul, sample_complex_gaussian, sample_uniform_phase

__all__ = [
    "IrsChannels",
    "IrsPhaseConfig",
    "NoiseParams",
    "PhaseStrategy",
    "awgn",
    "effective_irs_channel",
    "gen_direct_channel",
    "gen_irs_channels",
    "irs_phase_matrix",
    "sample_phases",
]


class PhaseStrategy(enum.Enum):
    """How the per-element reflection phases are chosen each realisation."""

    UNIFORM = "uniform"
    ZERO = "zero"
    COHERENT = "coherent"


@dataclass(frozen=True)
class NoiseParams:
    """Linear noise power N0 per receive sample (N0/2 per real dimension)."""

    n0: float

    def __post_init__(self):
        if not self.n0 > 0:
            raise ValueError(f"noise power must be positive, got {self.n0}")

    @classmethod
    def from_snr_db(cls, snr_db: float) -> "NoiseParams":
        # unit symbol energy, so SNR = 1/N0
        return cls(10.0 ** (-float(snr_db) / 10.0))


@dataclass(frozen=True)
class IrsChannels:
    """Cascade segments: g is receiver-side (nr x nref), h transmitter-side (nref x nt)."""

    g: np.ndarray
    h: np.ndarray

    def __post_init__(self):
        if self.g.ndim != 2 or self.h.ndim != 2 or self.g.shape[1] != self.h.shape[0]:
            raise ValueError(f"segment shapes do not share nref: {self.g.shape}, {self.h.shape}")


@dataclass(frozen=True)
class IrsPhaseConfig:
    """Amplitude coefficient and per-element phases of the surface."""

    alpha: float
    thetas: np.ndarray
    strategy: PhaseStrategy = PhaseStrategy.UNIFORM

    def __post_init__(self):
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError(f"alpha must be in (0, 1], got {self.alpha}")
        object.__setattr__(self, "thetas", np.asarray(self.thetas, dtype=float))
        if self.thetas.ndim != 1 or self.thetas.size < 1:
            raise ValueError("thetas must be a nonempty 1-D sequence")


def gen_direct_channel(rng: RandomSource, nr: int, nt: int) -> np.ndarray:
    """(nr, nt) i.i.d. CN(0, 1) fading matrix."""
    return sample_complex_gaussian(rng, nr, nt)


def gen_irs_channels(rng: RandomSource, nr: int, nref: int, nt: int) -> IrsChannels:
    """Independent cascade segments, receiver side drawn first."""
    g = sample_complex_gaussian(rng, nr, nref)
    h = sample_complex_gaussian(rng, nref, nt)
    return IrsChannels(g=g, h=h)


def irs_phase_matrix(cfg: IrsPhaseConfig) -> np.ndarray:
    """Diagonal reflection matrix alpha * diag(exp(j*theta)); off-diagonals exactly zero."""
    return cfg.alpha * np.diag(np.exp(1j * cfg.thetas))


def effective_irs_channel(irs: IrsChannels, phi: np.ndarray) -> np.ndarray:
    """Cascade G @ Phi @ H of shape (nr, nt)."""
    return matmul(matmul(irs.g, phi), irs.h)


def sample_phases(strategy: PhaseStrategy, rng: RandomSource, nref: int, context=None) -> np.ndarray:
    """Per-element phases for one realisation.

    ``UNIFORM`` draws i.i.d. U[0, 2*pi); ``ZERO`` returns zeros and
    consumes no draws; ``COHERENT`` aligns each element against the
    supplied cascade products (``context[r] = g_r * h_r`` for the column
    being favoured) so their sum is real and equals sum(|g_r h_r|).
    """
    if nref < 1:
        raise ValueError("nref must be >= 1")
    if strategy is PhaseStrategy.UNIFORM:
        return sample_uniform_phase(rng, nref)
    if strategy is PhaseStrategy.ZERO:
        return np.zeros(nref)
    if strategy is PhaseStrategy.COHERENT:
        if context is None:
            raise ValueError("coherent phase strategy requires the cascade product context")
        context = np.asarray(context).ravel()
        if context.shape != (nref,):
            raise ValueError(f"context must hold {nref} cascade products, got {context.shape}")
        return -np.angle(context)
    raise ValueError(f"unknown phase strategy {strategy!r}")


def awgn(rng: RandomSource, rows: int, cols: int, noise: NoiseParams) -> np.ndarray:
    """(rows, cols) noise matrix with CN(0, N0) entries."""
    return np.sqrt(noise.n0) * sample_complex_gaussian(rng, rows, cols)
