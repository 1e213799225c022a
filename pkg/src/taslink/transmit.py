"""Transmit-side processing: antenna selection, channel-inverting precoding,
and uniform-linear-array beamforming.

Selection keeps the two of ``nt`` transmit antennas whose sub-channel has
the largest squared Frobenius norm.  The precoder inverts the selected
channel (``P = H^H (H H^H)^-1``), is rescaled by ``beta`` to hold the
total transmit power constraint, and only its diagonal acts on the
codeword.  Each active antenna may additionally drive an ``lt``-element
phased subarray; with weights matched to the departure angle the
subarray multiplies the link amplitude by exactly sqrt(lt), independent
of the angle.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .numerics import frobenius_norm_sq, hermitian, invert_gram, matmul

__all__ = [
    "EffectiveLink",
    "SelectionResult",
    "UlaConfig",
    "ZfPrecoder",
    "abf_effective_link",
    "array_response",
    "enumerate_combinations",
    "hbf_effective_link",
    "select_antennas",
    "ula_weight",
    "zf_precoder",
]

#: per-antenna amplitude sqrt(Es/2) at unit symbol energy, shared by all
#: two-antenna schemes so the transmitted energy per use stays Es
ENERGY_FACTOR = math.sqrt(0.5)


def enumerate_combinations(nt: int, na: int) -> list[tuple[int, ...]]:
    """All C(nt, na) antenna index tuples (1-based) in lexicographic order."""
    if not 1 <= na <= nt:
        raise ValueError(f"need 1 <= na <= nt, got na={na}, nt={nt}")
    return list(itertools.combinations(range(1, nt + 1), na))


@dataclass(frozen=True)
class SelectionResult:
    """Selected antenna indices (1-based, increasing) and their norm metric."""

    indices: tuple[int, ...]
    metric: float

    @property
    def p1(self) -> int:
        return self.indices[0]

    @property
    def p2(self) -> int:
        return self.indices[1]


def select_antennas(h, na: int = 2) -> SelectionResult:
    """Antenna subset maximising the squared Frobenius norm of its sub-channel.

    Ties break toward the lexicographically smallest combination so runs
    are reproducible.
    """
    h = np.asarray(h)
    if h.ndim != 2 or h.size == 0:
        raise ValueError("channel must be a nonempty 2-D matrix")
    best = None
    best_metric = -1.0
    for combo in enumerate_combinations(h.shape[1], na):
        metric = frobenius_norm_sq(h[:, [i - 1 for i in combo]])
        if metric > best_metric:
            best, best_metric = combo, metric
    return SelectionResult(indices=best, metric=best_metric)


@dataclass(frozen=True)
class ZfPrecoder:
    """Unscaled inverting precoder, its power scaling, and the diagonal form."""

    p_zf: np.ndarray
    beta: float
    p_diag: np.ndarray


def zf_precoder(h_sel, nt_total: int) -> ZfPrecoder:
    """Channel-inverting precoder for a selected (nr x 2) channel.

    ``p_zf = H^H (H H^H)^-1``; ``beta = sqrt(nt_total / trace(P P^H))``
    holds the total transmit power constraint with ``nt_total`` the full
    antenna count; ``p_diag`` is the diagonal of the scaled precoder that
    actually multiplies the codeword.
    """
    h_sel = np.asarray(h_sel)
    if h_sel.ndim != 2 or h_sel.shape[1] != 2 or h_sel.shape[0] not in (1, 2):
        raise ValueError(f"selected channel must be (1..2) x 2, got {h_sel.shape}")
    p_zf = matmul(hermitian(h_sel), invert_gram(h_sel))
    beta = math.sqrt(nt_total / frobenius_norm_sq(p_zf))
    scaled = beta * p_zf
    diag_entries = np.diag(scaled) if scaled.shape[1] == 2 else scaled[:, 0]
    return ZfPrecoder(p_zf=p_zf, beta=beta, p_diag=np.diag(diag_entries))


@dataclass(frozen=True)
class UlaConfig:
    """Uniform linear subarray: lt elements, spacing d_m <= lambda_m / 2."""

    lt: int
    d_m: float = 0.0025
    lambda_m: float = 0.005

    def __post_init__(self):
        if self.lt < 1:
            raise ValueError(f"lt must be >= 1, got {self.lt}")
        if not 0.0 < self.d_m <= self.lambda_m / 2.0:
            raise ValueError(f"need 0 < d <= lambda/2, got d={self.d_m}, lambda={self.lambda_m}")

    @property
    def wavenumber(self) -> float:
        return 2.0 * math.pi / self.lambda_m


def _progressive_phases(theta: float, cfg: UlaConfig) -> np.ndarray:
    delta = cfg.wavenumber * cfg.d_m * math.sin(theta)
    return delta * np.arange(cfg.lt)


def ula_weight(theta_aod: float, cfg: UlaConfig) -> np.ndarray:
    """Unit-norm progressive-phase weight vector steering toward theta_aod."""
    return np.exp(1j * _progressive_phases(theta_aod, cfg)) / math.sqrt(cfg.lt)


def array_response(theta: float, cfg: UlaConfig) -> np.ndarray:
    """Unnormalised steering vector; matched weights satisfy w(t)^H a(t) = sqrt(lt)."""
    return np.exp(1j * _progressive_phases(theta, cfg))


@dataclass(frozen=True)
class EffectiveLink:
    """Length-2 effective channel fed to the combiner, plus the per-antenna amplitude."""

    h_eff: np.ndarray
    energy_factor: float = ENERGY_FACTOR


def _as_pair(h_sel) -> np.ndarray:
    h_sel = np.asarray(h_sel, dtype=complex).ravel()
    if h_sel.shape != (2,):
        raise ValueError(f"expected a length-2 selected channel, got shape {h_sel.shape}")
    return h_sel


def abf_effective_link(h_sel, lt: int, theta_aods) -> EffectiveLink:
    """Effective link with each antenna driving an lt-element matched subarray.

    The matched weight toward each antenna's departure angle gives
    amplitude gain exactly sqrt(lt), so h_eff = sqrt(lt) * h_sel whatever
    the angles; the angles are carried to document the beam model
    (tests recompute the matched inner product from them).
    """
    if lt < 1:
        raise ValueError(f"lt must be >= 1, got {lt}")
    theta_aods = np.asarray(theta_aods, dtype=float).ravel()
    if theta_aods.shape != (2,):
        raise ValueError("expected one departure angle per active antenna")
    return EffectiveLink(h_eff=math.sqrt(lt) * _as_pair(h_sel))


def hbf_effective_link(h_sel, lt: int, prec: ZfPrecoder) -> EffectiveLink:
    """Effective link combining the diagonal precoder with matched subarrays:
    h_eff_i = sqrt(lt) * h_i * (beta p_i)."""
    if lt < 1:
        raise ValueError(f"lt must be >= 1, got {lt}")
    return EffectiveLink(h_eff=math.sqrt(lt) * _as_pair(h_sel) * np.diag(prec.p_diag))
