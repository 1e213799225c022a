"""Monte Carlo engine: composes the scheme pipelines over seeded frames.

One frame is one 2x2 codeword: 2 channel uses carrying 4 information
bits.  The channel, any steering angles, and any reflection phases are
redrawn each frame (quasi-static block fading).  Frame ``f`` of SNR-grid
point ``p`` draws from stream ``p * 2**32 + f`` of the run seed, so every
frame is reproducible in isolation and a sweep is bit-identical for any
worker count or execution order.  Frames whose selected channel trips
the Gram singularity guard are redrawn once from a reserved sub-stream
and counted once.

Receive-side AGC (division by beta, sqrt(lt), or their product) rescales
signal and noise identically; quadrant detection is scale-invariant, so
the division is omitted throughout.
"""

from __future__ import annotations

import enum
import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .channel import NoiseParams, PhaseStrategy
from .numerics import GRAM_DET_TOL, SingularMatrixError, complex_gaussian_from_uniforms, stream_uniforms

__all__ = [
    "BerCurve",
    "BerPoint",
    "SchemeId",
    "SimConfig",
    "run_frame",
    "run_point",
    "run_sweep",
    "wilson_ci",
]

BITS_PER_FRAME = 4
POINT_STREAM_STRIDE = 1 << 32
_RESAMPLE_STRIDE = np.uint64(1 << 56)
_MAX_RESAMPLE_ATTEMPTS = 4
_ENERGY_FACTOR = math.sqrt(0.5)
_TARGET_CHUNK_DOUBLES = 4_000_000


class SchemeId(enum.Enum):
    """The seven transmit chains the simulator compares."""

    SISO = "siso"
    ALAMOUTI_2X1 = "alamouti"
    TAS_OSTBC = "tas-ostbc"
    TAS_OSTBC_ZF = "tas-ostbc-zf"
    TAS_OSTBC_ABF = "tas-ostbc-abf"
    TAS_OSTBC_HBF = "tas-ostbc-hbf"
    IRS_TAS_OSTBC_HBF = "irs-tas-ostbc-hbf"


_SELECTING = {
    SchemeId.TAS_OSTBC,
    SchemeId.TAS_OSTBC_ZF,
    SchemeId.TAS_OSTBC_ABF,
    SchemeId.TAS_OSTBC_HBF,
    SchemeId.IRS_TAS_OSTBC_HBF,
}
_PRECODED = {SchemeId.TAS_OSTBC_ZF, SchemeId.TAS_OSTBC_HBF, SchemeId.IRS_TAS_OSTBC_HBF}
_BEAMFORMED = {SchemeId.TAS_OSTBC_ABF, SchemeId.TAS_OSTBC_HBF, SchemeId.IRS_TAS_OSTBC_HBF}


@dataclass(frozen=True)
class SimConfig:
    """Run parameters; defaults follow the reference simulation setup."""

    snr_grid_db: tuple = ()
    frames_per_packet: int = 100_000
    packets: int = 10
    seed: int = 1
    nt: int = 4
    nr: int = 1
    na: int = 2
    lt: int = 1
    nref: int = 16
    alpha: float = 1.0
    phase_strategy: PhaseStrategy = PhaseStrategy.UNIFORM
    lambda_m: float = 0.005
    d_m: float = 0.0025

    def __post_init__(self):
        grid = tuple(float(s) for s in self.snr_grid_db)
        if not grid:
            raise ValueError("snr_grid_db must be nonempty")
        if not all(np.isfinite(grid)):
            raise ValueError("snr_grid_db values must be finite")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("snr_grid_db must be strictly increasing")
        object.__setattr__(self, "snr_grid_db", grid)
        for name in ("frames_per_packet", "packets", "nt", "nr", "lt", "nref"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1, got {getattr(self, name)}")
        if self.na != 2:
            raise ValueError(f"na is fixed at 2 for the coded schemes, got {self.na}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in an unsigned 64-bit integer")
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError(f"alpha must be in (0, 1], got {self.alpha}")
        if not isinstance(self.phase_strategy, PhaseStrategy):
            raise ValueError(f"phase_strategy must be a PhaseStrategy, got {self.phase_strategy!r}")
        if not 0.0 < self.d_m <= self.lambda_m / 2.0:
            raise ValueError(f"need 0 < d <= lambda/2, got d={self.d_m}, lambda={self.lambda_m}")

    @property
    def total_frames(self) -> int:
        return self.frames_per_packet * self.packets


@dataclass(frozen=True)
class BerPoint:
    snr_db: float
    total_bits: int
    bit_errors: int
    ber: float
    ci_low: float
    ci_high: float


@dataclass(frozen=True)
class BerCurve:
    scheme: SchemeId
    config: SimConfig
    points: tuple


def wilson_ci(errors: int, n: int, z: float = 1.96) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if n < 1 or not 0 <= errors <= n:
        raise ValueError(f"need 0 <= errors <= n with n >= 1, got errors={errors}, n={n}")
    p = errors / n
    z2 = z * z
    denom = 1.0 + z2 / n
    centre = p + z2 / (2.0 * n)
    half = z * math.sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n))
    low = 0.0 if errors == 0 else max(0.0, (centre - half) / denom)
    high = 1.0 if errors == n else min(1.0, (centre + half) / denom)
    return low, high


def _check_scheme_config(scheme: SchemeId, cfg: SimConfig):
    if cfg.nr != 1:
        raise ValueError("the simulated chains use a single receive antenna (nr=1)")
    if scheme in _SELECTING and cfg.nt < 2:
        raise ValueError(f"{scheme.value} selects 2 of nt antennas, need nt >= 2")


def _frame_layout(scheme: SchemeId, cfg: SimConfig):
    """Column slices of one frame's uniform block, in draw order.

    Draw order: channel (cascade segments and, for the uniform strategy,
    reflection phases), 4 bit draws, 2 steering-angle draws for the
    beamformed schemes, then 2 complex noise samples.  Steering angles
    are drawn every frame so tests can rebuild the matched beams; the
    matched subarray gain itself is exactly sqrt(lt).
    """
    cols = {}
    off = 0

    def take(name, n):
        nonlocal off
        cols[name] = slice(off, off + n)
        off += n

    if scheme is SchemeId.IRS_TAS_OSTBC_HBF:
        take("irs_g", 2 * cfg.nref)
        take("irs_h", 2 * cfg.nref * cfg.nt)
        if cfg.phase_strategy is PhaseStrategy.UNIFORM:
            take("irs_phase", cfg.nref)
    elif scheme is SchemeId.SISO:
        take("chan", 2)
    elif scheme is SchemeId.ALAMOUTI_2X1:
        take("chan", 4)
    else:
        take("chan", 2 * cfg.nt)
    take("bits", BITS_PER_FRAME)
    if scheme in _BEAMFORMED:
        take("aod", 2)
    take("noise", 4)
    return cols, off


def _map_symbols(bits2: np.ndarray) -> np.ndarray:
    # Gray map: first bit -> real sign, second -> imaginary sign, 0 positive.
    return ((1 - 2 * bits2[:, 0]) + 1j * (1 - 2 * bits2[:, 1])) * _ENERGY_FACTOR


def _simulate_frames(scheme, cfg, n0, streams, attempt=0) -> np.ndarray:
    """Per-frame bit error counts for the given stream ids."""
    if attempt > _MAX_RESAMPLE_ATTEMPTS:
        raise SingularMatrixError("resample limit hit on a persistently singular channel")
    nframes = streams.shape[0]
    cols, block = _frame_layout(scheme, cfg)
    u = stream_uniforms(cfg.seed, streams, block)
    bits = u[:, cols["bits"]] < 0.5
    noise = math.sqrt(n0) * complex_gaussian_from_uniforms(u[:, cols["noise"]])
    s1 = _map_symbols(bits[:, :2])
    s2 = _map_symbols(bits[:, 2:])

    if scheme is SchemeId.SISO:
        h = complex_gaussian_from_uniforms(u[:, cols["chan"]])[:, 0]
        y1 = h * s1 + noise[:, 0]
        y2 = h * s2 + noise[:, 1]
        z1 = h.conj() * y1
        z2 = h.conj() * y2
        hat = np.stack([z1.real < 0, z1.imag < 0, z2.real < 0, z2.imag < 0], axis=1)
        return np.count_nonzero(hat != bits, axis=1).astype(np.int64)

    singular = None
    if scheme is SchemeId.ALAMOUTI_2X1:
        h_eff = complex_gaussian_from_uniforms(u[:, cols["chan"]])
    else:
        if scheme is SchemeId.IRS_TAS_OSTBC_HBF:
            g = complex_gaussian_from_uniforms(u[:, cols["irs_g"]])
            h_seg = complex_gaussian_from_uniforms(u[:, cols["irs_h"]]).reshape(nframes, cfg.nref, cfg.nt)
            if cfg.phase_strategy is PhaseStrategy.UNIFORM:
                theta = 2.0 * np.pi * u[:, cols["irs_phase"]]
            elif cfg.phase_strategy is PhaseStrategy.ZERO:
                theta = np.zeros((nframes, cfg.nref))
            else:
                theta = -np.angle(g * h_seg[:, :, 0])
            phi = cfg.alpha * np.exp(1j * theta)
            big_h = np.sum(g[:, :, None] * phi[:, :, None] * h_seg, axis=1)
        else:
            big_h = complex_gaussian_from_uniforms(u[:, cols["chan"]])
        power = big_h.real**2 + big_h.imag**2
        pairs = np.asarray(list(itertools.combinations(range(cfg.nt), 2)))
        metrics = power[:, pairs[:, 0]] + power[:, pairs[:, 1]]
        chosen = pairs[np.argmax(metrics, axis=1)]
        rows = np.arange(nframes)
        h_eff = np.stack([big_h[rows, chosen[:, 0]], big_h[rows, chosen[:, 1]]], axis=1)
        if scheme in _PRECODED:
            norm2 = power[rows, chosen[:, 0]] + power[rows, chosen[:, 1]]
            singular = norm2 < GRAM_DET_TOL
            if not singular.any():
                singular = None
            with np.errstate(divide="ignore", invalid="ignore"):
                beta = np.sqrt(cfg.nt * norm2)
                h_eff = h_eff * (beta[:, None] * h_eff.conj() / norm2[:, None])
            if singular is not None:
                h_eff[singular] = 1.0  # placeholder; these frames are redrawn below
        if scheme in _BEAMFORMED:
            h_eff = math.sqrt(cfg.lt) * h_eff

    amp = _ENERGY_FACTOR
    y1 = amp * (h_eff[:, 0] * s1 + h_eff[:, 1] * s2) + noise[:, 0]
    y2 = amp * (h_eff[:, 1] * s1.conj() - h_eff[:, 0] * s2.conj()) + noise[:, 1]
    z1 = h_eff[:, 0].conj() * y1 + h_eff[:, 1] * y2.conj()
    z2 = h_eff[:, 1].conj() * y1 - h_eff[:, 0] * y2.conj()
    hat = np.stack([z1.real < 0, z1.imag < 0, z2.real < 0, z2.imag < 0], axis=1)
    errors = np.count_nonzero(hat != bits, axis=1).astype(np.int64)
    if singular is not None:
        redo = streams[singular] + _RESAMPLE_STRIDE
        errors[singular] = _simulate_frames(scheme, cfg, n0, redo, attempt + 1)
    return errors


def run_frame(scheme: SchemeId, cfg: SimConfig, snr_db: float, frame_index: int) -> tuple[int, int]:
    """Simulate one frame; returns (bit_errors, bits_carried)."""
    _check_scheme_config(scheme, cfg)
    if not 0 <= frame_index < cfg.total_frames:
        raise ValueError(f"frame_index must be in [0, {cfg.total_frames}), got {frame_index}")
    n0 = NoiseParams.from_snr_db(snr_db).n0
    streams = np.asarray([frame_index], dtype=np.uint64)
    errors = _simulate_frames(scheme, cfg, n0, streams)
    return int(errors[0]), BITS_PER_FRAME


def _chunk_errors(scheme, cfg, n0, base, start, stop) -> int:
    streams = np.uint64(base) + np.arange(start, stop, dtype=np.uint64)
    return int(_simulate_frames(scheme, cfg, n0, streams).sum())


def _chunk_ranges(scheme, cfg):
    nframes = cfg.total_frames
    _, block = _frame_layout(scheme, cfg)
    size = max(1024, _TARGET_CHUNK_DOUBLES // block)
    return [(lo, min(lo + size, nframes)) for lo in range(0, nframes, size)]


def run_point(scheme: SchemeId, cfg: SimConfig, snr_db: float, point_index: int = 0, workers: int = 1) -> BerPoint:
    """Estimate the BER at one SNR over all configured frames.

    The result is a pure function of (scheme, cfg, snr_db, point_index):
    frames are keyed by index and the error aggregation is commutative,
    so any worker count yields the identical point.
    """
    _check_scheme_config(scheme, cfg)
    n0 = NoiseParams.from_snr_db(snr_db).n0
    base = point_index * POINT_STREAM_STRIDE
    ranges = _chunk_ranges(scheme, cfg)
    if workers > 1 and len(ranges) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_chunk_errors, scheme, cfg, n0, base, lo, hi) for lo, hi in ranges]
            errors = sum(f.result() for f in futures)
    else:
        errors = sum(_chunk_errors(scheme, cfg, n0, base, lo, hi) for lo, hi in ranges)
    bits = BITS_PER_FRAME * cfg.total_frames
    low, high = wilson_ci(errors, bits)
    return BerPoint(snr_db=float(snr_db), total_bits=bits, bit_errors=errors, ber=errors / bits, ci_low=low, ci_high=high)


def run_sweep(scheme: SchemeId, cfg: SimConfig, workers: int = 1) -> BerCurve:
    """One BerPoint per grid SNR; frame streams are disjoint across points."""
    points = tuple(
        run_point(scheme, cfg, snr_db, point_index=i, workers=workers)
        for i, snr_db in enumerate(cfg.snr_grid_db)
    )
    return BerCurve(scheme=scheme, config=cfg, points=points)
