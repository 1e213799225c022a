"""Dense complex array helpers and counter-based random streams.

Every stochastic quantity in the simulator is drawn through
:class:`RandomSource`: the pair (seed, stream) fully determines the draw
sequence, so any Monte Carlo frame can be regenerated in isolation and
results never depend on execution order or worker count.  Draws are
random-access hashes of (key, position) - the SplitMix64 finalizer over a
golden-ratio lattice - which also lets the engine materialise the draws
of many streams as one vectorised array (:func:`stream_uniforms`).
"""

from __future__ import annotations

import operator

import numpy as np

__all__ = [
    "RandomSource",
    "SingularMatrixError",
    "complex_gaussian_from_uniforms",
    "frobenius_norm_sq",
    "hermitian",
    "invert_gram",
    "matmul",
    "sample_complex_gaussian",
    "sample_uniform_phase",
    "stream_uniforms",
]

GRAM_DET_TOL = 1e-12

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_GOLDEN2 = np.uint64((2 * 0x9E3779B97F4A7C15) & 0xFFFFFFFFFFFFFFFF)
_MIX_MUL1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX_MUL2 = np.uint64(0x94D049BB133111EB)
_DOUBLE_SCALE = 2.0 ** -53


class SingularMatrixError(ValueError):
    """Gram matrix too close to singular to invert."""


def _mix64(z):
    # SplitMix64 finalizer (full-avalanche hash of a 64-bit word).
    with np.errstate(over="ignore"):
        z = (z ^ (z >> np.uint64(30))) * _MIX_MUL1
        z = (z ^ (z >> np.uint64(27))) * _MIX_MUL2
    return z ^ (z >> np.uint64(31))


def _checked_u64(value, name: str) -> np.uint64:
    try:
        ivalue = operator.index(value)
    except TypeError as exc:
        raise TypeError(f"{name} must be an integer") from exc
    if not 0 <= ivalue < 2**64:
        raise ValueError(f"{name} must be in [0, 2**64), got {ivalue}")
    return np.uint64(ivalue)


def _stream_keys(seed: np.uint64, streams: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore"):
        return _mix64(_mix64(seed + _GOLDEN) ^ _mix64(streams + _GOLDEN2))


def stream_uniforms(seed, streams, count: int, start: int = 0) -> np.ndarray:
    """Uniform [0, 1) draws for many streams at once.

    Returns an array of shape ``(len(streams), count)`` whose row ``i``
    holds positions ``start .. start+count-1`` of stream ``streams[i]``
    under ``seed`` - bit-identical to consuming
    ``RandomSource(seed, streams[i])`` sequentially.
    """
    seed = _checked_u64(seed, "seed")
    streams = np.asarray(streams, dtype=np.uint64)
    if count < 0 or start < 0:
        raise ValueError("count and start must be nonnegative")
    keys = _stream_keys(seed, streams)
    with np.errstate(over="ignore"):
        offsets = (np.arange(start + 1, start + count + 1, dtype=np.uint64)) * _GOLDEN
        words = _mix64(keys[:, None] + offsets[None, :])
    return (words >> np.uint64(11)) * _DOUBLE_SCALE


class RandomSource:
    """One deterministic uniform stream keyed by (seed, stream).

    Instances are cheap and stateful; they must not be shared between
    concurrent workers - give each worker its own stream id.
    """

    def __init__(self, seed, stream=0):
        self.seed = int(_checked_u64(seed, "seed"))
        self.stream = int(_checked_u64(stream, "stream"))
        self._pos = 0

    def uniforms(self, count: int) -> np.ndarray:
        """Next ``count`` uniform [0, 1) doubles of this stream."""
        out = stream_uniforms(self.seed, [self.stream], count, start=self._pos)[0]
        self._pos += count
        return out

    def __repr__(self):  # pragma: no cover
        return f"RandomSource(seed={self.seed}, stream={self.stream})"


def complex_gaussian_from_uniforms(u: np.ndarray) -> np.ndarray:
    """Map 2k uniforms to k standard circular complex Gaussians.

    Polar Box-Muller with fixed consumption: pairs ``(u[2i], u[2i+1])``
    become one CN(0, 1) sample (variance 1/2 per real dimension).
    """
    u = np.asarray(u)
    radius = np.sqrt(-np.log1p(-u[..., 0::2]))
    return radius * np.exp(2j * np.pi * u[..., 1::2])


def sample_complex_gaussian(rng: RandomSource, rows: int, cols: int) -> np.ndarray:
    """(rows, cols) matrix of i.i.d. CN(0, 1) entries."""
    if rows < 1 or cols < 1:
        raise ValueError("rows and cols must be >= 1")
    u = rng.uniforms(2 * rows * cols)
    return complex_gaussian_from_uniforms(u).reshape(rows, cols)


def sample_uniform_phase(rng: RandomSource, n: int) -> np.ndarray:
    """n i.i.d. phases uniform on [0, 2*pi)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return 2.0 * np.pi * rng.uniforms(n)


def frobenius_norm_sq(m) -> float:
    """Sum of squared entry magnitudes."""
    m = np.asarray(m)
    if m.size == 0:
        raise ValueError("matrix must be nonempty")
    m = m.astype(np.complex128, copy=False)
    return float(np.sum(m.real**2 + m.imag**2))


def matmul(a, b) -> np.ndarray:
    a = np.asarray(a)
    b = np.asarray(b)
    if a.ndim != 2 or b.ndim != 2:
        raise ValueError("matmul expects 2-D operands")
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"dimension mismatch: {a.shape} x {b.shape}")
    return a @ b


def hermitian(m) -> np.ndarray:
    """Conjugate transpose."""
    return np.asarray(m).conj().T


def invert_gram(h) -> np.ndarray:
    """Inverse of the Gram matrix ``H H^H`` for 1 or 2 receive rows.

    Raises :class:`SingularMatrixError` when the Gram determinant
    magnitude falls below ``GRAM_DET_TOL``; with continuous fading that
    is a measure-zero event, but the guard turns it into a typed error
    instead of a NaN cascade.
    """
    h = np.asarray(h)
    if h.ndim != 2 or h.size == 0:
        raise ValueError("expected a nonempty 2-D channel matrix")
    gram = h @ h.conj().T
    n = gram.shape[0]
    if n == 1:
        det = gram[0, 0]
        if abs(det) < GRAM_DET_TOL:
            raise SingularMatrixError(f"Gram determinant {abs(det):.3e} below tolerance")
        return np.array([[1.0 / det]])
    if n == 2:
        det = gram[0, 0] * gram[1, 1] - gram[0, 1] * gram[1, 0]
        if abs(det) < GRAM_DET_TOL:
            raise SingularMatrixError(f"Gram determinant {abs(det):.3e} below tolerance")
        return np.array([[gram[1, 1], -gram[0, 1]], [-gram[1, 0], gram[0, 0]]]) / det
    raise ValueError("only 1x1 and 2x2 Gram inverses are supported")
