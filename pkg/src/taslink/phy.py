"""4-QAM Gray mapping and the rate-1 2x2 orthogonal space-time block code.

Codeword for a symbol pair (x1, x2), columns being the two channel uses:

    X = | x1  -x2* |
        | x2   x1* |

With a two-entry effective channel [h1 h2] and received samples y1, y2
from the two uses, linear combining

    x1~ = h1* y1 + h2 y2*
    x2~ = h2* y1 - h1 y2*

decouples the pair: x1~ = A (|h1|^2 + |h2|^2) x1 + noise, with A the
per-antenna amplitude, and likewise for x2~.  Quadrant decisions on the
combined variables are invariant to any positive scaling, so detection
needs neither the channel gain nor any receive-side AGC factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "AlamoutiCodeword",
    "DecisionPair",
    "alamouti_combine",
    "alamouti_encode",
    "detect_pair",
    "qam4_demap",
    "qam4_map",
]

_INV_SQRT2 = 1.0 / math.sqrt(2.0)

#: alias for the 2x2 codeword array returned by :func:`alamouti_encode`
AlamoutiCodeword = np.ndarray


def qam4_map(bits) -> complex:
    """Gray-map 2 bits to a unit-energy 4-QAM point.

    Convention: first bit selects the real sign, second the imaginary
    sign, 0 meaning positive - 00 -> (1+1j)/sqrt(2), 01 -> (1-1j)/sqrt(2),
    10 -> (-1+1j)/sqrt(2), 11 -> (-1-1j)/sqrt(2).
    """
    bits = tuple(int(b) for b in bits)
    if len(bits) != 2 or any(b not in (0, 1) for b in bits):
        raise ValueError(f"expected exactly 2 bits in {{0,1}}, got {bits!r}")
    return complex((1 - 2 * bits[0]) * _INV_SQRT2, (1 - 2 * bits[1]) * _INV_SQRT2)


def qam4_demap(z) -> np.ndarray:
    """Quadrant decision, inverse of :func:`qam4_map` for any positive scale.

    Axis ties resolve to bit 0 (the nonnegative half-plane).
    """
    z = complex(z)
    return np.array([1 if z.real < 0 else 0, 1 if z.imag < 0 else 0], dtype=np.int64)


def alamouti_encode(x1, x2) -> AlamoutiCodeword:
    """2x2 codeword [[x1, -x2*], [x2, x1*]]."""
    x1 = complex(x1)
    x2 = complex(x2)
    return np.array([[x1, -x2.conjugate()], [x2, x1.conjugate()]])


@dataclass(frozen=True)
class DecisionPair:
    """Decoupled decision variables and the combining gain sum |h1|^2+|h2|^2."""

    x1: complex
    x2: complex
    channel_gain: float


def alamouti_combine(h_eff, y1, y2) -> DecisionPair:
    """Combine the two received samples with the effective channel entries."""
    h_eff = np.asarray(h_eff, dtype=complex).ravel()
    if h_eff.shape != (2,):
        raise ValueError(f"effective channel must have exactly 2 entries, got {h_eff.shape}")
    h1, h2 = complex(h_eff[0]), complex(h_eff[1])
    y1 = complex(y1)
    y2 = complex(y2)
    x1 = h1.conjugate() * y1 + h2 * y2.conjugate()
    x2 = h2.conjugate() * y1 - h1 * y2.conjugate()
    gain = abs(h1) ** 2 + abs(h2) ** 2
    return DecisionPair(x1, x2, gain)


def detect_pair(d: DecisionPair) -> np.ndarray:
    """Hard bits [b1 b2 b3 b4] for the combined pair.

    Quadrant detection: the positive combining gain can never change a
    quadrant, so no normalisation by channel_gain is needed.
    """
    return np.concatenate([qam4_demap(d.x1), qam4_demap(d.x2)])
