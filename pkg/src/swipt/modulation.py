"""Per-symbol powers, PAPR and conditional SER for M-PSK, M-PAM and square M-QAM.

Only symbol *powers* matter to the analytic pipeline; complex constellation
coordinates live in :mod:`swipt.montecarlo`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .decode import gaussian_tail

__all__ = ["Scheme", "Constellation", "build", "papr", "g_coefficient", "ser_conditional"]


class Scheme(str, enum.Enum):
    PSK = "psk"
    PAM = "pam"
    QAM = "qam"

    @classmethod
    def parse(cls, value: "Scheme | str") -> "Scheme":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"unknown modulation {value!r}; expected one of psk, pam, qam") from None


def _check_order(scheme: Scheme, order: int) -> int:
    if isinstance(order, bool) or int(order) != order or order < 2:
        raise ValueError(f"modulation order must be an integer power of two >= 2, got {order!r}")
    order = int(order)
    bits = order.bit_length() - 1
    if 1 << bits != order:
        raise ValueError(f"modulation order must be a power of two, got {order}")
    if scheme is Scheme.QAM and bits % 2:
        raise ValueError(
            f"{order}-QAM is not a square constellation; only M = 4, 16, 64, ... are supported"
        )
    return order


def _mod1(z: int, Z: int) -> int:
    """``z mod Z`` mapped into 1..Z (a multiple of Z gives Z, not 0)."""
    r = z % Z
    return Z if r == 0 else r


def _pam_level(i: int, M: int) -> float:
    """Odd amplitude index ``2*ceil(|i - (M+1)/2|) - 1`` for 1-based symbol i."""
    return 2 * math.ceil(abs(i - (M + 1) / 2)) - 1


def _normalized_powers(scheme: Scheme, M: int) -> np.ndarray:
    idx = range(1, M + 1)
    if scheme is Scheme.PSK:
        return np.ones(M)
    if scheme is Scheme.PAM:
        return np.array([3.0 / (M * M - 1) * _pam_level(i, M) ** 2 for i in idx])
    L = math.isqrt(M)
    out = []
    for i in idx:
        a = _pam_level(math.ceil(i / L), L)
        b = _pam_level(_mod1(i, L), L)
        out.append(3.0 / (2 * (M - 1)) * (a * a + b * b))
    return np.array(out)


def papr(scheme: Scheme | str, order: int) -> float:
    """Peak-to-average power ratio of the constellation."""
    scheme = Scheme.parse(scheme)
    M = _check_order(scheme, order)
    if scheme is Scheme.PSK:
        return 1.0
    if scheme is Scheme.PAM:
        return 3.0 * (M - 1) / (M + 1)
    r = math.sqrt(M)
    return 3.0 * (r - 1) / (r + 1)


def g_coefficient(scheme: Scheme | str, order: int) -> float:
    scheme = Scheme.parse(scheme)
    M = _check_order(scheme, order)
    if scheme is Scheme.PSK:
        return math.sin(math.pi / M) ** 2
    if scheme is Scheme.PAM:
        return 3.0 / (M * M - 1)
    return 3.0 / (2 * (M - 1))


@dataclass(frozen=True)
class Constellation:
    """Power profile of an equiprobable M-ary constellation at unit average power."""

    scheme: Scheme
    order: int
    normalized_powers: np.ndarray = field(repr=False, compare=False)
    papr: float
    g_coeff: float

    @property
    def symbol_prob(self) -> float:
        return 1.0 / self.order

    @property
    def name(self) -> str:
        return f"{self.order}-{self.scheme.name}"

    def zero_snr_ser(self) -> float:
        return float(ser_conditional(self, 0.0))


def build(scheme: Scheme | str, order: int) -> Constellation:
    """Build the constellation power profile for ``order``-ary ``scheme``.

    >>> build("pam", 4).normalized_powers
    array([1.8, 0.2, 0.2, 1.8])
    """
    scheme = Scheme.parse(scheme)
    M = _check_order(scheme, order)
    powers = _normalized_powers(scheme, M)
    powers.setflags(write=False)
    return Constellation(scheme, M, powers, papr(scheme, M), g_coefficient(scheme, M))


def ser_conditional(c: Constellation, snr):
    """Symbol error rate at instantaneous SNR ``snr`` (scalar or array).

    PSK uses the usual ``2 Q(sqrt(2 g snr))`` approximation, which can exceed
    the true SER at low SNR; results are clipped to [0, 1].
    """
    snr = np.asarray(snr, dtype=float)
    if np.any(snr < 0) or np.any(np.isnan(snr)):
        raise ValueError("snr must be >= 0")
    q = gaussian_tail(np.sqrt(2.0 * c.g_coeff * snr))
    M = c.order
    if c.scheme is Scheme.PSK:
        ser = 2.0 * q
    elif c.scheme is Scheme.PAM:
        ser = 2.0 * (M - 1) / M * q
    else:
        k = 1.0 - 1.0 / math.sqrt(M)
        ser = 4.0 * k * q - 4.0 * k * k * q * q
    ser = np.clip(ser, 0.0, 1.0)
    return float(ser) if ser.ndim == 0 else ser
