"""Thermal-state entropy and log helpers.

All quantities are in bits.
"""

import math

from .errors import DomainError

# n*log2(n) is taken as its limit 0 below this threshold.
_XLOGX_FLOOR = 1e-300


class PhotonNumber(float):
    """Mean photon number of a single bosonic mode (a non-negative float)."""

    def __new__(cls, value):
        value = float(value)
        if not value >= 0.0:  # also rejects NaN
            raise DomainError(f"photon number must be >= 0, got {value!r}")
        if math.isinf(value):
            raise DomainError("photon number must be finite")
        return super().__new__(cls, value)


def xlog2x(x: float) -> float:
    """Return ``x * log2(x)`` with the continuous extension ``0`` at ``x = 0``."""
    if x < _XLOGX_FLOOR:
        return 0.0
    return x * math.log2(x)


def thermal_entropy(n: float) -> float:
    """Von Neumann entropy of a thermal state with mean photon number ``n``.

    ``g(n) = (n + 1) log2(n + 1) - n log2(n)``, with ``g(0) = 0``.

    Parameters
    ----------
    n : float
        Mean photon number, ``n >= 0``.

    Returns
    -------
    float
        Entropy in bits.

    Raises
    ------
    DomainError
        If ``n`` is negative or not finite.
    """
    n = PhotonNumber(n)
    if n < _XLOGX_FLOOR:
        return 0.0
    # log2(n+1) + n log2(1 + 1/n) avoids the cancellation of the textbook form at large n
    return (math.log1p(n) + n * math.log1p(1.0 / n)) / math.log(2.0)


def thermal_entropy_derivative(n: float) -> float:
    """Analytic derivative ``g'(n) = log2((n + 1) / n)`` for ``n > 0``."""
    n = PhotonNumber(n)
    if n == 0.0:
        return math.inf
    return math.log2((n + 1.0) / n)
