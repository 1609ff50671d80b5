"""Closed-form dirty-paper-coding rate functionals.

Every function returns bits per channel use (per mode for the bosonic
formulas). Rates are returned raw: the joint-detection expressions are
differences of entropies and can go negative for a poor coefficient ``t``.
"""

from __future__ import annotations

import math

from .channels import (
    AmplifierChannelParams,
    ClassicalDpcInstance,
    LossyChannelParams,
    SignalParams,
    heterodyne_noise_variance,
    heterodyne_reduction,
    homodyne_noise_variance,
    homodyne_reduction,
)
from .entropy import thermal_entropy
from .errors import DegenerateInstanceError, DomainError

# Default search interval for the dirty-paper coefficient.
T_DOMAIN = (0.0, 1.0)


def _check_t(t: float) -> float:
    t = float(t)
    if not math.isfinite(t):
        raise DomainError(f"t must be finite, got {t!r}")
    return t


def mmse_coefficient(p: float, n: float) -> float:
    """Linear MMSE gain ``p / (p + n)`` for estimating ``X`` from ``X + Z``."""
    if p < 0 or n < 0:
        raise DomainError(f"p and n must be >= 0, got p={p!r}, n={n!r}")
    if p + n == 0:
        raise DegenerateInstanceError("mmse coefficient undefined for p = n = 0")
    return p / (p + n)


def _costa_real(p: float, q: float, n: float, t: float) -> float:
    if q == 0.0:
        return 0.5 * math.log2(1.0 + p / n)
    if p == 0.0:
        raise DegenerateInstanceError(
            f"Costa rate undefined at p=0 with q={q!r} > 0"
        )
    # numerator and denominator divided by p so tiny powers do not underflow
    den = q * (1.0 - t) ** 2 + n + n * t * t * (q / p)
    return 0.5 * math.log2((p + q + n) / den)


def costa_rate(inst: ClassicalDpcInstance, t: float) -> float:
    """``I(U;Y) - I(U;S)`` for ``U = X + tS`` with independent Gaussian ``X, S, Z``.

    For a real instance this is::

        0.5 * log2( p (p + q + n) / (p q (1 - t)^2 + n (p + t^2 q)) )

    A complex instance is two independent quadratures at half the signal and
    interference power, so the real formula is doubled.

    Raises
    ------
    DegenerateInstanceError
        If ``p = 0`` while ``q > 0`` (the auxiliary then leaks infinite
        information about the interference).
    """
    t = _check_t(t)
    real = inst.per_dimension()
    return inst.dimensions * _costa_real(real.p, real.q, real.n, t)


def interference_free_rate(inst: ClassicalDpcInstance) -> float:
    """AWGN capacity of the instance with the interference removed."""
    real = inst.per_dimension()
    return inst.dimensions * 0.5 * math.log2(1.0 + real.p / real.n)


def costa_mmse_coefficient(inst: ClassicalDpcInstance) -> float:
    """MMSE coefficient of an instance (identical for real and complex forms)."""
    real = inst.per_dimension()
    return mmse_coefficient(real.p, real.n)


def homodyne_capacity(ch: LossyChannelParams, sig: SignalParams) -> float:
    """``0.5 log2(1 + 4 eta n_a / (2 (1 - eta) n_e + 1))``; does not depend on ``n_s``."""
    return 0.5 * math.log2(1.0 + ch.eta * sig.n_a / homodyne_noise_variance(ch))


def heterodyne_capacity(ch: LossyChannelParams, sig: SignalParams) -> float:
    """``log2(1 + eta n_a / ((1 - eta) n_e + 1))``; does not depend on ``n_s``."""
    per_quadrature_snr = 0.5 * ch.eta * sig.n_a / heterodyne_noise_variance(ch)
    return math.log2(1.0 + per_quadrature_snr)


def homodyne_dpc_rate(ch: LossyChannelParams, sig: SignalParams, t: float) -> float:
    """Costa rate of the homodyne reduction at coefficient ``t``."""
    return costa_rate(homodyne_reduction(ch, sig), t)


def heterodyne_dpc_rate(
    ch: LossyChannelParams, sig: SignalParams, t: float
) -> float:
    """Costa rate of the heterodyne reduction at coefficient ``t``."""
    return costa_rate(heterodyne_reduction(ch, sig), t)


def conditional_interference_variance(sig: SignalParams, t: float) -> float:
    """Variance of ``S`` given ``gamma = alpha + t S``: ``n_a n_s / (n_a + t^2 n_s)``."""
    t = _check_t(t)
    if sig.n_s == 0.0:
        return 0.0
    den = sig.n_a + t * t * sig.n_s
    if den == 0.0:
        raise DegenerateInstanceError(
            "var(S | gamma) undefined: n_a = 0 and t = 0 with n_s > 0"
        )
    return sig.n_a * sig.n_s / den


def _dpc_bound(gain: float, noise: float, sig: SignalParams, t: float) -> float:
    # Shared shape of the lossy (gain=eta) and amplifier (gain=kappa) bounds;
    # `noise` is the environment contribution added to both entropy arguments.
    t = _check_t(t)
    if sig.n_s == 0.0:
        return thermal_entropy(gain * sig.n_a + noise) - thermal_entropy(noise)
    if sig.n_a == 0.0:
        raise DomainError("DPC bound diverges for n_a = 0 with n_s > 0")
    residual = (1.0 - t) ** 2 * conditional_interference_variance(sig, t)
    return (
        thermal_entropy(gain * (sig.n_a + sig.n_s) + noise)
        - thermal_entropy(gain * residual + noise)
        - math.log2((sig.n_a + t * t * sig.n_s) / sig.n_a)
    )


def joint_dpc_rate(ch: LossyChannelParams, sig: SignalParams, t: float) -> float:
    """Joint-detection DPC lower bound for the lossy bosonic channel.

    ``g(eta (n_a + n_s) + (1 - eta) n_e)
    - g(eta (1 - t)^2 n_a n_s / (n_a + t^2 n_s) + (1 - eta) n_e)
    - log2((n_a + t^2 n_s) / n_a)``

    where ``g`` is :func:`~bosonic_dpc.entropy.thermal_entropy`. With
    ``n_e = 0`` this is the pure-loss bound.
    """
    return _dpc_bound(ch.eta, (1.0 - ch.eta) * ch.n_e, sig, t)


def amplifier_dpc_rate(
    ch: AmplifierChannelParams, sig: SignalParams, t: float
) -> float:
    """DPC lower bound for the thermal amplifier; ``kappa`` replaces ``eta``."""
    return _dpc_bound(ch.kappa, (ch.kappa - 1.0) * ch.n_e, sig, t)


def joint_interference_free_rate(ch: LossyChannelParams, sig: SignalParams) -> float:
    """Joint-detection rate with no interference: ``g(eta n_a + (1-eta) n_e) - g((1-eta) n_e)``."""
    noise = (1.0 - ch.eta) * ch.n_e
    return thermal_entropy(ch.eta * sig.n_a + noise) - thermal_entropy(noise)
