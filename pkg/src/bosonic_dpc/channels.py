"""Channel parameter models and their classical Gaussian reductions.

The lossy bosonic channel mixes the signal mode with a thermal environment
mode at a beam splitter of transmissivity ``eta``. Homodyne and heterodyne
receivers turn it into a classical additive Gaussian channel
``Y = sqrt(eta) (alpha + S) + Z``; the reductions below fold the ``sqrt(eta)``
gain into the signal and interference powers so the result has the canonical
form ``Y = X + S + Z``.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Any, Mapping

from .entropy import PhotonNumber
from .errors import DomainError


class _JsonFields:
    """``to_dict``/``from_dict`` for flat dataclasses; unknown keys are rejected."""

    def to_dict(self) -> dict[str, Any]:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]):
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise DomainError(
                f"unknown field(s) for {cls.__name__}: {sorted(unknown)}"
            )
        return cls(**data)


def _finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value!r}")
    return value


def _photons(name: str, value: float) -> float:
    try:
        return float(PhotonNumber(value))
    except DomainError as exc:
        raise DomainError(f"{name}: {exc}") from None


@dataclass(frozen=True)
class LossyChannelParams(_JsonFields):
    """Thermal-noise lossy channel.

    eta : transmissivity in ``[0, 1]``.
    n_e : mean photon number of the thermal environment.
    """

    eta: float
    n_e: float = 0.0

    def __post_init__(self):
        eta = _finite("eta", self.eta)
        if not 0.0 <= eta <= 1.0:
            raise DomainError(f"eta must lie in [0, 1], got {eta!r}")
        object.__setattr__(self, "eta", eta)
        object.__setattr__(self, "n_e", _photons("n_e", self.n_e))

    @property
    def is_pure_loss(self) -> bool:
        return self.n_e == 0.0


@dataclass(frozen=True)
class AmplifierChannelParams(_JsonFields):
    """Thermal amplifier with gain ``kappa > 1``."""

    kappa: float
    n_e: float = 0.0

    def __post_init__(self):
        kappa = _finite("kappa", self.kappa)
        if not kappa > 1.0:
            raise DomainError(f"kappa must be > 1, got {kappa!r}")
        object.__setattr__(self, "kappa", kappa)
        object.__setattr__(self, "n_e", _photons("n_e", self.n_e))


@dataclass(frozen=True)
class SignalParams(_JsonFields):
    """Input photon-number constraint ``n_a`` and interference photon number ``n_s``."""

    n_a: float
    n_s: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "n_a", _photons("n_a", self.n_a))
        object.__setattr__(self, "n_s", _photons("n_s", self.n_s))


@dataclass(frozen=True)
class ClassicalDpcInstance(_JsonFields):
    """Costa's channel ``Y = X + S + Z`` with ``X ~ N(0, p)``, ``S ~ N(0, q)``, ``Z ~ N(0, n)``.

    For a real channel all three numbers are variances. With
    ``complex_valued=True`` the channel is circularly symmetric complex:
    ``p`` and ``q`` are total powers ``E|X|^2`` and ``E|S|^2`` (so each
    quadrature carries ``p/2`` and ``q/2``) while ``n`` is the noise variance
    of each quadrature.
    """

    p: float
    q: float
    n: float
    complex_valued: bool = False

    def __post_init__(self):
        p, q, n = (_finite(k, getattr(self, k)) for k in ("p", "q", "n"))
        if p < 0.0:
            raise DomainError(f"p must be >= 0, got {p!r}")
        if q < 0.0:
            raise DomainError(f"q must be >= 0, got {q!r}")
        if not n > 0.0:
            raise DomainError(f"n must be > 0, got {n!r}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "complex_valued", bool(self.complex_valued))

    def per_dimension(self) -> ClassicalDpcInstance:
        """Real-valued instance describing a single quadrature."""
        if not self.complex_valued:
            return self
        return ClassicalDpcInstance(self.p / 2.0, self.q / 2.0, self.n)

    @property
    def dimensions(self) -> int:
        return 2 if self.complex_valued else 1


def homodyne_noise_variance(ch: LossyChannelParams) -> float:
    """Variance ``(2 (1 - eta) n_e + 1) / 4`` of the homodyne quadrature noise."""
    return (2.0 * (1.0 - ch.eta) * ch.n_e + 1.0) / 4.0


def heterodyne_noise_variance(ch: LossyChannelParams) -> float:
    """Per-quadrature variance ``((1 - eta) n_e + 1) / 2`` of heterodyne noise."""
    return ((1.0 - ch.eta) * ch.n_e + 1.0) / 2.0


def homodyne_reduction(
    ch: LossyChannelParams, sig: SignalParams
) -> ClassicalDpcInstance:
    """Real Costa instance seen by a homodyne receiver."""
    return ClassicalDpcInstance(
        p=ch.eta * sig.n_a,
        q=ch.eta * sig.n_s,
        n=homodyne_noise_variance(ch),
    )


def heterodyne_reduction(
    ch: LossyChannelParams, sig: SignalParams
) -> ClassicalDpcInstance:
    """Complex Costa instance seen by a heterodyne receiver."""
    return ClassicalDpcInstance(
        p=ch.eta * sig.n_a,
        q=ch.eta * sig.n_s,
        n=heterodyne_noise_variance(ch),
        complex_valued=True,
    )
