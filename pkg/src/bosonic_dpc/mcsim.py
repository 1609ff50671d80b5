"""Seeded Monte Carlo checks of the dirty-paper-coding formulas.

Random streams come from numpy's ``PCG64`` bit generator. Each configuration
derives independent child streams from its 64-bit seed with
``numpy.random.SeedSequence(seed).spawn(k)``. Stream ``i`` feeds batch ``i``
of the Costa estimator. For the modulo demo, streams 0, 1 and 2 feed the
data symbols, the receiver noise and the interference. A given
``(seed, num_samples, num_batches)`` therefore always reproduces the same
numbers on a given numpy version.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Any, Mapping

import numpy as np

from .channels import ClassicalDpcInstance
from .errors import DomainError, EstimationError
from .rates import costa_rate

DEFAULT_BATCHES = 32
MIN_ESTIMATION_SAMPLES = 1000


def _streams(seed: int, count: int) -> list[np.random.Generator]:
    children = np.random.SeedSequence(seed).spawn(count)
    return [np.random.Generator(np.random.PCG64(child)) for child in children]


def _check_seed(seed) -> int:
    if int(seed) != seed or not 0 <= seed < 2**64:
        raise DomainError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
    return int(seed)


def _reject_unknown(cls, data: Mapping[str, Any], allowed: set[str]) -> None:
    unknown = set(data) - allowed
    if unknown:
        raise DomainError(f"unknown field(s) for {cls.__name__}: {sorted(unknown)}")


@dataclass(frozen=True)
class McConfig:
    """Configuration of a Costa-rate Monte Carlo run (real-valued instances)."""

    seed: int
    num_samples: int
    inst: ClassicalDpcInstance
    t: float
    num_batches: int = DEFAULT_BATCHES

    def __post_init__(self):
        object.__setattr__(self, "seed", _check_seed(self.seed))
        if int(self.num_samples) != self.num_samples or self.num_samples < 2:
            raise DomainError(f"num_samples must be an integer >= 2, got {self.num_samples!r}")
        if int(self.num_batches) != self.num_batches or self.num_batches < 2:
            raise DomainError(f"num_batches must be an integer >= 2, got {self.num_batches!r}")
        if self.num_batches > self.num_samples:
            raise DomainError("num_batches cannot exceed num_samples")
        if self.inst.complex_valued:
            raise DomainError("Monte Carlo estimation expects a real-valued instance")
        if not math.isfinite(float(self.t)):
            raise DomainError(f"t must be finite, got {self.t!r}")
        object.__setattr__(self, "num_samples", int(self.num_samples))
        object.__setattr__(self, "num_batches", int(self.num_batches))
        object.__setattr__(self, "t", float(self.t))

    def to_dict(self) -> dict[str, Any]:
        return {
            "seed": self.seed,
            "num_samples": self.num_samples,
            "inst": {"p": self.inst.p, "q": self.inst.q, "n": self.inst.n},
            "t": self.t,
            "num_batches": self.num_batches,
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> McConfig:
        _reject_unknown(cls, data, {"seed", "num_samples", "inst", "t", "num_batches"})
        kwargs = dict(data)
        inst = kwargs.get("inst")
        if not isinstance(inst, Mapping):
            raise DomainError("McConfig needs an 'inst' object with fields p, q, n")
        kwargs["inst"] = ClassicalDpcInstance.from_dict(inst)
        return cls(**kwargs)


@dataclass(frozen=True)
class McResult:
    """Estimate of ``I(U;Y) - I(U;S)`` with batch-means standard errors."""

    estimate: float
    std_error: float
    mi_uy: float
    mi_us: float
    mi_us_std_error: float
    closed_form: float
    config: McConfig = field(repr=False)

    def to_dict(self) -> dict[str, Any]:
        record = {k: v for k, v in asdict(self).items() if k != "config"}
        record.update(self.config.to_dict())
        return record


class _Moments:
    """Running first and second moments of (U, S, Y)."""

    def __init__(self):
        self.count = 0
        self.first = np.zeros(3)
        self.second = np.zeros((3, 3))

    def add(self, data: np.ndarray) -> None:
        self.count += data.shape[1]
        self.first += data.sum(axis=1)
        self.second += data @ data.T

    def merge(self, other: _Moments) -> None:
        self.count += other.count
        self.first += other.first
        self.second += other.second

    def covariance(self) -> np.ndarray:
        mean = self.first / self.count
        return (self.second - self.count * np.outer(mean, mean)) / (self.count - 1)


def _gaussian_mi(cov: np.ndarray, i: int, j: int) -> float:
    vi, vj, c = cov[i, i], cov[j, j], cov[i, j]
    if vi <= 0.0 or vj <= 0.0:
        # a constant variable shares no information
        return 0.0
    det = vi * vj - c * c
    if det <= 0.0:
        raise EstimationError("singular empirical covariance")
    return 0.5 * math.log2(vi * vj / det)


def _rate_terms(cov: np.ndarray) -> tuple[float, float]:
    # index order is (U, S, Y)
    return _gaussian_mi(cov, 0, 2), _gaussian_mi(cov, 0, 1)


def _batch_sizes(total: int, batches: int) -> list[int]:
    base, extra = divmod(total, batches)
    return [base + (1 if b < extra else 0) for b in range(batches)]


def draw_costa_batch(
    rng: np.random.Generator, size: int, inst: ClassicalDpcInstance, t: float
) -> dict[str, np.ndarray]:
    """Draw ``size`` samples of ``X, S, Z`` and form ``U = X + tS``, ``Y = X + S + Z``."""
    x = rng.normal(0.0, math.sqrt(inst.p), size)
    s = rng.normal(0.0, math.sqrt(inst.q), size)
    z = rng.normal(0.0, math.sqrt(inst.n), size)
    return {"x": x, "s": s, "z": z, "u": x + t * s, "y": x + s + z}


def sample_costa_ensemble(cfg: McConfig) -> dict[str, np.ndarray]:
    """All samples of a configuration, batches concatenated in stream order."""
    parts = [
        draw_costa_batch(rng, size, cfg.inst, cfg.t)
        for rng, size in zip(
            _streams(cfg.seed, cfg.num_batches),
            _batch_sizes(cfg.num_samples, cfg.num_batches),
        )
    ]
    return {k: np.concatenate([part[k] for part in parts]) for k in parts[0]}


def estimate_costa_rate(cfg: McConfig) -> McResult:
    """Plug-in Gaussian estimate of ``I(U;Y) - I(U;S)``.

    Mutual informations come from empirical 2x2 covariances. The point
    estimate pools all samples. The standard error is the spread of the
    per-batch estimates divided by ``sqrt(num_batches)``.

    Raises
    ------
    DomainError
        If fewer than 1000 samples are requested.
    EstimationError
        If an empirical covariance is singular.
    """
    if cfg.num_samples < MIN_ESTIMATION_SAMPLES:
        raise DomainError(
            f"estimation needs num_samples >= {MIN_ESTIMATION_SAMPLES}, got {cfg.num_samples}"
        )
    pooled = _Moments()
    batch_diff, batch_us = [], []
    sizes = _batch_sizes(cfg.num_samples, cfg.num_batches)
    for rng, size in zip(_streams(cfg.seed, cfg.num_batches), sizes):
        draw = draw_costa_batch(rng, size, cfg.inst, cfg.t)
        moments = _Moments()
        moments.add(np.vstack([draw["u"], draw["s"], draw["y"]]))
        i_uy, i_us = _rate_terms(moments.covariance())
        batch_diff.append(i_uy - i_us)
        batch_us.append(i_us)
        pooled.merge(moments)

    i_uy, i_us = _rate_terms(pooled.covariance())
    root_b = math.sqrt(cfg.num_batches)
    return McResult(
        estimate=i_uy - i_us,
        std_error=float(np.std(batch_diff, ddof=1) / root_b),
        mi_uy=i_uy,
        mi_us=i_us,
        mi_us_std_error=float(np.std(batch_us, ddof=1) / root_b),
        closed_form=costa_rate(cfg.inst, cfg.t),
        config=cfg,
    )


@dataclass(frozen=True)
class ModuloDemoConfig:
    """One-dimensional modulo precoder with ``constellation_size`` equally spaced points."""

    seed: int
    num_symbols: int
    constellation_size: int
    cell_width: float
    noise_std: float
    interference_std: float

    def __post_init__(self):
        object.__setattr__(self, "seed", _check_seed(self.seed))
        if int(self.num_symbols) != self.num_symbols or self.num_symbols < 1:
            raise DomainError(f"num_symbols must be a positive integer, got {self.num_symbols!r}")
        if int(self.constellation_size) != self.constellation_size or self.constellation_size < 2:
            raise DomainError(f"constellation_size must be an integer >= 2, got {self.constellation_size!r}")
        if not (math.isfinite(self.cell_width) and self.cell_width > 0):
            raise DomainError(f"cell_width must be > 0, got {self.cell_width!r}")
        for name in ("noise_std", "interference_std"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0):
                raise DomainError(f"{name} must be >= 0, got {value!r}")
        object.__setattr__(self, "num_symbols", int(self.num_symbols))
        object.__setattr__(self, "constellation_size", int(self.constellation_size))

    def constellation(self) -> np.ndarray:
        """Cell-centred points; all lie strictly inside ``[-w/2, w/2)``."""
        step = self.cell_width / self.constellation_size
        return -self.cell_width / 2 + step * (np.arange(self.constellation_size) + 0.5)

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> ModuloDemoConfig:
        _reject_unknown(cls, data, {f for f in cls.__dataclass_fields__})
        return cls(**data)


def wrap(v, cell_width: float):
    """Reduce ``v`` into the fundamental cell: ``v - w * round(v / w)``, ties to even."""
    return v - cell_width * np.round(np.asarray(v) / cell_width)


def _decode(received: np.ndarray, cfg: ModuloDemoConfig) -> np.ndarray:
    step = cfg.cell_width / cfg.constellation_size
    folded = wrap(received, cfg.cell_width)
    idx = np.floor((folded + cfg.cell_width / 2) / step).astype(np.int64)
    return idx % cfg.constellation_size


def _symbol_error_rate(cfg, data, noise, interference) -> float:
    points = cfg.constellation()
    x = wrap(points[data] - interference, cfg.cell_width)
    y = x + interference + noise
    return float(np.mean(_decode(y, cfg) != data))


def modulo_dpc_demo(cfg: ModuloDemoConfig) -> tuple[float, float]:
    """Symbol error rates of the modulo precoder with and without interference.

    The transmitter sends ``wrap(d - s)``; the receiver wraps ``y = x + s + z``
    and picks the nearest constellation point. Both runs share the data and
    noise draws, so any difference is due to the interference alone.

    Returns
    -------
    (ser_with_interference, ser_without)
    """
    data_rng, noise_rng, interference_rng = _streams(cfg.seed, 3)
    data = data_rng.integers(0, cfg.constellation_size, cfg.num_symbols)
    noise = noise_rng.normal(0.0, cfg.noise_std, cfg.num_symbols)
    interference = interference_rng.normal(0.0, cfg.interference_std, cfg.num_symbols)
    with_s = _symbol_error_rate(cfg, data, noise, interference)
    without_s = _symbol_error_rate(cfg, data, noise, np.zeros(cfg.num_symbols))
    return with_s, without_s


def binomial_tolerance(rates, num_trials: int, sigmas: float = 3.0) -> float:
    """``sigmas`` times the standard deviation of a difference of two error rates."""
    pbar = float(np.mean(rates))
    return sigmas * math.sqrt(2.0 * pbar * (1.0 - pbar) / num_trials)
