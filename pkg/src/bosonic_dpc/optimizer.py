"""Scalar maximization and sweeps of rate-versus-t curves."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, RateDomainError

RateFn = Callable[[float], float]

COARSE_GRID_POINTS = 65
DEFAULT_TOL = 1e-9
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class RatePoint:
    t: float
    rate: float


@dataclass(frozen=True)
class SweepResult:
    """A rate curve on a uniform t-grid plus its refined maximizer."""

    points: tuple[RatePoint, ...]
    argmax_t: float
    max_rate: float
    grid_step: float

    @property
    def ts(self) -> np.ndarray:
        return np.array([pt.t for pt in self.points])

    @property
    def rates(self) -> np.ndarray:
        return np.array([pt.rate for pt in self.points])

    def to_dict(self) -> dict:
        return {
            "points": [{"t": pt.t, "rate": pt.rate} for pt in self.points],
            "argmax_t": self.argmax_t,
            "max_rate": self.max_rate,
            "grid_step": self.grid_step,
        }


def _evaluate(rate_fn: RateFn, t: float) -> float:
    try:
        value = float(rate_fn(t))
    except RateDomainError:
        raise
    except (DomainError, ValueError, ZeroDivisionError) as exc:
        raise RateDomainError(t, exc) from exc
    if math.isnan(value):
        raise RateDomainError(t, "rate function returned NaN")
    return value


def _check_interval(lo: float, hi: float) -> tuple[float, float]:
    lo, hi = float(lo), float(hi)
    if not (math.isfinite(lo) and math.isfinite(hi)) or not lo < hi:
        raise DomainError(f"need finite lo < hi, got lo={lo!r}, hi={hi!r}")
    return lo, hi


def _best_index(values: Sequence[float]) -> int:
    # argmax with ties resolved toward the smallest t
    return int(np.argmax(np.asarray(values)))


def golden_section_max(
    rate_fn: RateFn, lo: float, hi: float, tol: float = DEFAULT_TOL
) -> tuple[float, float]:
    """Golden-section search for a maximum of a unimodal function on ``[lo, hi]``.

    Shrinks the bracket until its width is below ``tol`` and returns the
    midpoint together with its function value.
    """
    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = _evaluate(rate_fn, c), _evaluate(rate_fn, d)
    while b - a >= tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = _evaluate(rate_fn, c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = _evaluate(rate_fn, d)
        if b - a <= 4 * np.spacing(max(abs(a), abs(b), 1.0)):
            break
    mid = 0.5 * (a + b)
    return mid, _evaluate(rate_fn, mid)


def _refine(
    rate_fn: RateFn, grid: np.ndarray, values: Sequence[float], tol: float
) -> tuple[float, float]:
    i = _best_index(values)
    t_best, r_best = float(grid[i]), float(values[i])
    lo = float(grid[max(i - 1, 0)])
    hi = float(grid[min(i + 1, len(grid) - 1)])
    t_star, r_star = golden_section_max(rate_fn, lo, hi, tol)
    # never report anything worse than the grid scan; equal values keep the grid point
    if r_star > r_best:
        return t_star, r_star
    return t_best, r_best


def maximize_over_t(
    rate_fn: RateFn,
    lo: float = 0.0,
    hi: float = 1.0,
    tol: float = DEFAULT_TOL,
) -> tuple[float, float]:
    """Maximize ``rate_fn`` over ``[lo, hi]``.

    A 65-point grid brackets the best point; golden-section search then
    refines inside the neighbouring grid cells until the bracket is narrower
    than ``tol``. Ties go to the smaller ``t``.

    Returns
    -------
    (t_star, rate_star)
    """
    lo, hi = _check_interval(lo, hi)
    if not tol > 0:
        raise DomainError(f"tol must be > 0, got {tol!r}")
    grid = np.linspace(lo, hi, COARSE_GRID_POINTS)
    values = [_evaluate(rate_fn, float(t)) for t in grid]
    return _refine(rate_fn, grid, values, tol)


def sweep_t(
    rate_fn: RateFn,
    lo: float = 0.0,
    hi: float = 1.0,
    steps: int = 1001,
    tol: float = DEFAULT_TOL,
) -> SweepResult:
    """Evaluate ``rate_fn`` on ``steps`` equally spaced points of ``[lo, hi]``.

    The maximizer is refined past the grid resolution starting from the best
    grid point, so ``max_rate`` can slightly exceed every sampled rate.
    """
    lo, hi = _check_interval(lo, hi)
    if int(steps) != steps or steps < 2:
        raise DomainError(f"steps must be an integer >= 2, got {steps!r}")
    grid = np.linspace(lo, hi, int(steps))
    values = [_evaluate(rate_fn, float(t)) for t in grid]
    t_star, r_star = _refine(rate_fn, grid, values, tol)
    points = tuple(RatePoint(float(t), v) for t, v in zip(grid, values))
    return SweepResult(points, t_star, r_star, float(grid[1] - grid[0]))
