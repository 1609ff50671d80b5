"""Brute-force Gelfand-Pinsker rates on small finite alphabets.

The Gelfand-Pinsker value is ``max I(U;Y) - I(U;S)`` over auxiliaries ``U``
with ``U - (X, S) - Y``. Here ``X`` is restricted to a deterministic function
of ``(U, S)``, which is enough to reach the maximum. The search enumerates
every such map and grids the simplex of ``p(u|s)``. It is only used as an
independent cross-check, and what it reports is a lower bound on the value.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from typing import Any, Mapping

import numpy as np

from .errors import BudgetExceededError, DomainError

MAX_ALPHABET = 4
DEFAULT_BUDGET = 50_000_000
_CHUNK = 1 << 15
_SUM_TOL = 1e-12
_REFINE_MAPS = 8


def _as_probabilities(name, arr, axis=-1):
    arr = np.asarray(arr, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr < 0):
        raise DomainError(f"{name} must have finite, non-negative entries")
    if np.any(np.abs(arr.sum(axis=axis) - 1.0) > _SUM_TOL):
        raise DomainError(f"{name} must sum to 1 along its last axis")
    return arr


@dataclass(frozen=True, eq=False)
class DiscreteGpInstance:
    """State distribution ``s_dist[s]``, channel table ``channel[s][x][y] = W(y|x,s)``
    and auxiliary alphabet size ``u_size``."""

    s_dist: np.ndarray
    channel: np.ndarray
    u_size: int

    def __post_init__(self):
        s_dist = _as_probabilities("s_dist", self.s_dist)
        channel = _as_probabilities("channel", self.channel)
        if s_dist.ndim != 1 or channel.ndim != 3:
            raise DomainError("s_dist must be 1-D and channel must be [|S|][|X|][|Y|]")
        if channel.shape[0] != s_dist.shape[0]:
            raise DomainError("channel's first axis must match len(s_dist)")
        if max(channel.shape) > MAX_ALPHABET:
            raise DomainError(f"alphabet sizes are capped at {MAX_ALPHABET}")
        u_size = self.u_size
        if int(u_size) != u_size or u_size < 1:
            raise DomainError(f"u_size must be a positive integer, got {u_size!r}")
        if u_size > channel.shape[0] * channel.shape[1] + 1:
            raise DomainError("u_size must not exceed |X|*|S| + 1")
        s_dist.setflags(write=False)
        channel.setflags(write=False)
        object.__setattr__(self, "s_dist", s_dist)
        object.__setattr__(self, "channel", channel)
        object.__setattr__(self, "u_size", int(u_size))

    @property
    def sizes(self) -> tuple[int, int, int]:
        """``(|S|, |X|, |Y|)``."""
        return self.channel.shape

    def to_dict(self) -> dict[str, Any]:
        return {
            "s_dist": self.s_dist.tolist(),
            "channel": self.channel.tolist(),
            "u_size": self.u_size,
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any], u_size: int | None = None):
        unknown = set(data) - {"s_dist", "channel", "u_size"}
        if unknown:
            raise DomainError(f"unknown field(s) for DiscreteGpInstance: {sorted(unknown)}")
        if u_size is None:
            if "u_size" not in data:
                raise DomainError("u_size is missing")
            u_size = data["u_size"]
        return cls(np.array(data["s_dist"]), np.array(data["channel"]), u_size)

    @classmethod
    def from_json(cls, path, u_size: int | None = None):
        with open(path) as fh:
            return cls.from_dict(json.load(fh), u_size=u_size)


@dataclass(frozen=True, eq=False)
class GpStrategy:
    """``u_given_s[s][u] = p(u|s)`` and deterministic encoder ``x_map[u][s]``."""

    u_given_s: np.ndarray
    x_map: np.ndarray

    def __post_init__(self):
        u_given_s = _as_probabilities("u_given_s", self.u_given_s)
        x_map = np.asarray(self.x_map)
        if u_given_s.ndim != 2 or x_map.ndim != 2:
            raise DomainError("u_given_s and x_map must be 2-D")
        if x_map.shape != u_given_s.shape[::-1]:
            raise DomainError("x_map must have shape (|U|, |S|)")
        if not np.issubdtype(x_map.dtype, np.integer):
            if np.any(x_map != np.round(x_map)):
                raise DomainError("x_map entries must be integers")
            x_map = x_map.astype(np.int64)
        object.__setattr__(self, "u_given_s", u_given_s)
        object.__setattr__(self, "x_map", x_map)

    def to_dict(self) -> dict[str, Any]:
        return {"u_given_s": self.u_given_s.tolist(), "x_map": self.x_map.tolist()}


def _effective_channel(inst: DiscreteGpInstance, x_map: np.ndarray) -> np.ndarray:
    # W_eff[s, u, y] = W(y | x_map(u, s), s)
    n_s = inst.sizes[0]
    return inst.channel[np.arange(n_s)[None, :], x_map].transpose(1, 0, 2)


def _mi_bits(joint: np.ndarray) -> np.ndarray:
    """Mutual information of the last two axes of a (batched) joint pmf."""
    left = joint.sum(axis=-1, keepdims=True)
    right = joint.sum(axis=-2, keepdims=True)
    outer = left * right
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(joint > 0, joint * np.log2(joint / outer), 0.0)
    return terms.sum(axis=(-2, -1))


def _batched_rates(inst, w_eff, q):
    # q: (B, S, U)
    p_su = inst.s_dist[None, :, None] * q
    p_uy = np.einsum("bsu,suy->buy", p_su, w_eff)
    return _mi_bits(p_uy) - _mi_bits(p_su)


def gp_rate(inst: DiscreteGpInstance, strat: GpStrategy) -> float:
    """``I(U;Y) - I(U;S)`` in bits for a given strategy.

    The joint law is ``p(s) p(u|s) 1[x = x_map(u, s)] W(y|x, s)``.
    """
    n_s, n_x, _ = inst.sizes
    if strat.u_given_s.shape != (n_s, inst.u_size):
        raise DomainError(
            f"u_given_s must have shape {(n_s, inst.u_size)}, got {strat.u_given_s.shape}"
        )
    if strat.x_map.shape != (inst.u_size, n_s):
        raise DomainError(f"x_map must have shape {(inst.u_size, n_s)}")
    if np.any(strat.x_map < 0) or np.any(strat.x_map >= n_x):
        raise DomainError("x_map entries must index the input alphabet")
    w_eff = _effective_channel(inst, strat.x_map)
    return float(_batched_rates(inst, w_eff, strat.u_given_s[None])[0])


def simplex_grid(parts: int, levels: int) -> np.ndarray:
    """All probability vectors of length ``parts`` with entries in ``{0, 1/levels, ..., 1}``."""
    rows = [
        np.diff((-1,) + bars + (levels + parts - 1,)) - 1
        for bars in itertools.combinations(range(levels + parts - 1), parts - 1)
    ]
    return np.array(rows, dtype=float).reshape(-1, parts) / levels


def search_size(inst: DiscreteGpInstance, grid_levels: int) -> int:
    """Number of rate evaluations the exhaustive grid stage needs."""
    n_s, n_x, _ = inst.sizes
    rows = math.comb(grid_levels + inst.u_size - 1, inst.u_size - 1)
    return n_x ** (inst.u_size * n_s) * rows**n_s


def _grid_best(inst, x_map, rows):
    n_s = inst.sizes[0]
    w_eff = _effective_channel(inst, x_map)
    total = len(rows) ** n_s
    best_rate, best_idx = -math.inf, 0
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, total))
        digits = np.unravel_index(idx, (len(rows),) * n_s)
        q = np.stack([rows[d] for d in digits], axis=1)
        rates = _batched_rates(inst, w_eff, q)
        k = int(np.argmax(rates))
        if rates[k] > best_rate:
            best_rate, best_idx = float(rates[k]), int(idx[k])
    digits = np.unravel_index(best_idx, (len(rows),) * n_s)
    return best_rate, np.stack([rows[d] for d in digits])


def _refine(inst, strat, step, min_step=1e-10):
    """Pairwise mass-transfer coordinate ascent on ``p(u|s)``."""
    q = strat.u_given_s.copy()
    best = gp_rate(inst, strat)
    n_s, n_u = q.shape
    while step >= min_step:
        improved = False
        for s in range(n_s):
            for a, b in itertools.permutations(range(n_u), 2):
                delta = min(step, q[s, a])
                if delta <= 0:
                    continue
                trial = q.copy()
                trial[s, a] -= delta
                trial[s, b] += delta
                trial[s] /= trial[s].sum()
                rate = gp_rate(inst, GpStrategy(trial, strat.x_map))
                if rate > best:
                    q, best, improved = trial, rate, True
        if not improved:
            step /= 2
    return GpStrategy(q, strat.x_map)


def gp_capacity_bruteforce(
    inst: DiscreteGpInstance,
    grid_levels: int = 32,
    budget: int = DEFAULT_BUDGET,
    refine: bool = True,
) -> tuple[float, GpStrategy]:
    """Best Gelfand-Pinsker rate found by exhaustive search.

    Every deterministic ``x_map: U x S -> X`` is enumerated in lexicographic
    order. For each map, ``p(u|s)`` ranges over the product of simplex grids
    with ``grid_levels`` subdivisions per state. The best grid points of the
    leading maps are then polished by coordinate ascent. The result is a
    lower bound on the Gelfand-Pinsker value.

    Raises
    ------
    BudgetExceededError
        If the grid stage needs more than ``budget`` rate evaluations.
    """
    if int(grid_levels) != grid_levels or grid_levels < 2:
        raise DomainError(f"grid_levels must be an integer >= 2, got {grid_levels!r}")
    grid_levels = int(grid_levels)
    required = search_size(inst, grid_levels)
    if required > budget:
        raise BudgetExceededError(required, budget)

    n_s, n_x, _ = inst.sizes
    rows = simplex_grid(inst.u_size, grid_levels)
    candidates = []
    for order, flat in enumerate(itertools.product(range(n_x), repeat=inst.u_size * n_s)):
        x_map = np.array(flat, dtype=np.int64).reshape(inst.u_size, n_s)
        rate, q = _grid_best(inst, x_map, rows)
        candidates.append((rate, order, GpStrategy(q, x_map)))

    # highest rate first, then the lexicographically smallest map
    candidates.sort(key=lambda c: (-c[0], c[1]))
    best_rate, best_order, best = candidates[0]
    best_rate = gp_rate(inst, best)
    if refine:
        for _, order, strat in candidates[:_REFINE_MAPS]:
            polished = _refine(inst, strat, 0.5 / grid_levels)
            rate = gp_rate(inst, polished)
            if rate > best_rate or (rate == best_rate and order < best_order):
                best_rate, best_order, best = rate, order, polished
    return gp_rate(inst, best), best


def stuck_at_instance(p_defect: float, u_size: int = 2) -> DiscreteGpInstance:
    """Binary memory whose cells are stuck at 0 or 1 with probability ``p_defect / 2`` each.

    States are ordered ``(stuck0, stuck1, free)``.
    """
    if not 0.0 <= p_defect <= 1.0:
        raise DomainError(f"p_defect must lie in [0, 1], got {p_defect!r}")
    s_dist = [p_defect / 2, p_defect / 2, 1.0 - p_defect]
    channel = [
        [[1.0, 0.0], [1.0, 0.0]],
        [[0.0, 1.0], [0.0, 1.0]],
        [[1.0, 0.0], [0.0, 1.0]],
    ]
    return DiscreteGpInstance(np.array(s_dist), np.array(channel), u_size)
