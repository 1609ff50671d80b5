import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bosonic_dpc.errors import BudgetExceededError, DomainError
from bosonic_dpc.gp_oracle import (
    DiscreteGpInstance,
    GpStrategy,
    gp_capacity_bruteforce,
    gp_rate,
    search_size,
    simplex_grid,
    stuck_at_instance,
)

NOISELESS = DiscreteGpInstance(
    np.array([0.5, 0.5]), np.array([[[1, 0], [0, 1]], [[1, 0], [0, 1]]], float), 2
)
USELESS = DiscreteGpInstance(
    np.array([0.3, 0.7]), np.array([[[0.2, 0.8], [0.2, 0.8]], [[0.6, 0.4], [0.6, 0.4]]]), 2
)


def plain_mi(px, w):
    joint = px[:, None] * w
    py = joint.sum(axis=0)
    mask = joint > 0
    return float(np.sum(joint[mask] * np.log2(joint[mask] / np.outer(px, py)[mask])))


def blahut_arimoto(w, iters=2000):
    """Capacity of a DMC w[x, y] in bits."""
    px = np.full(w.shape[0], 1.0 / w.shape[0])
    for _ in range(iters):
        py = px @ w
        with np.errstate(divide="ignore", invalid="ignore"):
            d = np.where(w > 0, w * np.log(w / py), 0.0).sum(axis=1)
        px = px * np.exp(d)
        px /= px.sum()
    return plain_mi(px, w)


def random_instance(seed, sizes=(2, 2, 2), u_size=2):
    rng = np.random.default_rng(seed)
    n_s, n_x, n_y = sizes
    return DiscreteGpInstance(
        rng.dirichlet(np.ones(n_s)), rng.dirichlet(0.7 * np.ones(n_y), size=(n_s, n_x)), u_size
    )


def test_no_side_information_reduces_to_plain_mi():
    w = np.array([[0.9, 0.1], [0.25, 0.75]])
    inst = DiscreteGpInstance(np.array([0.4, 0.6]), np.stack([w, w]), 2)
    px = np.array([0.35, 0.65])
    strat = GpStrategy(np.stack([px, px]), np.array([[0, 0], [1, 1]]))
    assert gp_rate(inst, strat) == pytest.approx(plain_mi(px, w), abs=1e-14)


def test_state_blind_strategy_has_zero_leakage():
    inst = random_instance(3)
    q = np.array([0.3, 0.7])
    strat = GpStrategy(np.stack([q, q]), np.array([[1, 1], [0, 0]]))
    # rows ordered by u: x_map sends u=0 to x=1 and u=1 to x=0
    w_avg = np.einsum("s,sxy->xy", inst.s_dist, inst.channel)[[1, 0]]
    assert gp_rate(inst, strat) == pytest.approx(plain_mi(q, w_avg), abs=1e-14)


def test_stuck_at_known_strategy():
    p_defect = 0.3
    inst = stuck_at_instance(p_defect)
    strat = GpStrategy(
        np.array([[1.0, 0.0], [0.0, 1.0], [0.5, 0.5]]), np.array([[0, 0, 0], [1, 1, 1]])
    )
    assert gp_rate(inst, strat) == pytest.approx(1 - p_defect, abs=1e-14)


def test_noiseless_capacity():
    best, strat = gp_capacity_bruteforce(NOISELESS, 8)
    assert best == pytest.approx(1.0, abs=1e-12)
    assert gp_rate(NOISELESS, strat) == best


def test_useless_channel():
    best, _ = gp_capacity_bruteforce(USELESS, 8)
    assert best == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("p_defect", [0.3, 0.5])
def test_stuck_at_bruteforce(p_defect):
    best, strat = gp_capacity_bruteforce(stuck_at_instance(p_defect), 32)
    assert abs(best - (1 - p_defect)) < 0.02
    assert gp_rate(stuck_at_instance(p_defect), strat) == best


def test_stuck_at_converges_with_grid():
    inst = stuck_at_instance(0.3)
    coarse = gp_capacity_bruteforce(inst, 4, refine=False)[0]
    fine = gp_capacity_bruteforce(inst, 32, refine=False)[0]
    assert coarse <= fine
    assert fine == pytest.approx(0.7, abs=1e-9)


@pytest.mark.parametrize("seed", range(4))
def test_beats_ignoring_csi(seed):
    inst = random_instance(seed)
    averaged = np.einsum("s,sxy->xy", inst.s_dist, inst.channel)
    best, _ = gp_capacity_bruteforce(inst, 16)
    assert best >= blahut_arimoto(averaged) - 1e-6


@pytest.mark.parametrize("seed", range(3))
def test_grid_monotone(seed):
    inst = random_instance(seed + 10)
    raw = [gp_capacity_bruteforce(inst, lv, refine=False)[0] for lv in (2, 4, 8, 16)]
    assert all(b >= a for a, b in zip(raw, raw[1:]))
    polished = [gp_capacity_bruteforce(inst, lv)[0] for lv in (2, 4, 8, 16)]
    assert all(b >= a - 1e-12 for a, b in zip(polished, polished[1:]))


def test_exact_recomputation_and_determinism():
    inst = random_instance(21, sizes=(2, 3, 2), u_size=3)
    best, strat = gp_capacity_bruteforce(inst, 6)
    assert gp_rate(inst, strat) == best
    again, strat2 = gp_capacity_bruteforce(inst, 6)
    assert again == best
    assert np.array_equal(strat.x_map, strat2.x_map)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 3))
def test_entropy_bounds(seed, u_size):
    rng = np.random.default_rng(seed)
    inst = random_instance(seed, sizes=(3, 2, 3), u_size=u_size)
    strat = GpStrategy(
        rng.dirichlet(np.ones(u_size), size=3), rng.integers(0, 2, size=(u_size, 3))
    )
    rate = gp_rate(inst, strat)
    assert rate <= math.log2(u_size) + 1e-12
    assert rate >= -math.log2(3) - 1e-12


def test_simplex_grid():
    grid = simplex_grid(3, 4)
    assert grid.shape == (math.comb(6, 2), 3)
    assert np.allclose(grid.sum(axis=1), 1.0)
    assert len({tuple(r) for r in grid}) == len(grid)
    # coarse grid contained in the doubled one
    fine = {tuple(r) for r in simplex_grid(3, 8)}
    assert all(tuple(r) in fine for r in grid)


def test_budget():
    inst = stuck_at_instance(0.3, u_size=3)
    need = search_size(inst, 32)
    with pytest.raises(BudgetExceededError) as info:
        gp_capacity_bruteforce(inst, 32, budget=1000)
    assert info.value.required == need
    assert str(need) in str(info.value)


def test_validation():
    with pytest.raises(DomainError):
        DiscreteGpInstance(np.array([0.5, 0.6]), NOISELESS.channel, 2)
    with pytest.raises(DomainError):
        DiscreteGpInstance(np.array([1.0]), np.array([[[0.5, 0.6]]]), 1)
    with pytest.raises(DomainError):
        DiscreteGpInstance(np.ones(5) / 5, np.ones((5, 2, 2)) / 2, 2)
    with pytest.raises(DomainError):
        DiscreteGpInstance(np.array([1.0]), np.array([[[1.0, 0.0], [0.0, 1.0]]]), 4)
    with pytest.raises(DomainError):
        gp_rate(NOISELESS, GpStrategy(np.ones((2, 3)) / 3, np.zeros((3, 2), int)))
    with pytest.raises(DomainError):
        gp_capacity_bruteforce(NOISELESS, 1)


def test_json_round_trip(tmp_path):
    path = tmp_path / "inst.json"
    path.write_text(json.dumps(stuck_at_instance(0.3).to_dict()))
    inst = DiscreteGpInstance.from_json(path)
    assert inst.sizes == (3, 2, 2) and inst.u_size == 2
    assert DiscreteGpInstance.from_json(path, u_size=3).u_size == 3
    with pytest.raises(DomainError):
        DiscreteGpInstance.from_dict({**inst.to_dict(), "extra": 0})
