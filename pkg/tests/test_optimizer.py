import math

import numpy as np
import pytest

from bosonic_dpc.channels import ClassicalDpcInstance, LossyChannelParams, SignalParams
from bosonic_dpc.errors import DomainError, RateDomainError
from bosonic_dpc.optimizer import (
    COARSE_GRID_POINTS,
    golden_section_max,
    maximize_over_t,
    sweep_t,
)
from bosonic_dpc.rates import costa_rate, joint_dpc_rate, mmse_coefficient


def example_curve(t):
    return joint_dpc_rate(LossyChannelParams(0.5, 0.0), SignalParams(2.0, 2.0), t)


def test_golden_section_quadratic():
    t, v = golden_section_max(lambda t: -(t - 0.3) ** 2, 0.0, 1.0, 1e-10)
    assert t == pytest.approx(0.3, abs=1e-8)
    assert v == pytest.approx(0.0, abs=1e-15)


def test_maximize_quadratic():
    t, _ = maximize_over_t(lambda t: -(t - 0.3) ** 2, 0.0, 1.0, tol=1e-8)
    assert t == pytest.approx(0.3, abs=1e-7)


def test_maximize_pure_loss_example():
    t, r = maximize_over_t(example_curve, 0.0, 1.0, tol=1e-6)
    assert t == pytest.approx(0.8065, abs=1e-3)
    assert r == pytest.approx(1.8750, abs=1e-4)


def test_stationary_at_interior_optimum():
    t, _ = maximize_over_t(example_curve)
    h = 1e-5
    slope = (example_curve(t + h) - example_curve(t - h)) / (2 * h)
    assert abs(slope) < 1e-4


def test_never_worse_than_coarse_grid():
    def bumpy(t):
        return math.sin(25 * t) + 0.3 * t

    _, r = maximize_over_t(bumpy, 0.0, 1.0)
    grid = np.linspace(0, 1, COARSE_GRID_POINTS)
    assert r >= max(bumpy(t) for t in grid)


def test_endpoint_maximum():
    t, r = maximize_over_t(lambda t: t, 0.0, 1.0, tol=1e-9)
    assert t == 1.0 and r == 1.0
    t, r = maximize_over_t(lambda t: -t, 0.0, 1.0)
    assert t == 0.0 and r == 0.0


def test_deterministic():
    assert maximize_over_t(example_curve) == maximize_over_t(example_curve)


def test_custom_domain():
    t, _ = maximize_over_t(lambda t: -(t - 1.7) ** 2, -1.0, 3.0)
    assert t == pytest.approx(1.7, abs=1e-8)


def test_sweep_constant_ties_to_lo():
    res = sweep_t(lambda t: 4.2, 0.2, 0.9, 8)
    assert res.max_rate == 4.2
    assert res.argmax_t == 0.2
    assert len(res.points) == 8


def test_sweep_grid_layout():
    res = sweep_t(lambda t: t * (1 - t), 0.0, 1.0, 11)
    assert res.ts[0] == 0.0 and res.ts[-1] == 1.0
    assert np.all(np.diff(res.ts) > 0)
    assert res.grid_step == pytest.approx(0.1)
    assert res.max_rate >= res.rates.max()


def test_sweep_pure_loss_example():
    res = sweep_t(example_curve, 0.0, 1.0, 1001)
    assert res.argmax_t == pytest.approx(0.8065, abs=5e-4)
    assert res.max_rate == pytest.approx(1.8750, abs=5e-4)


def test_sweep_costa_recovers_mmse():
    inst = ClassicalDpcInstance(1.0, 1.0, 0.25)
    res = sweep_t(lambda t: costa_rate(inst, t), 0.0, 1.0, 1001)
    assert res.argmax_t == pytest.approx(mmse_coefficient(1.0, 0.25), abs=1e-6)


def test_domain_error_carries_t():
    def fails_late(t):
        if t > 0.5:
            raise DomainError("boom")
        return t

    with pytest.raises(RateDomainError) as info:
        sweep_t(fails_late, 0.0, 1.0, 5)
    assert info.value.t == 0.75


@pytest.mark.parametrize("lo, hi, steps", [(1.0, 0.0, 10), (0.0, 1.0, 1), (0.0, math.inf, 3)])
def test_sweep_rejects_bad_grid(lo, hi, steps):
    with pytest.raises(DomainError):
        sweep_t(lambda t: t, lo, hi, steps)


def test_rejects_bad_tol():
    with pytest.raises(DomainError):
        maximize_over_t(lambda t: t, 0, 1, tol=0)
