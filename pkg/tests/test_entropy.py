import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bosonic_dpc.entropy import PhotonNumber, thermal_entropy, thermal_entropy_derivative, xlog2x
from bosonic_dpc.errors import DomainError

photons = st.floats(min_value=0.0, max_value=1e6, allow_nan=False)


def test_reference_values():
    assert thermal_entropy(0) == 0.0
    assert thermal_entropy(1) == pytest.approx(2.0, abs=1e-12)
    assert thermal_entropy(2) == pytest.approx(3 * math.log2(3) - 2, abs=1e-12)
    assert thermal_entropy(2) == pytest.approx(2.7549, abs=1e-4)


@pytest.mark.parametrize("bad", [-1e-9, -1.0, float("nan"), float("inf")])
def test_rejects_invalid(bad):
    with pytest.raises(DomainError):
        thermal_entropy(bad)
    with pytest.raises(DomainError):
        PhotonNumber(bad)


def test_domain_error_is_value_error():
    with pytest.raises(ValueError):
        thermal_entropy(-2)


def test_matches_textbook_form():
    for n in (1e-9, 0.01, 0.5, 3.0, 17.25, 400.0):
        textbook = (n + 1) * math.log2(n + 1) - n * math.log2(n)
        assert thermal_entropy(n) == pytest.approx(textbook, rel=1e-12, abs=1e-13)


def test_large_argument_asymptotics():
    # g(n) = log2(e (n + 1/2)) + O(1/n^2)
    n = 1e8
    assert thermal_entropy(n) == pytest.approx(math.log2(math.e * (n + 0.5)), abs=1e-12)


def test_small_argument_continuity():
    assert thermal_entropy(1e-12) < 1e-9
    assert thermal_entropy(1e-320) == 0.0
    assert xlog2x(0.0) == 0.0


def test_finite_difference_derivative():
    h = 1e-6
    fd = (thermal_entropy(1 + h) - thermal_entropy(1 - h)) / (2 * h)
    assert fd == pytest.approx(1.0, abs=1e-6)
    assert thermal_entropy_derivative(1.0) == 1.0


@given(photons, photons)
def test_monotone(a, b):
    if a == b:
        return
    a, b = min(a, b), max(a, b)
    # strict growth is only resolvable above float spacing
    if b - a > 1e-9 * max(1.0, b):
        assert thermal_entropy(a) < thermal_entropy(b)
    else:
        assert thermal_entropy(a) <= thermal_entropy(b) + 1e-12


@given(photons, photons, st.floats(min_value=0.0, max_value=1.0))
def test_concave(a, b, lam):
    mixed = thermal_entropy(lam * a + (1 - lam) * b)
    chord = lam * thermal_entropy(a) + (1 - lam) * thermal_entropy(b)
    assert mixed >= chord - 1e-12
