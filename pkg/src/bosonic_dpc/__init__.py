"""Dirty-paper coding rates for bosonic and Gaussian channels with
interference known at the transmitter."""

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
from .entropy import PhotonNumber, thermal_entropy
from .errors import (
    BudgetExceededError,
    DegenerateInstanceError,
    DomainError,
    DpcError,
    EstimationError,
    RateDomainError,
)
from .gp_oracle import DiscreteGpInstance, GpStrategy, gp_capacity_bruteforce, gp_rate
from .mcsim import McConfig, ModuloDemoConfig, estimate_costa_rate, modulo_dpc_demo
from .optimizer import RatePoint, SweepResult, maximize_over_t, sweep_t
from .rates import (
    amplifier_dpc_rate,
    conditional_interference_variance,
    costa_rate,
    heterodyne_capacity,
    homodyne_capacity,
    joint_dpc_rate,
    mmse_coefficient,
)

__version__ = "0.1.0"
