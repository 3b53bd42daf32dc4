"""Independent verification engines for the closed-form RDC evaluators."""

from .binary import binary_grid_oracle, is_symmetric
from .discrete import DiscreteJoint, discrete_mutual_information, expected_posterior_kl
from .gaussian import gaussian_exact_family_rate, gaussian_parametric_oracle
from .montecarlo import RNG_ALGORITHM, simulate_binary_chain, simulate_gaussian_chain
from .results import ChannelParams4, OracleResult

__all__ = [
    "ChannelParams4",
    "DiscreteJoint",
    "OracleResult",
    "RNG_ALGORITHM",
    "binary_grid_oracle",
    "discrete_mutual_information",
    "expected_posterior_kl",
    "gaussian_exact_family_rate",
    "gaussian_parametric_oracle",
    "is_symmetric",
    "simulate_binary_chain",
    "simulate_gaussian_chain",
]
