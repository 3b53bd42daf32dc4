"""Rate-distortion-complexity functions for Gaussian and binary semantic sources."""

from .binary import (BinaryProblem, CascadeCrossovers, binary_crossovers,
                     binary_ib_generalization, binary_rdc, binary_semantic_distance, cascade2,
                     cascade3)
from .bounds import (LossWeights, SampleLogDensities, complexity_upper_bound,
                     distortion_lower_bound, loss_classification, loss_generation, loss_video,
                     rate_upper_bound)
from .errors import ConfigError, DomainError, InfeasibleError, InvalidChannelError
from .gaussian import (Branch, GaussianDerived, GaussianProblem, GaussianTestChannel,
                       chain_effective_covariances, distortion_transfer, gaussian_branch,
                       gaussian_indirect_rd, gaussian_rate, gaussian_rdc, gaussian_rdp_reduction)
from .infomath import (binary_entropy, binary_entropy_inverse, complexity_to_rho,
                       dsbc_mutual_information, gaussian_mi_from_correlation, kl_binary,
                       wasserstein2_gaussian_scalar)
from .records import McEstimate, RdcPoint

__version__ = "0.1.0"
