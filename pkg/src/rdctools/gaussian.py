"""Closed-form RDC function of a unit-variance Gaussian semantic source.

The source S ~ N(0, 1) is observed through ``S = g X + sqrt(1-g^2) Z1`` and
the encoder output obeys ``X = r U + sqrt(1-r^2) Z2`` with ``r`` fixed by the
complexity budget. Distortion is MSE and the semantic distance is the squared
2-Wasserstein distance between the marginals of S and its reconstruction.
"""

import math
from dataclasses import dataclass
from enum import Enum

from .errors import DomainError, InfeasibleError
from .infomath import complexity_to_rho
from .records import RdcPoint


class Branch(str, Enum):
    COMPLEXITY_LIMITED = "ComplexityLimited"
    PERCEPTION_ACTIVE = "PerceptionActive"
    ZERO_RATE = "ZeroRate"


@dataclass(frozen=True)
class GaussianProblem:
    """Budgets for one Gaussian RDC evaluation.

    Args:
        gamma: correlation between source and observation, in (0, 1].
        theta_d: MSE budget.
        theta_p: squared-Wasserstein budget, in [0, 1].
        theta_c: complexity budget in bits; ``math.inf`` means unconstrained.
    """

    gamma: float
    theta_d: float
    theta_p: float
    theta_c: float

    def __post_init__(self):
        if not (0.0 < self.gamma <= 1.0):
            raise DomainError(f"gamma={self.gamma!r} outside (0, 1]")
        if math.isnan(self.theta_d) or self.theta_d < 0.0:
            raise DomainError(f"theta_d={self.theta_d!r} must be >= 0")
        if not (0.0 <= self.theta_p <= 1.0):
            raise DomainError(
                f"theta_p={self.theta_p!r} outside [0, 1]; pass 1 for an inactive "
                "perception constraint")
        if math.isnan(self.theta_c) or self.theta_c < 0.0:
            raise DomainError(f"theta_c={self.theta_c!r} must be >= 0")

    def derived(self):
        return derive(self.gamma, self.theta_p, self.theta_c)


@dataclass(frozen=True)
class GaussianDerived:
    rho: float
    sigma: float
    theta1: float
    theta2: float
    theta3: float
    rho_gamma: float


@dataclass(frozen=True)
class GaussianTestChannel:
    """Jointly Gaussian reconstruction: Cov(U, S_hat) = kappa, Var(S_hat) = sigma^2."""

    kappa: float
    sigma: float


def derive(gamma, theta_p, theta_c):
    """Branch thresholds for the given source correlation and budgets."""
    rho = complexity_to_rho(theta_c)
    sigma = 1.0 - math.sqrt(theta_p)
    g = gamma * rho
    s2 = sigma * sigma
    return GaussianDerived(
        rho=rho,
        sigma=sigma,
        theta1=(1.0 - g) * (1.0 + s2),
        theta2=1.0 + s2 - 2.0 * g * s2,
        theta3=1.0 + s2,
        rho_gamma=g,
    )


def _branch_of(theta_d, d):
    if theta_d >= d.theta3:
        return Branch.ZERO_RATE
    if d.rho_gamma == 0.0 or theta_d < d.theta1:
        raise InfeasibleError(
            f"theta_d={theta_d!r} is below the feasibility floor {d.theta1!r}", d.theta1)
    if theta_d < d.theta2:
        return Branch.COMPLEXITY_LIMITED
    return Branch.PERCEPTION_ACTIVE


def gaussian_branch(problem):
    """Which of the three closed-form cases applies to ``problem``.

    Raises:
        InfeasibleError: if theta_d is below the floor theta1 (or, with zero
            complexity, below theta3).
    """
    return _branch_of(problem.theta_d, problem.derived())


def _neg_half_log2(x):
    if x <= 0.0:
        return math.inf
    return max(-0.5 * math.log2(x), 0.0)


def _complexity_limited_rate(theta_d, g, sigma):
    theta_u = theta_d / g - (1.0 - g) / g * (1.0 + sigma * sigma)
    return _neg_half_log2(theta_u)


def gaussian_rate(gamma, theta_d, theta_p, theta_c):
    """Rate in bits and branch label for scalar budgets.

    Same as :func:`gaussian_rdc` but returns a ``(rate, Branch)`` tuple.
    """
    d = derive(gamma, theta_p, theta_c)
    branch = _branch_of(theta_d, d)
    g, s = d.rho_gamma, d.sigma
    if branch is Branch.ZERO_RATE:
        return 0.0, branch
    if branch is Branch.COMPLEXITY_LIMITED:
        return _complexity_limited_rate(theta_d, g, s), branch
    c = (1.0 + s * s - theta_d) / (2.0 * g * s)
    return _neg_half_log2(1.0 - c * c), branch


def gaussian_rdc(problem):
    """Evaluate the Gaussian RDC function.

    Returns:
        RdcPoint with the rate in bits and the active branch label.

    Raises:
        InfeasibleError: theta_d below the distortion floor; ``err.floor``
            carries that floor.
    """
    rate, branch = gaussian_rate(problem.gamma, problem.theta_d, problem.theta_p,
                                 problem.theta_c)
    return RdcPoint(theta_d=problem.theta_d, theta_p=problem.theta_p,
                    theta_c=problem.theta_c, rate=rate, branch=branch.value)


def gaussian_rdp_reduction(theta_d, theta_p):
    """Rate-distortion-perception function of a directly observed N(0, 1) source.

    Written from the three-case formula for full complexity and direct
    observation, independently of :func:`gaussian_rate`.
    """
    if not (0.0 <= theta_p <= 1.0):
        raise DomainError(f"theta_p={theta_p!r} outside [0, 1]")
    if theta_d < 0.0:
        raise DomainError(f"theta_d={theta_d!r} must be >= 0")
    sigma = 1.0 - math.sqrt(theta_p)
    lower = 1.0 - sigma ** 2
    upper = 1.0 + sigma ** 2
    if theta_d >= upper:
        return 0.0
    if theta_d < lower:
        return math.inf if theta_d == 0.0 else 0.5 * math.log2(1.0 / theta_d)
    ratio = (upper - theta_d) / (2.0 * sigma)
    return 0.5 * math.log2(1.0 / (1.0 - ratio ** 2))


def gaussian_indirect_rd(theta_d, gamma, theta_c):
    """Indirect rate-distortion function with effective correlation gamma*rho.

    Valid for ``1 - gamma*rho <= theta_d <= 1`` (inactive perception budget).
    Equals ``0.5*log2(g / (theta_d + g - 1))`` with ``g = gamma*rho``.
    """
    g = gamma * complexity_to_rho(theta_c)
    if not (1.0 - g <= theta_d <= 1.0):
        raise DomainError(f"theta_d={theta_d!r} outside [{1.0 - g!r}, 1]")
    if theta_d == 1.0:
        return 0.0
    # shares the arithmetic of the closed form so both agree to the last bit
    return _complexity_limited_rate(theta_d, g, 0.0)


def chain_effective_covariances(gamma, rho, kappa):
    """Covariances implied by the S -> X -> U -> S_hat chain.

    Returns:
        dict with keys ``cov_SX``, ``cov_SU``, ``cov_SShat`` and ``cov_XShat``.
    """
    if not (0.0 < gamma <= 1.0 and 0.0 < rho <= 1.0):
        raise DomainError("gamma and rho must lie in (0, 1]")
    return {
        "cov_SX": gamma,
        "cov_SU": gamma * rho,
        "cov_SShat": gamma * rho * kappa,
        "cov_XShat": rho * kappa,
    }


def covariance_matrix(gamma, rho, kappa, sigma):
    """Full 4x4 covariance of (S, X, U, S_hat)."""
    c = chain_effective_covariances(gamma, rho, kappa)
    return [
        [1.0, gamma, gamma * rho, c["cov_SShat"]],
        [gamma, 1.0, rho, c["cov_XShat"]],
        [gamma * rho, rho, 1.0, kappa],
        [c["cov_SShat"], c["cov_XShat"], kappa, sigma * sigma],
    ]


def kappa_for_distortion(d_s, gamma, rho, sigma):
    """Covariance between U and S_hat that yields MSE ``d_s`` on S."""
    g = gamma * rho
    if g == 0.0:
        raise DomainError("degenerate chain: gamma*rho == 0")
    return (1.0 + sigma * sigma - d_s) / (2.0 * g)


def distortion_transfer(theta_d, gamma, rho, sigma):
    """MSE budget on U equivalent to the budget ``theta_d`` on S."""
    g = gamma * rho
    if g == 0.0:
        raise DomainError("degenerate chain: gamma*rho == 0 leaves the transfer undefined")
    return theta_d / g - (1.0 - g) * (1.0 + sigma * sigma) / g
