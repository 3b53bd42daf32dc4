"""Scalar information-theoretic helpers.

All quantities are in bits. Infinite values are returned as ``math.inf``
rather than raised.
"""

import math

from .errors import DomainError

_INV_TOL = 1e-12
_INV_MAX_ITER = 200


def _check_probability(q, name="q"):
    if not (0.0 <= q <= 1.0):
        raise DomainError(f"{name}={q!r} is not a probability")


def binary_entropy(q):
    """Entropy of a Bernoulli(q) variable in bits, with 0 log 0 = 0."""
    _check_probability(q)
    if q == 0.0 or q == 1.0:
        return 0.0
    return -q * math.log2(q) - (1.0 - q) * math.log2(1.0 - q)


def binary_entropy_inverse(h):
    """Return the unique q in [0, 0.5] with ``binary_entropy(q) == h``.

    Uses bisection, which stays reliable near q = 0.5 where the entropy
    curve is flat.

    Raises:
        DomainError: if h is outside [0, 1].
    """
    if not (0.0 <= h <= 1.0):
        raise DomainError(f"h={h!r} outside [0, 1]")
    if h == 0.0:
        return 0.0
    if h == 1.0:
        return 0.5
    lo, hi = 0.0, 0.5
    for _ in range(_INV_MAX_ITER):
        mid = 0.5 * (lo + hi)
        if binary_entropy(mid) < h:
            lo = mid
        else:
            hi = mid
        if hi - lo <= _INV_TOL * 1e-3:
            break
    return 0.5 * (lo + hi)


def dsbc_mutual_information(q):
    """I(X;Y) across a doubly symmetric binary channel with crossover q."""
    if not (0.0 <= q <= 0.5):
        raise DomainError(f"crossover q={q!r} outside [0, 0.5]")
    return 1.0 - binary_entropy(q)


class Correlation(float):
    """A correlation that also remembers ``1 - rho^2`` exactly.

    Near rho = 1 the complement cannot be recovered from the float value, so
    :func:`complexity_to_rho` attaches it for a lossless round trip.
    """

    complement: float

    def __new__(cls, value, complement):
        obj = super().__new__(cls, value)
        obj.complement = complement
        return obj


def gaussian_mi_from_correlation(rho):
    """Mutual information of a jointly Gaussian pair with correlation rho."""
    if abs(rho) > 1.0 or math.isnan(rho):
        raise DomainError(f"correlation {rho!r} outside [-1, 1]")
    comp = getattr(rho, "complement", None)
    if comp is None:
        comp = 1.0 - rho * rho
    if comp <= 0.0:
        return math.inf
    return -0.5 * math.log2(comp)


def complexity_to_rho(theta_c):
    """Correlation achieved by a Gaussian encoder spending theta_c bits.

    Inverse of :func:`gaussian_mi_from_correlation` on [0, inf].
    """
    if math.isnan(theta_c) or theta_c < 0.0:
        raise DomainError(f"complexity budget {theta_c!r} must be >= 0")
    if math.isinf(theta_c):
        return 1.0
    # -expm1 keeps precision for small theta_c
    rho = math.sqrt(-math.expm1(-2.0 * theta_c * math.log(2.0)))
    return Correlation(rho, 2.0 ** (-2.0 * theta_c))


def wasserstein2_gaussian_scalar(sigma_a, sigma_b):
    """Squared 2-Wasserstein distance between N(0, sigma_a^2) and N(0, sigma_b^2)."""
    if sigma_a < 0.0 or sigma_b < 0.0:
        raise DomainError("standard deviations must be non-negative")
    return (sigma_a - sigma_b) ** 2


def kl_binary(p, q):
    """KL divergence D(Bern(p) || Bern(q)) in bits.

    Returns ``math.inf`` when q puts zero mass where p does not.
    """
    _check_probability(p, "p")
    _check_probability(q, "q")
    total = 0.0
    for a, b in ((p, q), (1.0 - p, 1.0 - q)):
        if a == 0.0:
            continue
        if b == 0.0:
            return math.inf
        total += a * math.log2(a / b)
    return max(total, 0.0)
