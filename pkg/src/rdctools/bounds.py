"""Monte-Carlo estimators of the variational RDC loss bounds.

Every estimator consumes per-sample log-density values produced elsewhere
(a trained encoder, an analytic fixture, ...) and returns an
:class:`~rdctools.records.McEstimate` in bits. Nothing here trains a model.

Log-densities are natural logarithms unless ``log_base`` says otherwise.
"""

import math
from dataclasses import dataclass, fields
from typing import Optional

import numpy as np

from .errors import DomainError
from .records import McEstimate

FIELDS = ("log_p_u_given_x", "log_t_u", "log_p_shat_given_u", "log_r_shat",
          "log_q_s_given_shat")


@dataclass(frozen=True)
class SampleLogDensities:
    """Per-sample log-densities, aligned by index. Absent fields are ``None``."""

    log_p_u_given_x: Optional[np.ndarray] = None
    log_t_u: Optional[np.ndarray] = None
    log_p_shat_given_u: Optional[np.ndarray] = None
    log_r_shat: Optional[np.ndarray] = None
    log_q_s_given_shat: Optional[np.ndarray] = None
    log_base: float = math.e

    def __post_init__(self):
        n = None
        for f in FIELDS:
            v = getattr(self, f)
            if v is None:
                continue
            arr = np.asarray(v, dtype=float)
            if arr.ndim != 1:
                raise DomainError(f"{f} must be one-dimensional")
            if not np.all(np.isfinite(arr)):
                raise DomainError(f"{f} contains non-finite entries")
            if n is not None and arr.size != n:
                raise DomainError("all supplied log-density lists must have equal length")
            n = arr.size
            object.__setattr__(self, f, arr)
        if not (self.log_base > 0 and self.log_base != 1):
            raise DomainError(f"invalid log base {self.log_base!r}")

    @classmethod
    def from_mapping(cls, data):
        """Build from a dict such as a parsed JSON document."""
        unknown = set(data) - set(FIELDS) - {"log_base"}
        if unknown:
            raise DomainError(f"unknown fields: {sorted(unknown)}")
        base = data.get("log_base", math.e)
        if base in ("e", "nat", "nats"):
            base = math.e
        elif base in ("2", "bit", "bits"):
            base = 2.0
        return cls(**{f: data.get(f) for f in FIELDS}, log_base=float(base))

    def bits(self, name):
        v = getattr(self, name)
        if v is None:
            raise DomainError(f"missing required field {name!r}")
        return v * math.log2(self.log_base)


@dataclass(frozen=True)
class LossWeights:
    lambda_c: float = 0.0
    lambda_d: float = 0.0
    lambda_p: float = 0.0

    def __post_init__(self):
        for f in fields(self):
            if getattr(self, f.name) < 0:
                raise DomainError(f"{f.name} must be non-negative")


def _estimate(values):
    values = np.asarray(values, dtype=float)
    n = values.size
    if n == 0:
        raise DomainError("no samples supplied")
    mean = float(np.mean(values))
    se = float(np.std(values, ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    return McEstimate(mean, se, n)


def complexity_upper_bound(samples):
    """Upper-bound estimate of I(X;U): mean of log p(u|x) - log t(u)."""
    return _estimate(samples.bits("log_p_u_given_x") - samples.bits("log_t_u"))


def rate_upper_bound(samples):
    """Upper-bound estimate of I(U;S_hat): mean of log p(s_hat|u) - log r(s_hat)."""
    return _estimate(samples.bits("log_p_shat_given_u") - samples.bits("log_r_shat"))


def distortion_lower_bound(samples, entropy_s=0.0):
    """Lower-bound estimate of I(S_hat;S): mean of log q(s|s_hat) plus H(S).

    With the default ``entropy_s=0`` only the expectation term is returned.
    """
    est = _estimate(samples.bits("log_q_s_given_shat"))
    return McEstimate(est.mean + entropy_s, est.stderr, est.n)


def loss_classification(samples, w):
    """Sample estimate of rate + lambda_c*complexity - lambda_d*E[log q(s|s_hat)].

    The per-sample combination is averaged, so the standard error accounts
    for correlation between the three terms.
    """
    per_sample = (
        samples.bits("log_p_shat_given_u") - samples.bits("log_r_shat")
        + w.lambda_c * (samples.bits("log_p_u_given_x") - samples.bits("log_t_u"))
        - w.lambda_d * samples.bits("log_q_s_given_shat"))
    return _estimate(per_sample)


def loss_generation(mse, w2, complexity_upper, w):
    """mse + lambda_p*w2 + lambda_c*complexity_upper.

    ``w2`` is the caller's Wasserstein estimate (e.g. from a trained critic).
    """
    if mse < 0 or w2 < 0:
        raise DomainError("mse and w2 must be non-negative")
    return mse + w.lambda_p * w2 + w.lambda_c * complexity_upper


def loss_video(rate_upper, mse, complexity_upper, w):
    """rate_upper + lambda_d*mse + lambda_c*complexity_upper."""
    if mse < 0:
        raise DomainError("mse must be non-negative")
    if rate_upper < 0 or complexity_upper < 0:
        raise DomainError("rate and complexity bounds must be non-negative")
    return rate_upper + w.lambda_d * mse + w.lambda_c * complexity_upper
