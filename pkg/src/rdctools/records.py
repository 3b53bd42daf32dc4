"""Plain result containers shared by the evaluators, oracles and CLI."""

from dataclasses import dataclass, field
from typing import Optional


@dataclass(frozen=True)
class RdcPoint:
    """One evaluated point of a rate-distortion-complexity function.

    ``theta_d`` is ``None`` for binary sources, whose evaluator has no
    Hamming-distortion argument. ``rate`` is ``None`` for infeasible points.
    """

    theta_d: Optional[float]
    theta_p: float
    theta_c: float
    rate: Optional[float]
    branch: str
    oracle_rate: Optional[float] = None
    oracle_gap: Optional[float] = None
    warnings: tuple = field(default=(), compare=False)


@dataclass(frozen=True)
class McEstimate:
    """Monte-Carlo sample mean with its standard error.

    ``seed`` is ``None`` when the samples were supplied by the caller.
    """

    mean: float
    stderr: float
    n: int
    seed: Optional[int] = None
