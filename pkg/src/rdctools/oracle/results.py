from dataclasses import dataclass
from typing import Any, Optional


@dataclass(frozen=True)
class ChannelParams4:
    """Asymmetric binary encoder/decoder pair.

    p0 = P(U=1|X=0), p1 = P(U=0|X=1), q0 = P(S_hat=1|U=0), q1 = P(S_hat=0|U=1).
    """

    p0: float
    p1: float
    q0: float
    q1: float

    def __post_init__(self):
        for name in ("p0", "p1", "q0", "q1"):
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0):
                raise ValueError(f"{name}={v!r} is not a probability")


@dataclass(frozen=True)
class OracleResult:
    """Outcome of a brute-force search.

    ``gap_to_closed_form`` is oracle minus closed form; ``None`` when either
    side is infeasible. ``ambiguous`` marks Gaussian points in the regime where
    the closed form's complexity-limited case is known to disagree with the
    jointly Gaussian test-channel family.
    """

    min_rate: Optional[float]
    argmin: Any
    feasible: bool
    gap_to_closed_form: Optional[float] = None
    closed_form_rate: Optional[float] = None
    closed_form_feasible: Optional[bool] = None
    ambiguous: bool = False
    grid_step: Optional[float] = None
    coarse_argmin: Any = None
    argmin_4d: Any = None
