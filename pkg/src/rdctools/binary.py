"""Closed-form RDC function of a doubly symmetric binary semantic source.

The encoder and decoder are doubly symmetric binary channels, so every link
of S -> X -> U -> S_hat is described by one crossover probability and the
links compose through :func:`cascade2`.
"""

import math
from dataclasses import dataclass

from .errors import DomainError, InfeasibleError
from .infomath import binary_entropy, binary_entropy_inverse
from .records import RdcPoint

CONSTRAINT_MODES = ("proof", "theorem", "direct")

_CMP_TOL = 1e-12
_BISECT_ITER = 200


def _check_unit(*values):
    for v in values:
        if not (0.0 <= v <= 1.0):
            raise DomainError(f"crossover {v!r} outside [0, 1]")


def _canonical(q):
    """Fold a crossover into [0, 0.5]; returns (q, flipped)."""
    if q > 0.5:
        return 1.0 - q, True
    return q, False


@dataclass(frozen=True)
class BinaryProblem:
    """Budgets for one binary RDC evaluation.

    A source crossover above 0.5 is folded to ``1 - q_sx`` and the fold is
    recorded in ``warnings``.
    """

    q_sx: float
    theta_p: float
    theta_c: float
    warnings: tuple = ()

    def __post_init__(self):
        _check_unit(self.q_sx)
        if self.q_sx > 0.5:
            object.__setattr__(self, "q_sx", 1.0 - self.q_sx)
            object.__setattr__(
                self, "warnings",
                self.warnings + ("q_sx > 0.5 folded to 1 - q_sx",))
        if math.isnan(self.theta_p) or self.theta_p < 0.0:
            raise DomainError(f"theta_p={self.theta_p!r} must be >= 0")
        if not (0.0 <= self.theta_c <= 1.0):
            raise DomainError(f"theta_c={self.theta_c!r} outside [0, 1]")


@dataclass(frozen=True)
class CascadeCrossovers:
    q_xu: float
    q_ushat: float
    q_su: float
    q_sshat: float


def cascade2(a, b):
    """End-to-end crossover of two binary symmetric channels in series."""
    _check_unit(a, b)
    return a + b - 2.0 * a * b


def cascade3(a, b, c):
    """End-to-end crossover of three binary symmetric channels in series."""
    _check_unit(a, b, c)
    return a + b + c + 4.0 * a * b * c - 2.0 * (a * b + a * c + b * c)


def binary_semantic_distance(q_sx, q_sshat):
    """KL semantic distance H_b(q_sshat) - H_b(q_sx) between the posteriors of S.

    Raises:
        DomainError: if ``q_sshat < q_sx``, which no cascade can produce.
    """
    if not (0.0 <= q_sx <= 0.5 + _CMP_TOL and 0.0 <= q_sshat <= 0.5 + _CMP_TOL):
        raise DomainError("crossovers must lie in [0, 0.5]")
    q_sx, q_sshat = min(q_sx, 0.5), min(q_sshat, 0.5)
    if q_sshat < q_sx - _CMP_TOL:
        raise DomainError(
            f"q_sshat={q_sshat!r} < q_sx={q_sx!r}: the chain cannot reduce noise")
    return max(binary_entropy(q_sshat) - binary_entropy(q_sx), 0.0)


def _bisect_last_true(pred):
    """Largest b in [0, 0.5] with pred(b), given pred(0) and not pred(0.5)."""
    lo, hi = 0.0, 0.5
    for _ in range(_BISECT_ITER):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if pred(mid):
            lo = mid
        else:
            hi = mid
    return lo


def _solve_proof(q_sx, q_xu, theta_p):
    def distance(b):
        return binary_semantic_distance(q_sx, cascade3(q_sx, q_xu, b))

    floor = distance(0.0)
    if floor > theta_p + _CMP_TOL:
        raise InfeasibleError(
            f"theta_p={theta_p!r} is below the semantic-distance floor {floor!r}", floor)
    if distance(0.5) <= theta_p + _CMP_TOL:
        return 0.5
    b = _bisect_last_true(lambda x: distance(x) <= theta_p)
    if distance(b) > distance(min(b + 1e-9, 0.5)) + _CMP_TOL:
        raise RuntimeError("semantic distance is not monotone in q_ushat")
    return b


def _solve_theorem(q_sx, q_xu, theta_p):
    def gap(b):
        return binary_entropy(cascade3(q_sx, q_xu, b)) - binary_entropy(b)

    top = gap(0.0)
    if theta_p > top + _CMP_TOL:
        raise InfeasibleError(
            f"no q_ushat solves H_b(q_sshat) - H_b(q_ushat) = {theta_p!r}; "
            f"largest attainable value is {top!r}", top)
    if theta_p <= _CMP_TOL:
        return 0.5
    # gap decreases from H_b(q_su) at b=0 to 0 at b=0.5
    return _bisect_last_true(lambda x: gap(x) >= theta_p)


def _solve_direct(theta_p):
    if theta_p > 1.0:
        raise DomainError(f"theta_p={theta_p!r} > 1 has no solution in this mode")
    return binary_entropy_inverse(1.0 - theta_p)


def binary_crossovers(problem, constraint_mode="proof"):
    """Crossovers of the optimal DSBC coding scheme for ``problem``.

    Args:
        problem: a :class:`BinaryProblem`.
        constraint_mode: which equation fixes the decoder crossover.
            ``"proof"`` (default) keeps ``H_b(q_sshat) - H_b(q_sx) <= theta_p``;
            ``"theorem"`` solves ``theta_p = H_b(q_sshat) - H_b(q_ushat)``;
            ``"direct"`` solves ``theta_p = 1 - H_b(q_ushat)``.

    Raises:
        InfeasibleError: the budget cannot be met even with a noiseless decoder.
    """
    if constraint_mode not in CONSTRAINT_MODES:
        raise DomainError(f"unknown constraint mode {constraint_mode!r}")
    q_sx = problem.q_sx
    q_xu = binary_entropy_inverse(1.0 - problem.theta_c)
    if constraint_mode == "proof":
        q_ushat = _solve_proof(q_sx, q_xu, problem.theta_p)
    elif constraint_mode == "theorem":
        q_ushat = _solve_theorem(q_sx, q_xu, problem.theta_p)
    else:
        q_ushat = _solve_direct(problem.theta_p)
    return CascadeCrossovers(
        q_xu=q_xu,
        q_ushat=q_ushat,
        q_su=cascade2(q_sx, q_xu),
        q_sshat=cascade3(q_sx, q_xu, q_ushat),
    )


def binary_rdc(problem, constraint_mode="proof"):
    """Evaluate the binary RDC function.

    Returns:
        RdcPoint with ``theta_d=None``, rate ``1 - H_b(q_ushat)`` and branch
        ``"feasible"``.
    """
    cc = binary_crossovers(problem, constraint_mode)
    rate = 1.0 - binary_entropy(cc.q_ushat)
    return RdcPoint(theta_d=None, theta_p=problem.theta_p, theta_c=problem.theta_c,
                    rate=max(rate, 0.0), branch="feasible", warnings=problem.warnings)


def binary_ib_generalization(q_sx, q_xu):
    """Relevance I(S; U) when the decoder forwards U unchanged."""
    for q in (q_sx, q_xu):
        if not (0.0 <= q <= 0.5):
            raise DomainError(f"crossover {q!r} outside [0, 0.5]")
    return 1.0 - binary_entropy(cascade2(q_sx, q_xu))
