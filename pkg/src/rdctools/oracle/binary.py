"""Exhaustive search over asymmetric binary encoder/decoder channels.

Every quantity is computed from the induced joint law of (S, U) and
(S, S_hat), never from crossover-composition formulas. Because the rate
I(U; S_hat) depends only on the decoder, the search reduces to: for each
decoder on the grid, find the smallest semantic distance any admissible
encoder can reach, then keep the cheapest decoder meeting the budget.
"""

import math
from functools import lru_cache

import numpy as np
from numba import njit

from ..binary import binary_rdc, BinaryProblem
from ..errors import DomainError, InfeasibleError
from .discrete import conditional_entropy_2x2, mi_2x2
from .results import ChannelParams4, OracleResult

FEASIBILITY_TOL = 1e-9
TIE_TOL = 1e-12
SYMMETRIC_RESOLUTION_FACTOR = 10
ZOOM_ROUNDS = 2
ZOOM_FACTOR = 10
ZOOM_HALF_WIDTH = 5
LOCAL_ROUNDS = 3
LOCAL_FACTOR = 5
LOCAL_HALF_WIDTH = 2


def _channel(a0, a1):
    """Row-stochastic 2x2 channels W[..., in, out] from flip probabilities."""
    a0 = np.asarray(a0, dtype=float)
    a1 = np.asarray(a1, dtype=float)
    w = np.empty(a0.shape + (2, 2))
    w[..., 0, 0] = 1.0 - a0
    w[..., 0, 1] = a0
    w[..., 1, 0] = a1
    w[..., 1, 1] = 1.0 - a1
    return w


def _source_joint(q_sx):
    return 0.5 * np.array([[1.0 - q_sx, q_sx], [q_sx, 1.0 - q_sx]])


def _encoder_terms(q_sx, p0, p1):
    """I(X;U) and the joint p(s, u) for arrays of encoder parameters."""
    w = _channel(p0, p1)
    p_xu = 0.5 * w
    p_su = np.einsum("sx,...xu->...su", _source_joint(q_sx), w)
    return mi_2x2(p_xu), p_su


def _rate_for(p0, p1, q0, q1):
    """Exact I(U; S_hat) including the non-uniform U an asymmetric encoder induces."""
    p_u = 0.5 * (_channel(p0, p1).sum(axis=-2))
    p_ushat = p_u[..., :, None] * _channel(q0, q1)
    return mi_2x2(p_ushat)


@njit(cache=True)
def _xlogx(v):
    return v * math.log2(v) if v > 0.0 else 0.0


@njit(cache=True)
def _min_cond_entropy(p_su, dec, enc_asym):
    """For each decoder, min over encoders of H(S | S_hat) and the arg encoder.

    p_su: (E, 2, 2) joints p(s, u); dec: (D, 2, 2) channels W[u, s_hat].
    Ties go to the encoder with the smallest ``enc_asym``.
    """
    n_enc = p_su.shape[0]
    n_dec = dec.shape[0]
    best = np.full(n_dec, np.inf)
    arg = np.zeros(n_dec, dtype=np.int64)
    for d in range(n_dec):
        w00 = dec[d, 0, 0]
        w01 = dec[d, 0, 1]
        w10 = dec[d, 1, 0]
        w11 = dec[d, 1, 1]
        for e in range(n_enc):
            a = p_su[e, 0, 0]
            b = p_su[e, 0, 1]
            c = p_su[e, 1, 0]
            f = p_su[e, 1, 1]
            j00 = a * w00 + b * w10
            j01 = a * w01 + b * w11
            j10 = c * w00 + f * w10
            j11 = c * w01 + f * w11
            h = (_xlogx(j00 + j10) + _xlogx(j01 + j11)
                 - _xlogx(j00) - _xlogx(j01) - _xlogx(j10) - _xlogx(j11))
            if h < best[d] - TIE_TOL:
                best[d] = h
                arg[d] = e
            elif h <= best[d] + TIE_TOL and enc_asym[e] < enc_asym[arg[d]]:
                arg[d] = e
    return best, arg


def _search(q_sx, theta_c, theta_p, enc_params, dec_params):
    """Brute-force over the encoder x decoder product.

    Returns (rate, encoder_index, decoder_index) or (inf, None, None).
    """
    p0, p1 = enc_params
    q0, q1 = dec_params
    i_xu, p_su = _encoder_terms(q_sx, p0, p1)
    admissible = i_xu <= theta_c + FEASIBILITY_TOL
    if not admissible.any():
        return np.inf, None, None
    enc_idx = np.flatnonzero(admissible)
    dec = _channel(q0, q1)
    h_s_given_shat, arg = _min_cond_entropy(np.ascontiguousarray(p_su[enc_idx]), dec,
                                            np.abs(p0 - p1)[enc_idx])
    h_s_given_x = conditional_entropy_2x2(_source_joint(q_sx).T)
    dist = h_s_given_shat - h_s_given_x
    ok = dist <= theta_p + FEASIBILITY_TOL
    if not ok.any():
        return np.inf, None, None
    enc_for_dec = enc_idx[arg]
    rates = _rate_for(p0[enc_for_dec], p1[enc_for_dec], q0, q1)
    rates = np.where(ok, rates, np.inf)
    rmin = rates.min()
    # among ties prefer the least asymmetric channel pair
    ties = np.flatnonzero(rates <= rmin + TIE_TOL)
    asym = np.abs(q0[ties] - q1[ties]) + np.abs(p0[enc_for_dec[ties]] - p1[enc_for_dec[ties]])
    d = ties[np.argmin(asym)]
    return float(rmin), int(enc_for_dec[d]), int(d)


def _pair_grid(values):
    a, b = np.meshgrid(values, values, indexing="ij")
    return a.ravel(), b.ravel()


def _zoom_axis(center, step, lo=0.0, hi=1.0):
    n = 2 * ZOOM_HALF_WIDTH * ZOOM_FACTOR + 1
    return np.unique(np.clip(
        np.linspace(center - ZOOM_HALF_WIDTH * step, center + ZOOM_HALF_WIDTH * step, n), lo, hi))


@lru_cache(maxsize=64)
def _coarse_tables(q_sx, theta_c, resolution):
    """Per-decoder minimal distance on the full 4D grid (cached across theta_p)."""
    grid = np.linspace(0.0, 1.0, resolution)
    p0, p1 = _pair_grid(grid)
    q0, q1 = _pair_grid(grid)
    i_xu, p_su = _encoder_terms(q_sx, p0, p1)
    enc_idx = np.flatnonzero(i_xu <= theta_c + FEASIBILITY_TOL)
    if enc_idx.size == 0:
        return None
    h, arg = _min_cond_entropy(np.ascontiguousarray(p_su[enc_idx]), _channel(q0, q1),
                              np.abs(p0 - p1)[enc_idx])
    h_s_given_x = conditional_entropy_2x2(_source_joint(q_sx).T)
    enc = enc_idx[arg]
    rates = _rate_for(p0[enc], p1[enc], q0, q1)
    return h - h_s_given_x, rates, p0[enc], p1[enc], q0, q1


def _coarse(q_sx, theta_c, theta_p, resolution):
    tables = _coarse_tables(float(q_sx), float(theta_c), int(resolution))
    if tables is None:
        return np.inf, None
    dist, rates, p0, p1, q0, q1 = tables
    rates = np.where(dist <= theta_p + FEASIBILITY_TOL, rates, np.inf)
    rmin = rates.min()
    if not np.isfinite(rmin):
        return np.inf, None
    ties = np.flatnonzero(rates <= rmin + TIE_TOL)
    asym = np.abs(q0[ties] - q1[ties]) + np.abs(p0[ties] - p1[ties])
    d = ties[np.argmin(asym)]
    return float(rmin), ChannelParams4(float(p0[d]), float(p1[d]), float(q0[d]), float(q1[d]))


def _symmetric_slice(q_sx, theta_c, theta_p, resolution):
    """Fine search restricted to p0 = p1, q0 = q1, with zoom refinement."""
    n = SYMMETRIC_RESOLUTION_FACTOR * (resolution - 1) + 1
    a = np.linspace(0.0, 1.0, n)
    b = np.linspace(0.0, 1.0, n)
    step = a[1] - a[0]
    best = (np.inf, None)
    for _ in range(ZOOM_ROUNDS + 1):
        rate, e, d = _search(q_sx, theta_c, theta_p, (a, a), (b, b))
        if e is not None and rate <= best[0]:
            best = (rate, ChannelParams4(float(a[e]), float(a[e]), float(b[d]), float(b[d])))
        if not np.isfinite(best[0]):
            break
        a = _zoom_axis(best[1].p0, step)
        b = _zoom_axis(best[1].q0, step)
        step /= ZOOM_FACTOR
    return best


def _local_4d(q_sx, theta_c, theta_p, start, step):
    """Zoom over all four parameters around ``start``; no symmetry assumed."""
    best = (np.inf, start)
    center = start
    for _ in range(LOCAL_ROUNDS):
        n = 2 * LOCAL_HALF_WIDTH * LOCAL_FACTOR + 1
        axes = [np.unique(np.clip(np.linspace(v - LOCAL_HALF_WIDTH * step,
                                              v + LOCAL_HALF_WIDTH * step, n), 0.0, 1.0))
                for v in (center.p0, center.p1, center.q0, center.q1)]
        p0, p1 = np.meshgrid(axes[0], axes[1], indexing="ij")
        q0, q1 = np.meshgrid(axes[2], axes[3], indexing="ij")
        p0, p1, q0, q1 = p0.ravel(), p1.ravel(), q0.ravel(), q1.ravel()
        rate, e, d = _search(q_sx, theta_c, theta_p, (p0, p1), (q0, q1))
        if e is not None and rate <= best[0]:
            best = (rate, ChannelParams4(float(p0[e]), float(p1[e]), float(q0[d]), float(q1[d])))
            center = best[1]
        step /= LOCAL_FACTOR
    return best


def binary_grid_oracle(q_sx, theta_c, theta_p, resolution=50, constraint_mode="proof"):
    """Minimum I(U; S_hat) over binary channels meeting both budgets.

    A coarse pass enumerates all (p0, p1, q0, q1) on a ``resolution``-point
    grid per axis; the result is refined on the symmetric slice and by a
    local 4D zoom. ``argmin`` is the overall minimiser; ``argmin_4d`` is the
    best point found without ever restricting to symmetric channels.

    Args:
        q_sx: source crossover in [0, 0.5].
        theta_c: complexity budget I(X;U) in bits.
        theta_p: semantic-distance budget in bits.
        resolution: coarse grid points per axis (>= 50); an even value is
            raised by one so that 0.5 lies on the grid.
        constraint_mode: closed-form variant used for the reported gap.
    """
    if not (0.0 <= q_sx <= 0.5):
        raise DomainError(f"q_sx={q_sx!r} outside [0, 0.5]")
    if resolution < 50:
        raise DomainError("resolution must be at least 50")
    resolution |= 1
    coarse_rate, coarse_arg = _coarse(q_sx, theta_c, theta_p, resolution)
    step = 1.0 / (resolution - 1)

    best = (coarse_rate, coarse_arg)
    if np.isfinite(coarse_rate):
        cand = _local_4d(q_sx, theta_c, theta_p, coarse_arg, step)
        if cand[0] < best[0]:
            best = cand
    argmin_4d = best[1]
    cand = _symmetric_slice(q_sx, theta_c, theta_p, resolution)
    if cand[0] < best[0]:
        best = cand

    rate, arg = best
    feasible = bool(np.isfinite(rate))
    try:
        cf_rate = binary_rdc(BinaryProblem(q_sx, theta_p, theta_c), constraint_mode).rate
        cf_feasible = True
    except InfeasibleError:
        cf_rate, cf_feasible = None, False
    gap = max(rate, 0.0) - cf_rate if (feasible and cf_feasible) else None
    return OracleResult(
        min_rate=max(rate, 0.0) if feasible else None,
        argmin=arg,
        feasible=feasible,
        gap_to_closed_form=gap,
        closed_form_rate=cf_rate,
        closed_form_feasible=cf_feasible,
        grid_step=step,
        coarse_argmin=coarse_arg,
        argmin_4d=argmin_4d,
    )


def is_symmetric(params, step, steps=2):
    """True when |p0 - p1| and |q0 - q1| are within ``steps`` grid steps."""
    tol = steps * step + 1e-12
    return abs(params.p0 - params.p1) <= tol and abs(params.q0 - params.q1) <= tol
