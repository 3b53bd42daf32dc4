"""Brute-force search over jointly Gaussian test channels.

The reconstruction is S_hat ~ N(0, sigma^2) with Cov(U, S_hat) = kappa. For
given chain correlations the MSE on S is ``1 + sigma^2 - 2*gamma*rho*kappa``,
the squared Wasserstein distance to N(0, 1) is ``(1 - sigma)^2`` and the rate
is ``0.5*log2(sigma^2 / (sigma^2 - kappa^2))``. The search never consults the
closed form except to report the gap.
"""

import math

import numpy as np

from ..errors import DomainError, InfeasibleError
from ..gaussian import Branch, GaussianTestChannel, gaussian_rate
from ..infomath import gaussian_mi_from_correlation
from .results import OracleResult

FEASIBILITY_TOL = 1e-9
ZOOM_ROUNDS = 2
ZOOM_FACTOR = 10
ZOOM_HALF_WIDTH = 5  # in parent-grid steps


def _rates(sigma, kappa):
    s2 = sigma * sigma
    k2 = kappa * kappa
    with np.errstate(divide="ignore", invalid="ignore"):
        r = 0.5 * np.log2(s2 / (s2 - k2))
    r = np.where(k2 >= s2, np.inf, r)
    # sigma = kappa = 0 is a constant reconstruction carrying no information
    r = np.where((s2 == 0) & (k2 == 0), 0.0, r)
    return r


def _evaluate(sig, kap, g, theta_d, theta_p, lo_kappa):
    S, K = np.meshgrid(sig, kap, indexing="ij")
    ok = (np.abs(K) <= S) & (K >= lo_kappa * S)
    ok &= 1.0 + S * S - 2.0 * g * K <= theta_d + FEASIBILITY_TOL
    ok &= (1.0 - S) ** 2 <= theta_p + FEASIBILITY_TOL
    if not ok.any():
        return None
    r = _rates(S, K)
    # admissible points with infinite rate still outrank inadmissible ones
    rank = np.where(ok, np.minimum(r, np.finfo(float).max), np.inf)
    idx = np.unravel_index(np.argmin(rank), rank.shape)
    return r[idx], S[idx], K[idx]


def gaussian_parametric_oracle(gamma, rho, theta_d, theta_p, resolution=200,
                               allow_negative_kappa=False):
    """Minimise the rate over a (sigma, kappa) grid with two zoom rounds.

    Args:
        gamma, rho: chain correlations; rho = 0 is a zero-complexity encoder.
        theta_d: MSE budget on S.
        theta_p: squared-Wasserstein budget.
        resolution: grid points per axis on the coarse pass (>= 100).
        allow_negative_kappa: also search kappa in [-sigma, 0).

    Returns:
        OracleResult whose argmin is a GaussianTestChannel. The closed form is
        evaluated at ``theta_c = I(X;U)`` implied by ``rho`` for the gap.
    """
    if not (0.0 < gamma <= 1.0 and 0.0 <= rho <= 1.0):
        raise DomainError("gamma must lie in (0, 1] and rho in [0, 1]")
    if resolution < 100:
        raise DomainError("resolution must be at least 100")
    g = gamma * rho
    lo_kappa = -1.0 if allow_negative_kappa else 0.0

    sig = np.linspace(0.0, 1.0, resolution)
    kap = np.linspace(lo_kappa, 1.0, resolution)
    step_s = sig[1] - sig[0]
    step_k = kap[1] - kap[0]
    best = _evaluate(sig, kap, g, theta_d, theta_p, lo_kappa)
    for _ in range(ZOOM_ROUNDS):
        if best is None or not np.isfinite(best[0]):
            break
        _, s0, k0 = best
        n = 2 * ZOOM_HALF_WIDTH * ZOOM_FACTOR + 1
        sig = np.clip(np.linspace(s0 - ZOOM_HALF_WIDTH * step_s, s0 + ZOOM_HALF_WIDTH * step_s, n),
                      0.0, 1.0)
        kap = np.clip(np.linspace(k0 - ZOOM_HALF_WIDTH * step_k, k0 + ZOOM_HALF_WIDTH * step_k, n),
                      lo_kappa, 1.0)
        step_s /= ZOOM_FACTOR
        step_k /= ZOOM_FACTOR
        cand = _evaluate(sig, kap, g, theta_d, theta_p, lo_kappa)
        if cand is not None and cand[0] <= best[0]:
            best = cand

    feasible = best is not None
    rate, s_best, k_best = best if feasible else (None, None, None)
    theta_c = gaussian_mi_from_correlation(rho)
    try:
        cf_rate, branch = gaussian_rate(gamma, theta_d, theta_p, theta_c)
        cf_feasible = True
    except InfeasibleError:
        cf_rate, branch, cf_feasible = None, None, False
    ambiguous = branch is Branch.COMPLEXITY_LIMITED and g < 1.0
    gap = None
    if feasible and cf_feasible:
        gap = 0.0 if (math.isinf(rate) and math.isinf(cf_rate)) else float(rate) - cf_rate
    return OracleResult(
        min_rate=float(rate) if feasible else None,
        argmin=GaussianTestChannel(kappa=float(k_best), sigma=float(s_best)) if feasible else None,
        feasible=feasible,
        gap_to_closed_form=gap,
        closed_form_rate=cf_rate,
        closed_form_feasible=cf_feasible,
        ambiguous=bool(ambiguous),
        grid_step=float(step_s),
    )


def gaussian_exact_family_rate(gamma, rho, theta_d, theta_p):
    """Analytic minimum of the same (sigma, kappa) problem the grid searches.

    For fixed sigma the smallest admissible kappa is ``(1+sigma^2-theta_d)/(2g)``
    and the rate is increasing in kappa/sigma, which is minimised at
    ``sigma = sqrt(1 - theta_d)`` clipped to the perception bound.

    Raises:
        InfeasibleError: no admissible (sigma, kappa).
    """
    g = gamma * rho
    s_min = 1.0 - math.sqrt(theta_p)
    if theta_d >= 1.0 + s_min * s_min:
        return 0.0
    s_star = math.sqrt(max(1.0 - theta_d, 0.0))
    s = min(max(s_star, s_min), 1.0)
    kappa = max((1.0 + s * s - theta_d) / (2.0 * g), 0.0)
    if kappa > s * (1.0 + 1e-15):
        # the MSE floor over sigma in [s_min, 1] with kappa = sigma
        s_f = min(max(g, s_min), 1.0)
        floor = 1.0 + s_f * s_f - 2.0 * g * s_f
        raise InfeasibleError(f"theta_d={theta_d!r} below the family floor {floor!r}", floor)
    c = kappa / s
    return 0.0 if c == 0.0 else (math.inf if c >= 1.0 else -0.5 * math.log2(1.0 - c * c))
