"""Seeded Monte-Carlo simulation of the S -> X -> U -> S_hat chain.

Samples are drawn in fixed-size chunks, each with its own PCG64 stream
spawned from the caller's seed. Chunk boundaries never depend on the number
of worker threads, so results are bit-identical for any ``threads``.
"""

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from ..errors import DomainError, InvalidChannelError
from ..records import McEstimate

RNG_ALGORITHM = "numpy.random.PCG64 via SeedSequence.spawn, chunk=65536"
CHUNK = 1 << 16
MIN_SAMPLES = 10_000


def _chunk_sizes(n):
    full, rest = divmod(n, CHUNK)
    return [CHUNK] * full + ([rest] if rest else [])


def _map_chunks(fn, n, seed, threads):
    sizes = _chunk_sizes(n)
    seqs = np.random.SeedSequence(seed).spawn(len(sizes))
    jobs = [(np.random.Generator(np.random.PCG64(s)), m) for s, m in zip(seqs, sizes)]
    if threads <= 1:
        return [fn(rng, m) for rng, m in jobs]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda job: fn(*job), jobs))


def _check_n(n):
    if n < MIN_SAMPLES:
        raise DomainError(f"n={n} below the minimum of {MIN_SAMPLES} samples")


def simulate_gaussian_chain(gamma, rho, kappa, sigma, n=1_000_000, seed=0, threads=1):
    """Empirical MSE and squared-W2 for a jointly Gaussian test channel.

    U ~ N(0, 1), X = rho U + sqrt(1-rho^2) Z2, S = gamma X + sqrt(1-gamma^2) Z1,
    S_hat = kappa U + sqrt(sigma^2 - kappa^2) Z3.

    The W2 figure is the plug-in distance between Gaussians fitted to S and
    S_hat; its standard error comes from the spread of per-chunk estimates.

    Returns:
        dict with McEstimate entries ``mse`` and ``w2`` and the ``rng`` identity.

    Raises:
        InvalidChannelError: if |kappa| > sigma.
    """
    _check_n(n)
    if sigma < 0 or abs(kappa) > sigma:
        raise InvalidChannelError(f"|kappa|={abs(kappa)!r} exceeds sigma={sigma!r}")
    if not (0.0 <= gamma <= 1.0 and 0.0 <= rho <= 1.0):
        raise DomainError("gamma and rho must lie in [0, 1]")
    noise_x = np.sqrt(1.0 - rho * rho)
    noise_s = np.sqrt(1.0 - gamma * gamma)
    noise_hat = np.sqrt(max(sigma * sigma - kappa * kappa, 0.0))

    def run(rng, m):
        z = rng.standard_normal((4, m))
        u = z[0]
        x = rho * u + noise_x * z[1]
        s = gamma * x + noise_s * z[2]
        s_hat = kappa * u + noise_hat * z[3]
        err = (s - s_hat) ** 2
        return (err.sum(), (err * err).sum(), m,
                s.sum(), (s * s).sum(), s_hat.sum(), (s_hat * s_hat).sum())

    parts = np.array(_map_chunks(run, n, seed, threads))
    tot = parts.sum(axis=0)
    mse_mean = tot[0] / n
    mse_var = (tot[1] - n * mse_mean ** 2) / (n - 1)
    mse = McEstimate(float(mse_mean), float(np.sqrt(max(mse_var, 0.0) / n)), n, seed)

    def plug_in(row_sums, count):
        ms, ss, mh, sh = row_sums
        mu_s, mu_h = ms / count, mh / count
        sd_s = np.sqrt(max(ss / count - mu_s ** 2, 0.0))
        sd_h = np.sqrt(max(sh / count - mu_h ** 2, 0.0))
        return (mu_s - mu_h) ** 2 + (sd_s - sd_h) ** 2

    w2_mean = plug_in(tot[3:7], n)
    per_chunk = np.array([plug_in(p[3:7], p[2]) for p in parts])
    k = len(per_chunk)
    w2_se = float(np.std(per_chunk, ddof=1) / np.sqrt(k)) if k > 1 else float("nan")
    w2 = McEstimate(float(w2_mean), w2_se, n, seed)
    return {"mse": mse, "w2": w2, "rng": RNG_ALGORITHM}


def simulate_binary_chain(q_sx, q_xu, q_ushat, n=1_000_000, seed=0, threads=1):
    """Empirical end-to-end crossover P(S != S_hat) of three chained BSCs."""
    _check_n(n)
    for q in (q_sx, q_xu, q_ushat):
        if not (0.0 <= q <= 1.0):
            raise DomainError(f"crossover {q!r} is not a probability")

    def run(rng, m):
        s = rng.integers(0, 2, m, dtype=np.int8)
        x = s ^ (rng.random(m) < q_sx)
        u = x ^ (rng.random(m) < q_xu)
        s_hat = u ^ (rng.random(m) < q_ushat)
        return int(np.count_nonzero(s != s_hat))

    flips = sum(_map_chunks(run, n, seed, threads))
    p = flips / n
    return McEstimate(p, float(np.sqrt(p * (1.0 - p) / (n - 1))), n, seed)

