import math

import numpy as np
import pytest

from rdctools import (DomainError, LossWeights, SampleLogDensities, complexity_upper_bound,
                      distortion_lower_bound, loss_classification, loss_generation, loss_video,
                      rate_upper_bound)
from rdctools.records import McEstimate

from conftest import gaussian_pair_logs

HB_011 = 0.49991595816452799564


def test_complexity_bound_matched_gaussian(gaussian_complexity_samples):
    est = complexity_upper_bound(gaussian_complexity_samples())
    assert isinstance(est, McEstimate)
    assert est.n == 10 ** 6
    assert abs(est.mean - 0.5) <= 4 * est.stderr


def test_complexity_bound_independent_pair(gaussian_complexity_samples):
    est = complexity_upper_bound(gaussian_complexity_samples(rho=0.0, n=10 ** 5))
    assert est.mean == pytest.approx(0.0, abs=1e-12)


def test_complexity_bound_direction_over_seeds(gaussian_complexity_samples):
    # a mismatched t(u) can only loosen the bound
    ok = 0
    for seed in range(100):
        est = complexity_upper_bound(gaussian_complexity_samples(n=20_000, seed=seed, t_var=2.0))
        ok += est.mean >= 0.5 - 4 * est.stderr
    assert ok >= 99


def test_rate_bound_mirrors_complexity_bound():
    lp, lt = gaussian_pair_logs(math.sqrt(0.5), 10 ** 6, 3)
    est = rate_upper_bound(SampleLogDensities(log_p_shat_given_u=lp, log_r_shat=lt))
    assert abs(est.mean - 0.5) <= 4 * est.stderr
    lp, lt = gaussian_pair_logs(math.sqrt(0.5), 20_000, 4, t_var=3.0)
    loose = rate_upper_bound(SampleLogDensities(log_p_shat_given_u=lp, log_r_shat=lt))
    assert loose.mean >= 0.5 - 4 * loose.stderr


def dsbs_log_q(q, n, seed):
    rng = np.random.default_rng(seed)
    flip = rng.random(n) < q
    return np.where(flip, math.log(q), math.log(1 - q))


def test_distortion_bound_dsbs():
    lq = dsbs_log_q(0.11, 10 ** 6, 0)
    est = distortion_lower_bound(SampleLogDensities(log_q_s_given_shat=lq), entropy_s=1.0)
    assert abs(est.mean - (1 - HB_011)) <= 4 * est.stderr


def test_distortion_bound_independent_and_deterministic():
    s = SampleLogDensities(log_q_s_given_shat=np.full(1000, math.log(0.5)))
    assert distortion_lower_bound(s).mean == pytest.approx(-1.0)
    assert distortion_lower_bound(s, entropy_s=1.0).mean == pytest.approx(0.0)
    s = SampleLogDensities(log_q_s_given_shat=np.zeros(1000))
    assert distortion_lower_bound(s, entropy_s=1.0).mean == 1.0


def test_distortion_bound_direction_with_mismatched_q():
    ok = 0
    for seed in range(100):
        rng = np.random.default_rng(seed)
        flip = rng.random(20_000) < 0.11
        # decoder believes the crossover is 0.2
        lq = np.where(flip, math.log(0.2), math.log(0.8))
        est = distortion_lower_bound(SampleLogDensities(log_q_s_given_shat=lq), 1.0)
        ok += est.mean <= (1 - HB_011) + 4 * est.stderr
    assert ok >= 99


def test_log_base_two_inputs():
    a = SampleLogDensities(log_q_s_given_shat=[-1.0, -1.0], log_base=2.0)
    assert distortion_lower_bound(a).mean == -1.0
    b = SampleLogDensities.from_mapping({"log_q_s_given_shat": [math.log(0.5)] * 2})
    assert distortion_lower_bound(b).mean == pytest.approx(-1.0)


def test_missing_and_malformed_fields():
    s = SampleLogDensities(log_q_s_given_shat=[0.0, 0.0])
    with pytest.raises(DomainError):
        complexity_upper_bound(s)
    with pytest.raises(DomainError):
        SampleLogDensities(log_p_u_given_x=[0.0, 1.0], log_t_u=[0.0])
    with pytest.raises(DomainError):
        SampleLogDensities(log_t_u=[0.0, math.nan])
    with pytest.raises(DomainError):
        SampleLogDensities.from_mapping({"log_x": [0.0]})


def five_field_samples(n=2000, seed=0):
    rng = np.random.default_rng(seed)
    return SampleLogDensities(*(rng.normal(size=n) for _ in range(5)))


def test_classification_degenerates_to_rate_bound():
    s = five_field_samples()
    assert loss_classification(s, LossWeights()).mean == pytest.approx(rate_upper_bound(s).mean)


def test_classification_all_zero():
    s = SampleLogDensities(*(np.zeros(10) for _ in range(5)))
    assert loss_classification(s, LossWeights(1.0, 2.0, 3.0)).mean == 0.0


def test_classification_assembles_components():
    s = five_field_samples()
    w = LossWeights(lambda_c=0.7, lambda_d=1.3)
    expected = (rate_upper_bound(s).mean + 0.7 * complexity_upper_bound(s).mean
                - 1.3 * distortion_lower_bound(s).mean)
    assert loss_classification(s, w).mean == pytest.approx(expected, abs=1e-12)


def test_classification_linear_in_weights():
    s = five_field_samples()
    base = loss_classification(s, LossWeights()).mean
    a = loss_classification(s, LossWeights(1.0, 0.0)).mean - base
    b = loss_classification(s, LossWeights(0.0, 1.0)).mean - base
    both = loss_classification(s, LossWeights(2.0, 3.0)).mean - base
    assert both == pytest.approx(2 * a + 3 * b, abs=1e-12)


def test_generation_examples():
    assert loss_generation(0, 0, 0, LossWeights(1, 1, 1)) == 0
    assert loss_generation(0.25, 0.25, 0.5, LossWeights(lambda_c=2, lambda_p=1)) == 1.5
    # Gaussian test channel sigma=0.5, kappa=0.4 with gamma=rho=1
    mse = 1 + 0.25 - 2 * 0.4
    w2 = (1 - 0.5) ** 2
    assert loss_generation(mse, w2, 0.3, LossWeights(lambda_c=2, lambda_p=4)) == \
        pytest.approx(0.45 + 1.0 + 0.6)
    with pytest.raises(DomainError):
        loss_generation(-0.1, 0, 0, LossWeights())


def test_video_examples():
    assert loss_video(0, 0, 0, LossWeights(1, 1)) == 0
    assert loss_video(1.0, 0.5, 0.25, LossWeights(lambda_c=4, lambda_d=2)) == 3.0
    assert loss_video(0.5, 0.0, 0.0, LossWeights(lambda_c=9, lambda_d=9)) == 0.5
    with pytest.raises(DomainError):
        loss_video(1.0, -0.5, 0.0, LossWeights())


def test_aggregators_linear_in_weights():
    args = (0.3, 0.2, 0.9)
    for fn in (loss_generation, loss_video):
        base = fn(*args, LossWeights())
        unit = [fn(*args, LossWeights(**{k: 1.0})) - base
                for k in ("lambda_c", "lambda_d", "lambda_p")]
        mixed = fn(*args, LossWeights(2.0, 5.0, 7.0)) - base
        assert mixed == pytest.approx(2 * unit[0] + 5 * unit[1] + 7 * unit[2], abs=1e-12)


def test_weights_must_be_nonnegative():
    with pytest.raises(DomainError):
        LossWeights(lambda_c=-1.0)
