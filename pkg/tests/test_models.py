"""Closed-form model checks against independent plain-math oracles.

The oracle functions below are deliberately written with the math module
and scalar arithmetic only, as a separate code path from the numpy
implementations they check.
"""

import math

import numpy as np
import pytest
from scipy import stats

from aigc_edge import (
    ConfigError,
    GenAiModelSpec,
    PopularityChain,
    RadioConfig,
    advance_popularity,
    channel_gain,
    downlink_delay,
    downlink_rate,
    generation_delay,
    generation_quality,
    path_loss_db,
    rayleigh_power,
    sample_request,
    sample_requests,
    total_delay,
    uplink_delay,
    uplink_rate,
    utility,
    zipf_distribution,
)
from aigc_edge.models import dbm_to_mw, mw_to_dbm

REFERENCE_SPEC = GenAiModelSpec(
    index=1, storage_gb=5.0, output_bits=8e7, a1=60.0, a2=110.0, a3=170.0, a4=28.0, b1=0.18, b2=5.74
)
RADIO = RadioConfig()


# ---------------------------------------------------------------------------
# scalar oracles


def oracle_zipf(gamma, m, i):
    return i ** (-gamma) / sum(j ** (-gamma) for j in range(1, m + 1))


def oracle_path_loss(d_m):
    return -128.1 - 37.6 * math.log10(max(d_m, 1.0) / 1000.0)


def oracle_uplink_rate(b, w_up, p_dbm, u0_dbm_hz, h):
    if b == 0.0 or h == 0.0:
        return 0.0
    snr = 10 ** (p_dbm / 10) * h / (10 ** (u0_dbm_hz / 10) * b * w_up)
    return b * w_up * math.log2(1 + snr)


def oracle_downlink_rate(w_dw, p_b_dbm, u0_dbm_hz, h):
    snr = 10 ** (p_b_dbm / 10) * h / (10 ** (u0_dbm_hz / 10) * w_dw)
    return w_dw * math.log2(1 + snr)


def oracle_uplink_delay(d_in, rate, cached, r_bc):
    base = d_in / rate if d_in > 0 else 0.0
    return base if cached else base + d_in / r_bc


def oracle_quality(x, l_total, spec, cached):
    if not cached:
        return spec.a4
    s = x * l_total
    if s <= spec.a1:
        return spec.a2
    if s >= spec.a3:
        return spec.a4
    return spec.a2 + (spec.a4 - spec.a2) / (spec.a3 - spec.a1) * (s - spec.a1)


def oracle_generation_delay(x, l_total, spec, cached):
    return spec.b1 * x * l_total + spec.b2 if cached else spec.b1 * spec.a3 + spec.b2


def oracle_utility(alpha, delay, quality):
    return alpha * delay + (1 - alpha) * quality


# ---------------------------------------------------------------------------
# request popularity


def test_zipf_uniform_when_flat():
    assert np.allclose(zipf_distribution(0.0, 4), [0.25] * 4, rtol=0, atol=1e-15)


def test_zipf_hand_values():
    assert np.allclose(zipf_distribution(1.0, 3), [6 / 11, 3 / 11, 2 / 11], rtol=1e-12)


def test_zipf_against_oracle():
    dist = zipf_distribution(0.5, 10)
    for i in range(1, 11):
        assert dist[i - 1] == pytest.approx(oracle_zipf(0.5, 10, i), rel=1e-12)


def test_zipf_normalised_and_ordered():
    rng = np.random.default_rng(7)
    for _ in range(200):
        gamma = rng.uniform(0.0, 3.0)
        m = int(rng.integers(1, 40))
        dist = zipf_distribution(gamma, m)
        assert abs(dist.sum() - 1.0) < 1e-12
        assert np.all(dist >= 0)
        if gamma > 0:
            assert np.all(np.diff(dist) <= 0)


def test_zipf_empty_catalogue_rejected():
    with pytest.raises(ConfigError):
        zipf_distribution(1.0, 0)


def test_sample_request_degenerate():
    rng = np.random.default_rng(0)
    assert all(sample_request(np.array([1.0, 0.0, 0.0]), rng) == 1 for _ in range(100))


def test_sample_request_binomial_bound():
    rng = np.random.default_rng(1)
    draws = sample_requests(np.array([0.5, 0.5]), 10**6, rng)
    freq = np.mean(draws == 1)
    assert abs(freq - 0.5) < 0.0015  # three binomial sigmas


def test_sample_request_chi_square():
    rng = np.random.default_rng(2)
    dist = zipf_distribution(0.7, 10)
    draws = sample_requests(dist, 10**6, rng)
    observed = np.bincount(draws, minlength=11)[1:]
    _, p = stats.chisquare(observed, dist * 10**6)
    assert p > 0.001


def test_advance_popularity_first_row_frequencies():
    chain = PopularityChain()
    rng = np.random.default_rng(3)
    draws = np.array([advance_popularity(chain, 1, rng) for _ in range(10**6)])
    for target, expected in zip((1, 2, 3), (0.6, 0.2, 0.2)):
        assert abs(np.mean(draws == target) - expected) < 0.0015


def test_advance_popularity_identity_never_moves():
    chain = PopularityChain(transition=((1, 0, 0), (0, 1, 0), (0, 0, 1)))
    rng = np.random.default_rng(4)
    assert all(advance_popularity(chain, 2, rng) == 2 for _ in range(1000))


def test_popularity_long_run_matches_power_iteration():
    chain = PopularityChain()
    # independent stationary-vector oracle: repeated row-vector multiplication
    pi = [1 / 3, 1 / 3, 1 / 3]
    mat = chain.transition
    for _ in range(10_000):
        pi = [sum(pi[i] * mat[i][j] for i in range(3)) for j in range(3)]
    rng = np.random.default_rng(5)
    state, counts = 1, [0, 0, 0]
    n = 300_000
    for _ in range(n):
        state = advance_popularity(chain, state, rng)
        counts[state - 1] += 1
    for j in range(3):
        assert counts[j] / n == pytest.approx(pi[j], abs=0.005)


def test_popularity_chain_validation():
    with pytest.raises(ConfigError):
        PopularityChain(transition=((0.5, 0.2, 0.2), (0.1, 0.7, 0.2), (0.2, 0.3, 0.5)))


# ---------------------------------------------------------------------------
# channel


def test_path_loss_reference_points():
    assert path_loss_db(1000.0) == pytest.approx(-128.1, abs=1e-12)
    assert path_loss_db(100.0) == pytest.approx(-90.5, abs=1e-9)
    d = 250.0 * math.sqrt(2.0)
    assert path_loss_db(d) == pytest.approx(oracle_path_loss(d), rel=1e-12)


def test_path_loss_clamps_tiny_distances():
    assert path_loss_db(0.0) == path_loss_db(1.0)
    assert path_loss_db(-5.0) == path_loss_db(1.0)
    assert path_loss_db(0.2, min_distance_m=2.0) == path_loss_db(2.0, min_distance_m=2.0)


def test_channel_gain_values():
    assert channel_gain(0.0, 1.0) == pytest.approx(1.0)
    assert channel_gain(-90.5, 1.0) == pytest.approx(8.913e-10, rel=1e-3)


def test_rayleigh_power_moments():
    rng = np.random.default_rng(6)
    samples = rayleigh_power(rng, size=10**6)
    assert abs(samples.mean() - 1.0) < 0.01
    # tail mass matches the unit-mean exponential law
    assert abs(np.mean(samples > 1.0) - math.exp(-1)) < 0.002
    # and agrees with squared-magnitude complex-Gaussian sampling
    z = rng.normal(0, math.sqrt(0.5), 10**6) ** 2 + rng.normal(0, math.sqrt(0.5), 10**6) ** 2
    assert abs(samples.mean() - z.mean()) < 0.01


def test_db_conversions_round_trip():
    rng = np.random.default_rng(8)
    dbm = rng.uniform(-200, 60, 1000)
    assert np.allclose(mw_to_dbm(dbm_to_mw(dbm)), dbm, rtol=1e-10)
    mw = 10 ** rng.uniform(-20, 6, 1000)
    assert np.allclose(dbm_to_mw(mw_to_dbm(mw)), mw, rtol=1e-10)


def test_uplink_rate_limits():
    assert uplink_rate(0.0, RADIO, 23.0, 1e-9) == 0.0
    assert uplink_rate(0.5, RADIO, 23.0, 0.0) == 0.0


def test_uplink_rate_hand_value():
    h = 10 ** (-90.5 / 10)
    rate = uplink_rate(1.0, RADIO, 23.0, h)
    expected = oracle_uplink_rate(1.0, 20e6, 23.0, -176.0, h)
    assert rate == pytest.approx(expected, rel=1e-12)
    snr_db = 23.0 - 90.5 + 176.0 - 10 * math.log10(20e6)
    assert snr_db == pytest.approx(35.5, abs=0.05)
    assert rate == pytest.approx(2.36e8, rel=0.01)


def test_uplink_rate_monotone_in_share():
    rng = np.random.default_rng(9)
    for _ in range(50):
        h = 10 ** rng.uniform(-12, -6)
        shares = np.linspace(0.0, 1.0, 101)
        rates = uplink_rate(shares, RADIO, 23.0, h)
        assert np.all(np.diff(rates) >= -1e-9 * rates[-1])


def test_downlink_rate_hand_value():
    h = 10 ** (-90.5 / 10)
    rate = downlink_rate(RADIO, h)
    expected = oracle_downlink_rate(40e6, 43.0, -176.0, h)
    assert rate == pytest.approx(expected, rel=1e-12)
    assert rate == pytest.approx(6.98e8, rel=0.01)
    assert downlink_rate(RADIO, 0.0) == 0.0


def test_downlink_rate_high_snr_doubling():
    h = 10 ** (-90.5 / 10)
    gain = downlink_rate(RADIO, 2 * h) - downlink_rate(RADIO, h)
    assert gain == pytest.approx(RADIO.w_dw_hz, rel=1e-3)  # one extra bit per symbol


# ---------------------------------------------------------------------------
# delays


def test_uplink_delay_cases():
    assert uplink_delay(8e6, 1e6, True, 1e8) == pytest.approx(8.0)
    assert uplink_delay(8e6, 1e6, False, 1e8) == pytest.approx(8.08)
    assert uplink_delay(0.0, 1e6, False, 1e8) == 0.0


def test_uplink_delay_penalty_on_dead_link():
    assert uplink_delay(8e6, 0.0, True, 1e8, penalty_s=123.0) == pytest.approx(123.0)
    assert uplink_delay(0.0, 0.0, True, 1e8, penalty_s=123.0) == 0.0


def test_downlink_delay_cases():
    assert downlink_delay(8e6, 2e6, True, 1e8) == pytest.approx(4.0)
    assert downlink_delay(8e6, 2e6, False, 1e8) == pytest.approx(4.08)
    assert downlink_delay(0.0, 2e6, True, 1e8) == 0.0


# ---------------------------------------------------------------------------
# generation quality and delay


def test_quality_reference_points():
    spec = REFERENCE_SPEC
    assert generation_quality(60 / 1000, 1000.0, spec, True) == pytest.approx(110.0)
    assert generation_quality(115 / 1000, 1000.0, spec, True) == pytest.approx(69.0)
    assert generation_quality(1.0, 1000.0, spec, True) == pytest.approx(28.0)
    assert generation_quality(0.0, 1000.0, spec, False) == pytest.approx(28.0)


def test_quality_continuous_and_monotone():
    rng = np.random.default_rng(10)
    for _ in range(100):
        a1 = rng.uniform(50, 100)
        a3 = rng.uniform(150, 200)
        spec = GenAiModelSpec(1, 5.0, 8e7, a1, rng.uniform(100, 150), a3,
                              rng.uniform(1, 50), rng.uniform(0.01, 0.5), rng.uniform(0.1, 10))
        left = generation_quality(a1 / 1000 - 1e-12, 1000.0, spec, True)
        right = generation_quality(a1 / 1000 + 1e-12, 1000.0, spec, True)
        assert left == pytest.approx(right, abs=1e-6)
        left = generation_quality(a3 / 1000 - 1e-12, 1000.0, spec, True)
        right = generation_quality(a3 / 1000 + 1e-12, 1000.0, spec, True)
        assert left == pytest.approx(right, abs=1e-6)
        xs = np.linspace(0, 1, 257)
        qs = generation_quality(xs, 1000.0, spec, True)
        assert np.all(np.diff(qs) <= 1e-12)


def test_generation_delay_reference_points():
    spec = REFERENCE_SPEC
    assert generation_delay(0.0, 1000.0, spec, True) == pytest.approx(5.74)
    assert generation_delay(0.17, 1000.0, spec, True) == pytest.approx(36.34)
    for x in (0.0, 0.3, 1.0):
        assert generation_delay(x, 1000.0, spec, False) == pytest.approx(36.34)


def test_generation_delay_affine():
    rng = np.random.default_rng(11)
    for _ in range(100):
        x1, x2 = rng.uniform(0, 1, 2)
        f = lambda x: generation_delay(x, 1000.0, REFERENCE_SPEC, True)
        assert f(x1) + f(x2) == pytest.approx(2 * f((x1 + x2) / 2), abs=1e-9)


def test_utility_cases():
    assert utility(1.0, 10.0, 999.0) == pytest.approx(10.0)
    assert utility(0.7, 36.34, 28.0) == pytest.approx(33.838)
    assert utility(0.0, 10.0, 42.0) == pytest.approx(42.0)


def test_cloud_path_never_faster_below_saturation():
    # with the same ratios, a miss pays backhaul on both legs and the full
    # step schedule, so it can only be slower while x*L <= a3
    rng = np.random.default_rng(12)
    for _ in range(200):
        spec = REFERENCE_SPEC
        x = rng.uniform(0, spec.a3 / 1000.0)
        h = 10 ** rng.uniform(-11, -7)
        b = rng.uniform(0.05, 1.0)
        d_in = rng.uniform(4e7, 8e7)
        r_up = uplink_rate(b, RADIO, 23.0, h)
        r_dw = downlink_rate(RADIO, h)
        args = (d_in, r_up)
        cached_total = total_delay(
            uplink_delay(*args, True, RADIO.r_bc_bps),
            downlink_delay(spec.output_bits, r_dw, True, RADIO.r_cb_bps),
            generation_delay(x, 1000.0, spec, True),
        )
        cloud_total = total_delay(
            uplink_delay(*args, False, RADIO.r_bc_bps),
            downlink_delay(spec.output_bits, r_dw, False, RADIO.r_cb_bps),
            generation_delay(x, 1000.0, spec, False),
        )
        assert cloud_total >= cached_total - 1e-9


def test_model_spec_validation():
    with pytest.raises(ConfigError):
        GenAiModelSpec(1, 5.0, 8e7, 180.0, 110.0, 170.0, 28.0, 0.18, 5.74)  # a1 >= a3
    with pytest.raises(ConfigError):
        GenAiModelSpec(1, 5.0, 8e7, 60.0, 110.0, 170.0, 120.0, 0.18, 5.74)  # a4 >= a2
    with pytest.raises(ConfigError):
        GenAiModelSpec(1, -5.0, 8e7, 60.0, 110.0, 170.0, 28.0, 0.18, 5.74)
