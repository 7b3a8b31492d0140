"""Baseline policy checks: crossover/mutation operator laws, the genetic
solver against a brute-force grid oracle, and the random baseline's
feasibility guarantees."""

import numpy as np
import pytest
from helpers import toy_dominant_config
from scipy import stats

from aigc_edge import (
    ConfigError,
    GaConfig,
    action_is_feasible,
    build_scenario,
    downlink_rate,
    hcras_solve,
    poly_mutation,
    rcars_action,
    reset,
    sbx_crossover,
    step,
    uplink_rate,
)
from aigc_edge.env import evaluate_slot, slot_view


# ---------------------------------------------------------------------------
# simulated binary crossover


def test_sbx_identical_parents_unchanged():
    rng = np.random.default_rng(0)
    parent = rng.random(12)
    child_a, child_b = sbx_crossover(parent, parent.copy(), 15.0, rng)
    assert np.allclose(child_a, parent)
    assert np.allclose(child_b, parent)


def test_sbx_preserves_midpoint():
    rng = np.random.default_rng(1)
    # parents close to the centre, so clipping cannot engage
    pa = rng.uniform(0.45, 0.55, 2000)
    pb = rng.uniform(0.45, 0.55, 2000)
    child_a, child_b = sbx_crossover(pa, pb, 15.0, rng)
    assert np.allclose((child_a + child_b) / 2, (pa + pb) / 2, atol=1e-12)


def test_sbx_mismatched_parents_rejected():
    with pytest.raises(ValueError):
        sbx_crossover(np.zeros(3), np.zeros(4), 15.0, np.random.default_rng(0))


def test_sbx_spread_distribution_chi_square():
    # the spread factor beta = (child_b - child_a) / (parent_b - parent_a)
    # must follow the polynomial density 0.5 (eta+1) beta^eta on [0, 1] and
    # 0.5 (eta+1) beta^-(eta+2) beyond 1
    eta = 15.0
    n = 10**6
    pa = np.full(n, 0.25)
    pb = np.full(n, 0.75)
    child_a, child_b = sbx_crossover(pa, pb, eta, np.random.default_rng(2))
    beta = (child_b - child_a) / 0.5

    def cdf(v):
        v = np.asarray(v, dtype=float)
        low = 0.5 * np.clip(v, 0, 1) ** (eta + 1)
        high = 1.0 - 0.5 * np.maximum(v, 1.0) ** -(eta + 1)
        return np.where(v <= 1.0, low, high)

    edges = np.concatenate([np.linspace(0.0, 1.4, 15), [2.0]])
    observed, _ = np.histogram(beta, bins=np.concatenate([edges, [np.inf]]))
    probs = np.diff(np.concatenate([cdf(edges), [1.0]]))
    _, p = stats.chisquare(observed, probs * n)
    assert p > 0.001


# ---------------------------------------------------------------------------
# polynomial mutation


def test_mutation_probability_zero_is_identity():
    rng = np.random.default_rng(3)
    chrom = rng.random(30)
    assert np.array_equal(poly_mutation(chrom, 20.0, 0.0, rng), chrom)


def test_mutation_at_lower_bound_moves_up_only():
    rng = np.random.default_rng(4)
    chrom = np.zeros(10_000)
    mutated = poly_mutation(chrom, 20.0, 1.0, rng)
    assert np.all(mutated >= 0.0)
    assert np.any(mutated > 0.0)


def test_mutation_at_upper_bound_moves_down_only():
    rng = np.random.default_rng(5)
    mutated = poly_mutation(np.ones(10_000), 20.0, 1.0, rng)
    assert np.all(mutated <= 1.0)
    assert np.any(mutated < 1.0)


def test_mutation_spread_shrinks_with_eta():
    rng = np.random.default_rng(6)
    base = np.full(10**5, 0.5)
    wide = np.abs(poly_mutation(base, 20.0, 1.0, rng) - 0.5)
    narrow = np.abs(poly_mutation(base, 100.0, 1.0, rng) - 0.5)
    assert narrow.mean() < wide.mean()


def test_ga_config_validation():
    with pytest.raises(ConfigError):
        GaConfig(population=3)  # odd
    with pytest.raises(ConfigError):
        GaConfig(generations=0)


# ---------------------------------------------------------------------------
# genetic solver


def grid_oracle_single_user(cfg, state, resolution=1000):
    """Brute-force the one-user problem on a (b, x) grid with plain math.

    The single model always fits the cache, so the projection caches it and
    the search is purely over the two resource shares.
    """
    user = state.users[0]
    spec = cfg.models[user.request_model - 1]
    bs = np.linspace(0.0, 1.0, resolution + 1)
    xs = np.linspace(0.0, 1.0, resolution + 1)
    rate_up = uplink_rate(bs, cfg.radio, cfg.p_user_dbm, user.channel_gain)
    with np.errstate(divide="ignore"):
        d_up = np.where(rate_up > 0, user.input_bits / rate_up, cfg.penalty_delay_s)
    d_dw = spec.output_bits / downlink_rate(cfg.radio, user.channel_gain)
    steps = xs * cfg.total_denoising_steps
    quality = np.where(
        steps <= spec.a1,
        spec.a2,
        np.where(
            steps >= spec.a3,
            spec.a4,
            spec.a2 + (spec.a4 - spec.a2) / (spec.a3 - spec.a1) * (steps - spec.a1),
        ),
    )
    d_gen = spec.b1 * steps + spec.b2
    total = np.minimum(d_up[:, None] + d_dw + d_gen[None, :], cfg.penalty_delay_s)
    utilities = cfg.alpha * total + (1 - cfg.alpha) * quality[None, :]
    return float(utilities.min())


def test_hcras_finds_single_user_optimum():
    cfg = build_scenario(
        n_users=1,
        m_models=1,
        scenario_seed=1,
        storage_gb_range=(5.0, 5.0),
        a1_range=(60.0, 60.0),
        a2_range=(110.0, 110.0),
        a3_range=(170.0, 170.0),
        a4_range=(28.0, 28.0),
        b1_range=(0.18, 0.18),
        b2_range=(5.74, 5.74),
    )
    state = reset(cfg, np.random.default_rng(7))
    best_utility = grid_oracle_single_user(cfg, state)

    ga = GaConfig(population=30, generations=60)
    action = hcras_solve(state, cfg, ga, np.random.default_rng(8))
    achieved = float(
        evaluate_slot(slot_view(state, cfg), action.rho, action.b, action.x, cfg).utility.mean()
    )
    assert achieved <= best_utility * 1.01 + 1e-9


def test_hcras_constant_fitness_for_uniform_population():
    cfg = toy_dominant_config(scenario_seed=2, slots=5)
    state = reset(cfg, np.random.default_rng(9))
    ga = GaConfig(population=8, generations=20, mutation_prob=0.0)
    dim = cfg.m_models + 2 * cfg.n_users
    uniform_pop = np.tile(np.random.default_rng(10).random(dim), (8, 1))
    history: list = []
    hcras_solve(state, cfg, ga, np.random.default_rng(11),
                initial_population=uniform_pop, fitness_history=history)
    assert len(set(history)) == 1


def test_hcras_best_fitness_monotone():
    cfg = toy_dominant_config(scenario_seed=3, slots=5)
    state = reset(cfg, np.random.default_rng(12))
    history: list = []
    hcras_solve(state, cfg, GaConfig(population=20, generations=40), np.random.default_rng(13),
                fitness_history=history)
    assert all(b <= a + 1e-12 for a, b in zip(history, history[1:]))


def test_hcras_output_feasible_and_reproducible():
    cfg = build_scenario(n_users=4, m_models=5, scenario_seed=4)
    state = reset(cfg, np.random.default_rng(14))
    ga = GaConfig(population=10, generations=10)
    a1 = hcras_solve(state, cfg, ga, np.random.default_rng(15))
    a2 = hcras_solve(state, cfg, ga, np.random.default_rng(15))
    assert action_is_feasible(a1, cfg)
    assert np.array_equal(a1.rho, a2.rho)
    assert np.array_equal(a1.b, a2.b)
    assert np.array_equal(a1.x, a2.x)


def test_hcras_fitness_equals_environment_cost():
    cfg = build_scenario(n_users=3, m_models=4, scenario_seed=5)
    state = reset(cfg, np.random.default_rng(16))
    action = hcras_solve(state, cfg, GaConfig(population=10, generations=5), np.random.default_rng(17))
    direct = evaluate_slot(slot_view(state, cfg), action.rho, action.b, action.x, cfg).utility
    outcome = step(state, action, cfg, np.random.default_rng(18))
    assert np.array_equal(direct, outcome.utility)


# ---------------------------------------------------------------------------
# random baseline


def test_rcars_equal_split():
    cfg = build_scenario(n_users=4, m_models=3, scenario_seed=6)
    state = reset(cfg, np.random.default_rng(19))
    action = rcars_action(state, cfg, np.random.default_rng(20))
    assert np.allclose(action.b, 0.25)
    assert np.allclose(action.x, 0.25)


def test_rcars_empty_cache_when_nothing_fits():
    cfg = build_scenario(n_users=2, m_models=3, scenario_seed=7,
                         storage_gb_range=(30.0, 40.0), capacity_gb=20.0)
    state = reset(cfg, np.random.default_rng(21))
    action = rcars_action(state, cfg, np.random.default_rng(22))
    assert np.all(action.rho == 0)


def test_rcars_never_exceeds_capacity():
    cfg = build_scenario(n_users=3, m_models=8, scenario_seed=8)
    state = reset(cfg, np.random.default_rng(23))
    sizes = cfg.model_bank.storage_gb
    rng = np.random.default_rng(24)
    for _ in range(5000):
        action = rcars_action(state, cfg, rng)
        assert float(action.rho @ sizes) <= cfg.capacity_gb
        assert action_is_feasible(action, cfg)


def test_rcars_fills_until_nothing_fits():
    cfg = build_scenario(n_users=2, m_models=6, scenario_seed=9)
    state = reset(cfg, np.random.default_rng(25))
    sizes = cfg.model_bank.storage_gb
    rng = np.random.default_rng(26)
    for _ in range(200):
        action = rcars_action(state, cfg, rng)
        remaining = cfg.capacity_gb - float(action.rho @ sizes)
        uncached = sizes[np.asarray(action.rho) == 0]
        assert uncached.size == 0 or np.all(uncached > remaining)
