"""Episodic MDP wrapper around the physical models.

One episode is a fixed number of time slots.  Each slot the agent sees a
flat observation vector, proposes a raw action in [0, 1]^(M + 2N), the raw
action is projected onto the feasible set (binary cache fill plus budgeted
bandwidth and denoising-step shares), and the slot cost of every user is
charged.  The reward is the negated mean per-user cost, so maximising
reward minimises the long-run service objective.

All slot randomness (positions, fading, requests, input sizes, popularity
transitions) is exogenous: the next state never depends on the action.
Policies compared against the same generator stream therefore face
identical request/channel realisations.
"""

from __future__ import annotations

from dataclasses import dataclass
from types import SimpleNamespace

import numpy as np

from .config import SystemConfig
from .errors import EpisodeFinished
from .models import (
    UserSnapshot,
    advance_popularity,
    channel_gain,
    downlink_delay,
    downlink_rate,
    generation_delay,
    generation_quality,
    path_loss_db,
    rayleigh_power,
    sample_requests,
    uplink_delay,
    uplink_rate,
    utility,
    zipf_distribution,
)


@dataclass
class EnvState:
    """Observable world at the start of one slot."""

    slot_index: int  # 1-based
    popularity_index: int  # 1..3, selects the active skewness value
    users: list[UserSnapshot]
    cached_previous: np.ndarray  # previous slot's cache fill, diagnostics only


@dataclass
class FeasibleAction:
    """A cache fill plus resource shares that satisfy every budget."""

    rho: np.ndarray  # (M,) binary cache decisions
    b: np.ndarray  # (N,) uplink bandwidth shares
    x: np.ndarray  # (N,) denoising-step shares


@dataclass
class StepOutcome:
    """Everything one slot produced: reward, per-user records, next state."""

    reward: float
    hit: np.ndarray
    uplink_delay_s: np.ndarray
    downlink_delay_s: np.ndarray
    generation_delay_s: np.ndarray
    quality: np.ndarray
    total_delay_s: np.ndarray  # capped at the scenario penalty delay
    utility: np.ndarray
    next_state: EnvState
    done: bool


def state_dim(config: SystemConfig) -> int:
    n, m = config.n_users, config.m_models
    return 1 + n + n * m + n + n


def action_dim(config: SystemConfig) -> int:
    return config.m_models + 2 * config.n_users


# ---------------------------------------------------------------------------
# state sampling


def _sample_users(config: SystemConfig, gamma: float, rng: np.random.Generator) -> list[UserSnapshot]:
    n = config.n_users
    positions = rng.uniform(0.0, config.area_m, size=(n, 2))
    fades = rayleigh_power(rng, size=n)
    requests = sample_requests(zipf_distribution(gamma, config.m_models), n, rng)
    input_bits = rng.uniform(*config.d_in_bits_range, size=n)
    bs = np.asarray(config.radio.bs_position)
    dist = np.linalg.norm(positions - bs, axis=1)
    gains = channel_gain(path_loss_db(dist, config.min_distance_m), fades)
    return [
        UserSnapshot(
            position=(float(positions[i, 0]), float(positions[i, 1])),
            transmit_power_dbm=config.p_user_dbm,
            request_model=int(requests[i]),
            input_bits=float(input_bits[i]),
            channel_gain=float(gains[i]),
        )
        for i in range(n)
    ]


def reset(config: SystemConfig, rng: np.random.Generator) -> EnvState:
    """Fresh episode: uniform initial popularity state, fresh user draws."""
    config.validate()
    popularity = int(rng.integers(1, 4))
    gamma = config.chain.gamma_values[popularity - 1]
    users = _sample_users(config, gamma, rng)
    return EnvState(
        slot_index=1,
        popularity_index=popularity,
        users=users,
        cached_previous=np.zeros(config.m_models, dtype=np.int8),
    )


# ---------------------------------------------------------------------------
# observation encoding


def observe(state: EnvState, config: SystemConfig) -> np.ndarray:
    """Flatten a slot state into a vector with components near [0, 1].

    Layout: skewness (1), per-user channel gain on a clipped dB scale (N),
    one-hot request per user (N*M), input size (N), output size of the
    requested model (N).
    """
    gammas = config.chain.gamma_values
    g_lo, g_hi = min(gammas), max(gammas)
    gamma = gammas[state.popularity_index - 1]
    gamma_norm = (gamma - g_lo) / max(g_hi - g_lo, 1e-12)

    gains = np.array([u.channel_gain for u in state.users])
    lo_db, hi_db = config.gain_norm_db
    with np.errstate(divide="ignore"):
        gain_db = 10.0 * np.log10(gains)
    gain_norm = np.clip((gain_db - lo_db) / (hi_db - lo_db), 0.0, 1.0)

    req_idx = np.array([u.request_model - 1 for u in state.users])
    one_hot = np.zeros((config.n_users, config.m_models))
    one_hot[np.arange(config.n_users), req_idx] = 1.0

    d_in = np.array([u.input_bits for u in state.users]) / config.d_in_bits_range[1]
    d_op = config.model_bank.output_bits[req_idx] / config.d_op_bits_range[1]

    return np.concatenate(([gamma_norm], gain_norm, one_hot.ravel(), d_in, d_op))


# ---------------------------------------------------------------------------
# action projection


def _cap_unit_sum(shares: np.ndarray) -> np.ndarray:
    """Scale a nonnegative vector down until its float sum is <= 1 exactly."""
    v = np.array(shares, dtype=float)
    total = v.sum()
    while total > 1.0:
        v = v / total
        total = v.sum()
    return v


def project_action(raw: np.ndarray, config: SystemConfig) -> FeasibleAction:
    """Map a raw [0, 1] vector onto the feasible action set.

    Cache fill is greedy by descending score (ties resolved toward the
    lower model index): every model that still fits the remaining capacity
    is taken, so the scores decide ordering rather than how full the cache
    gets.  Resource shares are kept as proposed unless their sum exceeds
    the budget, in which case they are rescaled onto the simplex; leaving
    budget unused is allowed.
    """
    m, n = config.m_models, config.n_users
    raw = np.clip(np.asarray(raw, dtype=float), 0.0, 1.0)
    if raw.shape != (m + 2 * n,):
        raise ValueError(f"raw action must have shape ({m + 2 * n},), got {raw.shape}")

    scores = raw[:m]
    order = np.argsort(-scores, kind="stable")
    rho = np.zeros(m, dtype=np.int8)
    remaining = config.capacity_gb
    sizes = config.model_bank.storage_gb
    for idx in order:
        if sizes[idx] <= remaining:
            rho[idx] = 1
            remaining -= sizes[idx]

    b = _cap_unit_sum(raw[m : m + n])
    x = _cap_unit_sum(raw[m + n :])
    return FeasibleAction(rho=rho, b=b, x=x)


def action_is_feasible(action: FeasibleAction, config: SystemConfig) -> bool:
    """Exact check of every action constraint (no tolerances)."""
    rho = np.asarray(action.rho)
    b = np.asarray(action.b)
    x = np.asarray(action.x)
    return bool(
        rho.shape == (config.m_models,)
        and b.shape == (config.n_users,)
        and x.shape == (config.n_users,)
        and np.all((rho == 0) | (rho == 1))
        and float(rho @ config.model_bank.storage_gb) <= config.capacity_gb
        and np.all(b >= 0.0)
        and np.all(b <= 1.0)
        and np.all(x >= 0.0)
        and np.all(x <= 1.0)
        and float(b.sum()) <= 1.0
        and float(x.sum()) <= 1.0
    )


# ---------------------------------------------------------------------------
# slot cost evaluation (shared with the genetic-algorithm baseline)


@dataclass
class SlotView:
    """Per-user arrays of one slot, precomputed for repeated cost evaluation."""

    gains: np.ndarray
    input_bits: np.ndarray
    p_dbm: np.ndarray
    req_idx: np.ndarray  # 0-based request indices
    specs: SimpleNamespace  # per-user model constants gathered by request


def slot_view(state: EnvState, config: SystemConfig) -> SlotView:
    req_idx = np.array([u.request_model - 1 for u in state.users])
    bank = config.model_bank
    specs = SimpleNamespace(
        output_bits=bank.output_bits[req_idx],
        a1=bank.a1[req_idx],
        a2=bank.a2[req_idx],
        a3=bank.a3[req_idx],
        a4=bank.a4[req_idx],
        b1=bank.b1[req_idx],
        b2=bank.b2[req_idx],
    )
    return SlotView(
        gains=np.array([u.channel_gain for u in state.users]),
        input_bits=np.array([u.input_bits for u in state.users]),
        p_dbm=np.array([u.transmit_power_dbm for u in state.users]),
        req_idx=req_idx,
        specs=specs,
    )


def evaluate_slot(view: SlotView, rho, b, x, config: SystemConfig) -> SimpleNamespace:
    """Charge one slot under a feasible action; broadcasts over leading axes.

    ``rho``/``b``/``x`` may carry leading batch dimensions (a population of
    candidate actions); per-user results then come back batch-shaped.  The
    per-user total delay is capped at the scenario penalty so a deep fade
    cannot produce an unbounded cost.
    """
    rho = np.asarray(rho)
    hit = rho[..., view.req_idx] > 0
    penalty = config.penalty_delay_s

    rate_up = uplink_rate(b, config.radio, view.p_dbm, view.gains)
    d_up = uplink_delay(view.input_bits, rate_up, hit, config.radio.r_bc_bps, penalty)
    rate_dw = downlink_rate(config.radio, view.gains)
    d_dw = downlink_delay(view.specs.output_bits, rate_dw, hit, config.radio.r_cb_bps, penalty)
    quality = generation_quality(x, config.total_denoising_steps, view.specs, hit)
    d_gen = generation_delay(x, config.total_denoising_steps, view.specs, hit)

    d_total = np.minimum(d_up + d_dw + d_gen, penalty)
    cost = utility(config.alpha, d_total, quality)
    return SimpleNamespace(
        hit=hit,
        uplink_delay_s=d_up,
        downlink_delay_s=d_dw,
        generation_delay_s=d_gen,
        quality=quality,
        total_delay_s=d_total,
        utility=cost,
    )


# ---------------------------------------------------------------------------
# stepping


def step(
    state: EnvState,
    action: FeasibleAction,
    config: SystemConfig,
    rng: np.random.Generator,
) -> StepOutcome:
    """Charge the current slot and sample the next one.

    The final slot of an episode still samples a successor state (the
    horizon is a time limit, not a terminal condition, so value bootstraps
    need somewhere to point); attempting to step past that successor
    raises :class:`EpisodeFinished`.
    """
    horizon = config.slots_per_episode
    if state.slot_index > horizon:
        raise EpisodeFinished(f"episode is over after slot {horizon}")

    view = slot_view(state, config)
    costs = evaluate_slot(view, action.rho, action.b, action.x, config)
    reward = -float(np.mean(costs.utility))

    next_popularity = advance_popularity(config.chain, state.popularity_index, rng)
    gamma = config.chain.gamma_values[next_popularity - 1]
    next_state = EnvState(
        slot_index=state.slot_index + 1,
        popularity_index=next_popularity,
        users=_sample_users(config, gamma, rng),
        cached_previous=np.asarray(action.rho, dtype=np.int8).copy(),
    )
    return StepOutcome(
        reward=reward,
        hit=costs.hit,
        uplink_delay_s=costs.uplink_delay_s,
        downlink_delay_s=costs.downlink_delay_s,
        generation_delay_s=costs.generation_delay_s,
        quality=costs.quality,
        total_delay_s=costs.total_delay_s,
        utility=costs.utility,
        next_state=next_state,
        done=state.slot_index == horizon,
    )


class Environment:
    """Single-owner convenience wrapper holding (config, rng, current state)."""

    def __init__(self, config: SystemConfig, rng: np.random.Generator):
        self.config = config
        self.rng = rng
        self.state: EnvState | None = None

    def reset(self) -> EnvState:
        self.state = reset(self.config, self.rng)
        return self.state

    def step(self, action: FeasibleAction) -> StepOutcome:
        if self.state is None:
            raise RuntimeError("reset() must be called before step()")
        outcome = step(self.state, action, self.config, self.rng)
        self.state = outcome.next_state
        return outcome


# ---------------------------------------------------------------------------
# episode metrics


def objective_average(traces: list[StepOutcome]) -> float:
    """Mean per-user cost over every (slot, user) pair of an episode."""
    if not traces:
        raise ValueError("no slot outcomes to average")
    return float(np.mean([out.utility for out in traces]))


def hit_ratio(traces: list[StepOutcome]) -> float:
    """Fraction of user requests whose model was cached when asked."""
    if not traces:
        raise ValueError("no slot outcomes to average")
    return float(np.mean([out.hit for out in traces]))
