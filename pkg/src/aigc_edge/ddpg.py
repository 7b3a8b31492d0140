"""Deterministic-policy actor-critic learner with replay and target nets.

The actor maps the slot observation to a raw action in [0, 1]^(M + 2N)
through a sigmoid output layer; the critic scores (observation, raw
action) pairs.  Raw (pre-projection) actions are what the replay buffer
stores, so the critic learns the value surface the actor actually moves
on; the environment-side projection is part of the reward it observes.

Because slot costs sit far from zero while their action-driven spread is
comparatively small, the critic target can subtract a constant reward
offset.  The shift is identical for every action in a state, so the
learned policy is unchanged, but the critic starts near the interesting
part of the value surface instead of spending its updates chasing a large
constant.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import SystemConfig
from .env import Environment, action_dim, observe, project_action, state_dim
from .errors import ConfigError
from .nn import AdamState, MlpParams, adam_step, mlp_backward, mlp_forward, mlp_init, soft_update


@dataclass(frozen=True)
class DdpgHyperparams:
    actor_lr: float = 1e-4
    critic_lr: float = 1e-3
    discount: float = 0.99
    target_rate: float = 0.005
    batch_size: int = 64
    buffer_capacity: int = 100_000
    sigma_start: float = 0.3
    sigma_end: float = 0.05
    sigma_decay_fraction: float = 0.6  # share of episodes over which noise anneals
    episodes: int = 500
    hidden: tuple[int, ...] = (256, 256)
    reward_offset: float | None = None  # None -> estimated when updates begin
    updates_per_slot: int = 1  # replay ratio; raises sample reuse at small horizons

    def __post_init__(self):
        if not 0.0 <= self.discount < 1.0:
            raise ConfigError("discount must lie in [0, 1)")
        if not 0.0 < self.target_rate <= 1.0:
            raise ConfigError("target blend rate must lie in (0, 1]")
        if self.batch_size < 1:
            raise ConfigError("batch size must be at least 1")
        if self.episodes < 1:
            raise ConfigError("need at least one training episode")

    def sigma_at(self, episode: int) -> float:
        """Linear anneal from sigma_start to sigma_end, then flat."""
        decay = max(1, int(round(self.sigma_decay_fraction * self.episodes)))
        frac = min(episode / decay, 1.0)
        return self.sigma_start + (self.sigma_end - self.sigma_start) * frac


class ReplayBuffer:
    """Fixed-capacity ring of transitions; storage grows on demand."""

    def __init__(self, capacity: int, state_dim: int, action_dim: int):
        if capacity < 1:
            raise ConfigError("replay capacity must be at least 1")
        self.capacity = capacity
        self._allocated = min(capacity, 4096)
        self._s = np.empty((self._allocated, state_dim))
        self._a = np.empty((self._allocated, action_dim))
        self._r = np.empty(self._allocated)
        self._s2 = np.empty((self._allocated, state_dim))
        self._terminal = np.empty(self._allocated)
        self.size = 0
        self.inserted = 0  # lifetime counter, keeps ring eviction simple

    def _grow(self):
        new = min(self.capacity, self._allocated * 2)
        for name in ("_s", "_a", "_r", "_s2", "_terminal"):
            arr = getattr(self, name)
            grown = np.empty((new,) + arr.shape[1:])
            grown[: self.size] = arr[: self.size]
            setattr(self, name, grown)
        self._allocated = new

    def push(self, s, a, r, s2, terminal: bool) -> None:
        slot = self.inserted % self.capacity
        if slot >= self._allocated:
            self._grow()
        self._s[slot] = s
        self._a[slot] = a
        self._r[slot] = r
        self._s2[slot] = s2
        self._terminal[slot] = float(terminal)
        self.inserted += 1
        self.size = min(self.inserted, self.capacity)

    def __len__(self) -> int:
        return self.size

    def mean_reward(self) -> float:
        return float(self._r[: self.size].mean())

    def sample(self, batch_size: int, rng: np.random.Generator):
        """Uniform sample with replacement, or None while under-filled."""
        if self.size < batch_size:
            return None
        idx = rng.integers(0, self.size, size=batch_size)
        return (
            self._s[idx].copy(),
            self._a[idx].copy(),
            self._r[idx].copy(),
            self._s2[idx].copy(),
            self._terminal[idx].copy(),
        )


def act(actor: MlpParams, state_vec: np.ndarray, sigma: float, rng: np.random.Generator) -> np.ndarray:
    """Actor output plus clipped Gaussian exploration noise.

    With sigma == 0 no noise is drawn at all, so evaluation consumes no
    randomness and is exactly the actor forward pass.
    """
    out, _ = mlp_forward(actor, state_vec)
    if sigma > 0.0:
        out = out + rng.normal(0.0, sigma, size=out.shape)
    return np.clip(out, 0.0, 1.0)


def critic_update(
    critic: MlpParams,
    critic_target: MlpParams,
    actor_target: MlpParams,
    batch,
    discount: float,
    lr: float,
    opt_state: AdamState,
    reward_offset: float = 0.0,
) -> float:
    """One temporal-difference regression step; returns the pre-step loss."""
    s, a, r, s2, terminal = batch
    e = len(r)
    a2, _ = mlp_forward(actor_target, s2)
    q2, _ = mlp_forward(critic_target, np.hstack([s2, a2]))
    target = (r - reward_offset) + discount * (1.0 - terminal) * q2[:, 0]
    q, cache = mlp_forward(critic, np.hstack([s, a]))
    err = q[:, 0] - target
    loss = 0.5 * float(np.mean(err**2))
    if not np.isfinite(loss):
        opt_state.skipped += 1
        return loss
    grads, _ = mlp_backward(critic, cache, (err / e)[:, None])
    adam_step(critic, grads, opt_state, lr)
    return loss


def actor_update(
    actor: MlpParams,
    critic: MlpParams,
    batch,
    lr: float,
    opt_state: AdamState,
) -> float:
    """Ascend the critic's score of the actor's own actions.

    The critic is held fixed: only its action-input gradient is used,
    chained into the actor parameters.  Returns the pre-step mean score.
    """
    s = batch[0]
    e = len(s)
    a_pi, actor_cache = mlp_forward(actor, s)
    q, critic_cache = mlp_forward(critic, np.hstack([s, a_pi]))
    objective = float(np.mean(q[:, 0]))
    _, input_grad = mlp_backward(critic, critic_cache, np.full((e, 1), 1.0 / e))
    dq_da = input_grad[:, s.shape[1] :]
    grads, _ = mlp_backward(actor, actor_cache, dq_da)
    ascent = [(-dw, -db) for dw, db in grads]
    adam_step(actor, ascent, opt_state, lr)
    return objective


@dataclass
class DdpgAgent:
    actor: MlpParams
    critic: MlpParams
    actor_target: MlpParams
    critic_target: MlpParams
    actor_opt: AdamState
    critic_opt: AdamState
    hyper: DdpgHyperparams

    @classmethod
    def create(cls, config: SystemConfig, hyper: DdpgHyperparams, rng: np.random.Generator) -> "DdpgAgent":
        ds, da = state_dim(config), action_dim(config)
        actor = mlp_init([ds, *hyper.hidden, da], ["relu"] * len(hyper.hidden) + ["sigmoid"], rng)
        critic = mlp_init([ds + da, *hyper.hidden, 1], ["relu"] * len(hyper.hidden) + ["identity"], rng)
        return cls(
            actor=actor,
            critic=critic,
            actor_target=actor.copy(),
            critic_target=critic.copy(),
            actor_opt=AdamState.for_params(actor),
            critic_opt=AdamState.for_params(critic),
            hyper=hyper,
        )

    def raw_action(self, state_vec: np.ndarray) -> np.ndarray:
        """Deterministic (noise-free) raw action for evaluation."""
        out, _ = mlp_forward(self.actor, state_vec)
        return np.clip(out, 0.0, 1.0)


@dataclass
class TrainingLog:
    episode_reward: list[float] = field(default_factory=list)
    critic_loss: list[float] = field(default_factory=list)
    actor_objective: list[float] = field(default_factory=list)
    hit_ratio: list[float] = field(default_factory=list)
    sigma: list[float] = field(default_factory=list)
    reward_offset: float = 0.0
    skipped_updates: int = 0


def train(env: Environment, hyper: DdpgHyperparams, rng: np.random.Generator) -> tuple[DdpgAgent, TrainingLog]:
    """Full training run: explore, store raw-action transitions, update.

    Every slot performs one critic and one actor update (plus the soft
    target blends) as soon as the buffer holds a full batch.  The episode
    horizon is treated as a time limit, so no transition is marked
    terminal and bootstrapping is never cut.
    """
    config = env.config
    agent = DdpgAgent.create(config, hyper, rng)
    buffer = ReplayBuffer(hyper.buffer_capacity, state_dim(config), action_dim(config))
    log = TrainingLog()
    offset = hyper.reward_offset
    horizon = config.slots_per_episode

    for episode in range(hyper.episodes):
        sigma = hyper.sigma_at(episode)
        state = env.reset()
        rewards, losses, objectives, hits = [], [], [], []
        for _ in range(horizon):
            s_vec = observe(state, config)
            raw = act(agent.actor, s_vec, sigma, rng)
            outcome = env.step(project_action(raw, config))
            s2_vec = observe(outcome.next_state, config)
            buffer.push(s_vec, raw, outcome.reward, s2_vec, terminal=False)
            rewards.append(outcome.reward)
            hits.append(float(np.mean(outcome.hit)))

            for _ in range(hyper.updates_per_slot):
                batch = buffer.sample(hyper.batch_size, rng)
                if batch is None:
                    break
                if offset is None:
                    offset = buffer.mean_reward()
                losses.append(
                    critic_update(
                        agent.critic,
                        agent.critic_target,
                        agent.actor_target,
                        batch,
                        hyper.discount,
                        hyper.critic_lr,
                        agent.critic_opt,
                        reward_offset=offset,
                    )
                )
                objectives.append(
                    actor_update(agent.actor, agent.critic, batch, hyper.actor_lr, agent.actor_opt)
                )
                soft_update(agent.actor_target, agent.actor, hyper.target_rate)
                soft_update(agent.critic_target, agent.critic, hyper.target_rate)
            state = outcome.next_state

        log.episode_reward.append(float(np.mean(rewards)))
        log.hit_ratio.append(float(np.mean(hits)))
        log.critic_loss.append(float(np.mean(losses)) if losses else float("nan"))
        log.actor_objective.append(float(np.mean(objectives)) if objectives else float("nan"))
        log.sigma.append(sigma)

    log.reward_offset = 0.0 if offset is None else offset
    log.skipped_updates = agent.actor_opt.skipped + agent.critic_opt.skipped
    return agent, log
