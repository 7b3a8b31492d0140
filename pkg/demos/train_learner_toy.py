"""Train the learner on a tiny scenario whose optimum is obvious.

Run:  python demos/train_learner_toy.py

Two models, cache space for exactly one, and 80% of requests asking for
model 1: the learner should discover that caching the popular model and
splitting resources evenly is the way to go.  Takes around a minute.
"""

import numpy as np

from aigc_edge import (
    DdpgHyperparams,
    Environment,
    RadioConfig,
    build_scenario,
    observe,
    project_action,
    rcars_action,
    train,
)
from aigc_edge.models import PopularityChain

cfg = build_scenario(
    n_users=2,
    m_models=2,
    scenario_seed=0,
    storage_gb_range=(10.0, 10.0),
    a1_range=(60.0, 60.0),
    a2_range=(110.0, 110.0),
    a3_range=(170.0, 170.0),
    a4_range=(28.0, 28.0),
    b1_range=(0.18, 0.18),
    b2_range=(5.74, 5.74),
    chain=PopularityChain(gamma_values=(2.0, 2.0, 2.0)),
    radio=RadioConfig(r_bc_bps=2e6, r_cb_bps=2e6),
    capacity_gb=10.0,
    slots_per_episode=20,
    total_denoising_steps=340.0,
)
print("request probabilities:", np.round([1 / (1 + 2**-2.0), 2**-2.0 / (1 + 2**-2.0)], 2))

hyper = DdpgHyperparams(
    actor_lr=2e-3, critic_lr=2e-3, batch_size=32, buffer_capacity=4000,
    hidden=(32, 32), episodes=120, sigma_start=0.4, sigma_end=0.05,
)
env = Environment(cfg, np.random.default_rng(1))
agent, log = train(env, hyper, np.random.default_rng(2))

print("\nmean reward by training phase:")
for lo, hi in ((0, 20), (50, 70), (100, 120)):
    print(f"  episodes {lo + 1:3d}-{hi:3d}: {np.mean(log.episode_reward[lo:hi]):8.2f}")

print("\nnoise-free evaluation vs the random baseline:")
learner_cached_popular = 0
learner_obj, random_obj = [], []
for ep in range(10):
    env_l = Environment(cfg, np.random.default_rng(100 + ep))
    env_r = Environment(cfg, np.random.default_rng(100 + ep))  # identical draws
    state_l, _ = env_l.reset(), env_r.reset()
    rng_r = np.random.default_rng(200 + ep)
    for _ in range(cfg.slots_per_episode):
        action = project_action(agent.raw_action(observe(state_l, cfg)), cfg)
        learner_cached_popular += int(action.rho[0] == 1)
        out_l = env_l.step(action)
        out_r = env_r.step(rcars_action(env_r.state, cfg, rng_r))
        learner_obj.append(-out_l.reward)
        random_obj.append(-out_r.reward)
        state_l = out_l.next_state

slots = 10 * cfg.slots_per_episode
print(f"  learner cached the popular model in {learner_cached_popular}/{slots} slots")
print(f"  learner objective {np.mean(learner_obj):.2f}  vs  random {np.mean(random_obj):.2f}"
      f"  ({(1 - np.mean(learner_obj) / np.mean(random_obj)):.1%} better)")
