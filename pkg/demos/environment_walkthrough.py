"""Step the environment by hand and watch one episode unfold.

Run:  python demos/environment_walkthrough.py

Shows the observation layout, how a raw action is projected onto the
feasible set, and the per-user cost records of a few slots.
"""

import numpy as np

from aigc_edge import (
    Environment,
    action_dim,
    build_scenario,
    hit_ratio,
    objective_average,
    observe,
    project_action,
    state_dim,
)

cfg = build_scenario(n_users=4, m_models=6, scenario_seed=7, slots_per_episode=5)
print(f"scenario: {cfg.n_users} users, {cfg.m_models} models, cache {cfg.capacity_gb} GB")
print("model storage sizes:", np.round(cfg.model_bank.storage_gb, 2))
print(f"observation dim {state_dim(cfg)}, action dim {action_dim(cfg)}")

env = Environment(cfg, np.random.default_rng(0))
state = env.reset()
print(f"\nslot 1: popularity state {state.popularity_index},"
      f" requests {[u.request_model for u in state.users]}")
vec = observe(state, cfg)
print(f"observation head: skew {vec[0]:.2f}, gains {np.round(vec[1:5], 2)}")

rng = np.random.default_rng(1)
raw = rng.random(action_dim(cfg))
action = project_action(raw, cfg)
print("\nraw caching scores :", np.round(raw[:6], 2))
print("projected cache    :", action.rho,
      f"({float(action.rho @ cfg.model_bank.storage_gb):.1f} GB used)")
print("bandwidth shares   :", np.round(action.b, 2), f"(sum {action.b.sum():.2f})")
print("step shares        :", np.round(action.x, 2), f"(sum {action.x.sum():.2f})")

print("\nrunning the episode with fresh random actions each slot:")
traces = []
while True:
    outcome = env.step(project_action(rng.random(action_dim(cfg)), cfg))
    traces.append(outcome)
    print(f"slot {len(traces)}: reward {outcome.reward:8.2f},"
          f" hits {outcome.hit.astype(int)}, mean delay {outcome.total_delay_s.mean():6.1f} s")
    if outcome.done:
        break

print(f"\nepisode hit ratio {hit_ratio(traces):.2f},"
      f" objective {objective_average(traces):.2f}")
