"""Shared scenario builders for the test suite."""

import numpy as np

from aigc_edge import RadioConfig, build_scenario
from aigc_edge.models import PopularityChain


def toy_dominant_config(scenario_seed=0, n_users=2, slots=20):
    """Tiny two-model world with one clearly dominant request type.

    Capacity fits exactly one model, the skewness is pinned high so model 1
    draws 80% of requests, and the backhaul is slow enough that misses are
    plainly expensive.  Model constants are pinned to the reference curve so
    the optimum is easy to reason about by enumeration.
    """
    return build_scenario(
        n_users=n_users,
        m_models=2,
        scenario_seed=scenario_seed,
        storage_gb_range=(10.0, 10.0),
        d_op_mb_range=(8.0, 8.0),
        d_in_mb_range=(5.0, 10.0),
        a1_range=(60.0, 60.0),
        a2_range=(110.0, 110.0),
        a3_range=(170.0, 170.0),
        a4_range=(28.0, 28.0),
        b1_range=(0.18, 0.18),
        b2_range=(5.74, 5.74),
        chain=PopularityChain(gamma_values=(2.0, 2.0, 2.0)),
        radio=RadioConfig(r_bc_bps=2e6, r_cb_bps=2e6),
        capacity_gb=10.0,
        slots_per_episode=slots,
        total_denoising_steps=340.0,
    )


def dominant_model_share(dist=(0.8, 0.2)):
    return np.asarray(dist)
