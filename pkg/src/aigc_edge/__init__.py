"""Simulator of generative-model caching and resource allocation at a
wireless edge base station, with a from-scratch deterministic-policy
learner and two per-slot baselines."""

from .baselines import GaConfig, hcras_solve, poly_mutation, rcars_action, sbx_crossover
from .config import SystemConfig, build_scenario, sample_model_catalogue
from .ddpg import DdpgAgent, DdpgHyperparams, ReplayBuffer, TrainingLog, act, train
from .env import (
    EnvState,
    Environment,
    FeasibleAction,
    StepOutcome,
    action_dim,
    action_is_feasible,
    evaluate_slot,
    hit_ratio,
    objective_average,
    observe,
    project_action,
    reset,
    slot_view,
    state_dim,
    step,
)
from .errors import ConfigError, EpisodeFinished
from .harness import (
    ExperimentConfig,
    MetricRow,
    emit_outputs,
    load_config,
    run_policy,
    serialize_config,
    sweep_learning_rates,
    sweep_users,
)
from .models import (
    MB_BITS,
    GenAiModelSpec,
    PopularityChain,
    RadioConfig,
    UserSnapshot,
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
from .nn import AdamState, MlpParams, adam_step, load_mlp, mlp_backward, mlp_forward, mlp_init, save_mlp, soft_update

__version__ = "0.1.0"
