"""Experiment harness: config files, paired policy runs, sweeps, CSV output.

Seeding discipline: every random stream is derived from (run seed, stream
tag, episode), so for a given seed and user count all policies face the
identical sequence of positions, fades, requests, and input sizes during
evaluation.  The metrics CSV is the single source of truth; the per-figure
aggregate files are pure functions of it and can be recomputed offline.

Wall-clock measurement is opt-in (``timing=True`` / ``--timing``): the
default output keeps the wall_s column at zero so that re-running any
command with the same config and seed reproduces the CSV byte for byte.
"""

from __future__ import annotations

import configparser
import csv
import io
import os
import re
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields, replace

import numpy as np

from .baselines import GaConfig, hcras_solve, rcars_action
from .config import SystemConfig, build_scenario
from .ddpg import DdpgAgent, DdpgHyperparams, train
from .env import Environment, hit_ratio, objective_average, observe, project_action
from .errors import ConfigError
from .models import PopularityChain, RadioConfig

POLICIES = ("ddpg", "hcras", "rcars")
METRICS_HEADER = "policy,seed,users,lr,episode,reward,hit_ratio,objective,wall_s"

# stream tags for deriving independent generators from one run seed
_TRAIN_ENV = 1
_EVAL_ENV = 2
_POLICY = 3
_AGENT = 4


def make_rng(*keys: int) -> np.random.Generator:
    return np.random.default_rng(list(keys))


# ---------------------------------------------------------------------------
# experiment configuration


@dataclass(frozen=True)
class ScenarioSettings:
    """The [scenario] section: everything build_scenario needs."""

    n_users: int = 10
    m_models: int = 10
    area_m: float = 250.0
    slots: int = 50
    slot_duration_s: float = 20.0
    alpha: float = 0.7
    capacity_gb: float = 20.0
    denoising_steps: float = 1000.0
    d_in_mb: tuple[float, float] = (5.0, 10.0)
    d_op_mb: tuple[float, float] = (5.0, 10.0)
    storage_gb: tuple[float, float] = (2.0, 10.0)
    a1: tuple[float, float] = (50.0, 100.0)
    a2: tuple[float, float] = (100.0, 150.0)
    a3: tuple[float, float] = (150.0, 200.0)
    a4: tuple[float, float] = (0.0, 50.0)
    b1: tuple[float, float] = (0.0, 0.5)
    b2: tuple[float, float] = (0.0, 10.0)
    gamma_values: tuple[float, float, float] = (0.2, 0.5, 0.7)
    transition: tuple[tuple[float, ...], ...] = (
        (0.6, 0.2, 0.2),
        (0.1, 0.7, 0.2),
        (0.2, 0.3, 0.5),
    )
    uplink_mhz: float = 20.0
    downlink_mhz: float = 40.0
    noise_dbm_hz: float = -176.0
    user_power_dbm: float = 23.0
    bs_power_dbm: float = 43.0
    backhaul_mbps: float = 100.0
    min_distance_m: float = 1.0
    gain_norm_db: tuple[float, float] = (-120.0, -60.0)
    penalty_delay_s: float | None = None  # None -> derived from the scenario
    scenario_seed: int | None = None  # None -> follow the run seed

    def __post_init__(self):
        if self.n_users < 1:
            raise ConfigError("n_users must be at least 1")
        if self.m_models < 1:
            raise ConfigError("m_models must be at least 1")
        if self.slots < 1:
            raise ConfigError("slots must be at least 1")
        if not self.capacity_gb > 0:
            raise ConfigError("capacity_gb must be positive")

    def build(self, run_seed: int, n_users: int | None = None) -> SystemConfig:
        seed = self.scenario_seed if self.scenario_seed is not None else run_seed
        radio = RadioConfig(
            w_up_hz=self.uplink_mhz * 1e6,
            w_dw_hz=self.downlink_mhz * 1e6,
            u0_dbm_hz=self.noise_dbm_hz,
            p_b_dbm=self.bs_power_dbm,
            r_bc_bps=self.backhaul_mbps * 1e6,
            r_cb_bps=self.backhaul_mbps * 1e6,
            bs_position=(self.area_m / 2.0, self.area_m / 2.0),
        )
        chain = PopularityChain(gamma_values=self.gamma_values, transition=self.transition)
        return build_scenario(
            n_users=n_users if n_users is not None else self.n_users,
            m_models=self.m_models,
            scenario_seed=seed,
            storage_gb_range=self.storage_gb,
            d_op_mb_range=self.d_op_mb,
            d_in_mb_range=self.d_in_mb,
            a1_range=self.a1,
            a2_range=self.a2,
            a3_range=self.a3,
            a4_range=self.a4,
            b1_range=self.b1,
            b2_range=self.b2,
            radio=radio,
            chain=chain,
            area_m=self.area_m,
            slots_per_episode=self.slots,
            slot_duration_s=self.slot_duration_s,
            alpha=self.alpha,
            capacity_gb=self.capacity_gb,
            total_denoising_steps=self.denoising_steps,
            p_user_dbm=self.user_power_dbm,
            min_distance_m=self.min_distance_m,
            gain_norm_db=self.gain_norm_db,
            penalty_delay_s=self.penalty_delay_s,
        )


@dataclass(frozen=True)
class SweepSettings:
    user_counts: tuple[int, ...] = (10, 12, 14, 16, 18)
    learning_rates: tuple[float, ...] = (1e-5, 1e-4, 1e-3, 1e-2)
    seeds: tuple[int, ...] = (0, 1, 2, 3, 4)

    def __post_init__(self):
        if len(set(self.seeds)) != len(self.seeds):
            raise ConfigError("sweep seeds must be distinct")
        if not self.user_counts or not self.learning_rates or not self.seeds:
            raise ConfigError("sweep lists must be non-empty")


@dataclass(frozen=True)
class RunSettings:
    eval_episodes: int = 50
    out_dir: str = "results"

    def __post_init__(self):
        if self.eval_episodes < 1:
            raise ConfigError("need at least one evaluation episode")


@dataclass(frozen=True)
class ExperimentConfig:
    scenario: ScenarioSettings = field(default_factory=ScenarioSettings)
    agent: DdpgHyperparams = field(default_factory=DdpgHyperparams)
    ga: GaConfig = field(default_factory=GaConfig)
    sweep: SweepSettings = field(default_factory=SweepSettings)
    run: RunSettings = field(default_factory=RunSettings)


# ---------------------------------------------------------------------------
# config file parsing (INI: one [section] per block, key = value lines)


def _parse_float(text: str) -> float:
    return float(text)


def _parse_int(text: str) -> int:
    return int(text)

def _parse_float_list(text: str) -> tuple[float, ...]:
    return tuple(float(tok) for tok in re.split(r"[,\s]+", text.strip()) if tok)


def _parse_int_list(text: str) -> tuple[int, ...]:
    return tuple(int(tok) for tok in re.split(r"[,\s]+", text.strip()) if tok)


def _parse_pair(text: str) -> tuple[float, float]:
    vals = _parse_float_list(text)
    if len(vals) != 2:
        raise ValueError("expected exactly two values")
    return vals  # type: ignore[return-value]


def _parse_matrix(text: str) -> tuple[tuple[float, ...], ...]:
    return tuple(_parse_float_list(row) for row in text.split(";") if row.strip())


def _parse_optional_float(text: str) -> float | None:
    return None if text.strip().lower() in ("", "auto") else float(text)


def _parse_optional_int(text: str) -> int | None:
    return None if text.strip().lower() in ("", "auto", "follow") else int(text)


_SECTION_SCHEMAS: dict[str, dict[str, tuple]] = {
    "scenario": {
        "n_users": _parse_int,
        "m_models": _parse_int,
        "area_m": _parse_float,
        "slots": _parse_int,
        "slot_duration_s": _parse_float,
        "alpha": _parse_float,
        "capacity_gb": _parse_float,
        "denoising_steps": _parse_float,
        "d_in_mb": _parse_pair,
        "d_op_mb": _parse_pair,
        "storage_gb": _parse_pair,
        "a1": _parse_pair,
        "a2": _parse_pair,
        "a3": _parse_pair,
        "a4": _parse_pair,
        "b1": _parse_pair,
        "b2": _parse_pair,
        "gamma_values": _parse_float_list,
        "transition": _parse_matrix,
        "uplink_mhz": _parse_float,
        "downlink_mhz": _parse_float,
        "noise_dbm_hz": _parse_float,
        "user_power_dbm": _parse_float,
        "bs_power_dbm": _parse_float,
        "backhaul_mbps": _parse_float,
        "min_distance_m": _parse_float,
        "gain_norm_db": _parse_pair,
        "penalty_delay_s": _parse_optional_float,
        "scenario_seed": _parse_optional_int,
    },
    "agent": {
        "actor_lr": _parse_float,
        "critic_lr": _parse_float,
        "discount": _parse_float,
        "target_rate": _parse_float,
        "batch_size": _parse_int,
        "buffer_capacity": _parse_int,
        "sigma_start": _parse_float,
        "sigma_end": _parse_float,
        "sigma_decay_fraction": _parse_float,
        "episodes": _parse_int,
        "hidden": _parse_int_list,
        "reward_offset": _parse_optional_float,
        "updates_per_slot": _parse_int,
    },
    "ga": {
        "population": _parse_int,
        "generations": _parse_int,
        "eta_c": _parse_float,
        "eta_m": _parse_float,
        "mutation_prob": _parse_optional_float,
        "tournament": _parse_int,
    },
    "sweep": {
        "user_counts": _parse_int_list,
        "learning_rates": _parse_float_list,
        "seeds": _parse_int_list,
    },
    "run": {
        "eval_episodes": _parse_int,
        "out_dir": lambda text: text.strip(),
    },
}

_SECTION_TYPES = {
    "scenario": ScenarioSettings,
    "agent": DdpgHyperparams,
    "ga": GaConfig,
    "sweep": SweepSettings,
    "run": RunSettings,
}


def _line_of(text: str, section: str, key: str) -> int | None:
    in_section = False
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if stripped.startswith("["):
            in_section = stripped == f"[{section}]"
        elif in_section and re.match(rf"{re.escape(key)}\s*[=:]", stripped):
            return lineno
    return None


def load_config(path) -> ExperimentConfig:
    """Parse and validate an experiment file; omitted keys keep defaults."""
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc

    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(text, source=str(path))
    except configparser.Error as exc:
        raise ConfigError(f"malformed config file: {exc}") from exc

    sections: dict[str, dict] = {}
    for section in parser.sections():
        if section not in _SECTION_SCHEMAS:
            raise ConfigError(f"{path}: unknown section [{section}]")
        schema = _SECTION_SCHEMAS[section]
        values = {}
        for key, raw in parser.items(section):
            if key not in schema:
                lineno = _line_of(text, section, key)
                where = f"line {lineno}" if lineno else "unknown line"
                raise ConfigError(f"{path}: unknown key '{key}' in [{section}] ({where})")
            try:
                values[key] = schema[key](raw)
            except (ValueError, ConfigError) as exc:
                lineno = _line_of(text, section, key)
                where = f"line {lineno}" if lineno else "unknown line"
                raise ConfigError(
                    f"{path}: bad value for '{key}' in [{section}] ({where}): {exc}"
                ) from exc
        sections[section] = values

    try:
        parts = {
            name: _SECTION_TYPES[name](**sections.get(name, {})) for name in _SECTION_TYPES
        }
        return ExperimentConfig(**parts)
    except (ConfigError, TypeError) as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def _format_value(value) -> str:
    if isinstance(value, tuple) and value and isinstance(value[0], tuple):
        return "; ".join(" ".join(repr(float(v)) for v in row) for row in value)
    if isinstance(value, tuple):
        return ", ".join(repr(v) if isinstance(v, float) else str(v) for v in value)
    if value is None:
        return "auto"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def serialize_config(config: ExperimentConfig) -> str:
    """Render a config back to file text; load_config inverts this exactly."""
    out = io.StringIO()
    for section, obj in (
        ("scenario", config.scenario),
        ("agent", config.agent),
        ("ga", config.ga),
        ("sweep", config.sweep),
        ("run", config.run),
    ):
        out.write(f"[{section}]\n")
        for f in fields(obj):
            out.write(f"{f.name} = {_format_value(getattr(obj, f.name))}\n")
        out.write("\n")
    return out.getvalue()


# ---------------------------------------------------------------------------
# metric rows and policy runs


@dataclass(frozen=True)
class MetricRow:
    policy: str
    seed: int
    users: int
    lr: float
    episode: int
    reward: float
    hit_ratio: float
    objective: float
    wall_s: float


def _eval_episode(env: Environment, policy_fn, policy_rng) -> tuple[float, float, float]:
    env.reset()
    traces = []
    for _ in range(env.config.slots_per_episode):
        action = policy_fn(env.state, policy_rng)
        traces.append(env.step(action))
    mean_reward = float(np.mean([t.reward for t in traces]))
    return mean_reward, hit_ratio(traces), objective_average(traces)


def _policy_fn(policy: str, exp: ExperimentConfig, config: SystemConfig, agent: DdpgAgent | None):
    if policy == "ddpg":
        return lambda state, rng: project_action(agent.raw_action(observe(state, config)), config)
    if policy == "hcras":
        return lambda state, rng: hcras_solve(state, config, exp.ga, rng)
    if policy == "rcars":
        return lambda state, rng: rcars_action(state, config, rng)
    raise ConfigError(f"unknown policy '{policy}' (choose from {', '.join(POLICIES)})")


def run_policy(
    policy: str,
    exp: ExperimentConfig,
    seed: int,
    n_users: int | None = None,
    episodes: int | None = None,
    eval_episodes: int | None = None,
    timing: bool = False,
    agent_out: list | None = None,
) -> list[MetricRow]:
    """Train (ddpg only) and evaluate one policy under one run seed.

    Evaluation episodes re-derive the environment generator from
    (seed, stream, episode), independent of anything the policy consumed,
    which is what makes cross-policy comparisons paired.
    """
    if policy not in POLICIES:
        raise ConfigError(f"unknown policy '{policy}' (choose from {', '.join(POLICIES)})")
    config = exp.scenario.build(seed, n_users=n_users)
    users = config.n_users
    n_eval = eval_episodes if eval_episodes is not None else exp.run.eval_episodes
    rows: list[MetricRow] = []
    agent = None
    lr = 0.0

    if policy == "ddpg":
        hyper = exp.agent if episodes is None else replace(exp.agent, episodes=episodes)
        lr = hyper.actor_lr
        t0 = time.perf_counter()
        env = Environment(config, make_rng(seed, _TRAIN_ENV))
        agent, log = train(env, hyper, make_rng(seed, _AGENT))
        per_episode_s = (time.perf_counter() - t0) / hyper.episodes if timing else 0.0
        if agent_out is not None:
            agent_out.append(agent)
        for ep, reward in enumerate(log.episode_reward, start=1):
            rows.append(
                MetricRow(
                    policy="ddpg-train",
                    seed=seed,
                    users=users,
                    lr=lr,
                    episode=ep,
                    reward=reward,
                    hit_ratio=log.hit_ratio[ep - 1],
                    objective=-reward,
                    wall_s=per_episode_s,
                )
            )

    fn = _policy_fn(policy, exp, config, agent)
    for ep in range(1, n_eval + 1):
        t0 = time.perf_counter()
        env = Environment(config, make_rng(seed, _EVAL_ENV, ep))
        policy_rng = make_rng(seed, _POLICY, ep)
        mean_reward, hits, objective = _eval_episode(env, fn, policy_rng)
        wall = time.perf_counter() - t0 if timing else 0.0
        rows.append(
            MetricRow(
                policy=policy,
                seed=seed,
                users=users,
                lr=lr,
                episode=ep,
                reward=mean_reward,
                hit_ratio=hits,
                objective=objective,
                wall_s=wall,
            )
        )
    return rows


def _max_workers() -> int:
    try:
        return max(1, int(os.environ.get("SIM_THREADS", "1")))
    except ValueError:
        return 1


def _run_cells(cells, runner) -> list[MetricRow]:
    workers = _max_workers()
    rows: list[MetricRow] = []
    if workers == 1:
        for cell in cells:
            rows.extend(runner(cell))
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(runner, cells):
                rows.extend(part)
    return rows


def sweep_users(
    exp: ExperimentConfig,
    counts=None,
    seeds=None,
    policies=POLICIES,
    episodes: int | None = None,
    timing: bool = False,
) -> list[MetricRow]:
    """Full (policy x user count x seed) cross product of paired runs.

    Each cell is reduced to a single summary row (episode 0) holding the
    means over that cell's evaluation episodes, so the pre-aggregation
    output has exactly one row per (policy, count, seed).
    """
    counts = tuple(counts) if counts is not None else exp.sweep.user_counts
    seeds = tuple(seeds) if seeds is not None else exp.sweep.seeds
    cells = [(policy, count, seed) for policy in policies for count in counts for seed in seeds]

    def runner(cell):
        policy, count, seed = cell
        rows = run_policy(policy, exp, seed, n_users=count, episodes=episodes, timing=timing)
        evals = [r for r in rows if r.policy == policy]
        return [
            MetricRow(
                policy=policy,
                seed=seed,
                users=count,
                lr=evals[0].lr,
                episode=0,
                reward=float(np.mean([r.reward for r in evals])),
                hit_ratio=float(np.mean([r.hit_ratio for r in evals])),
                objective=float(np.mean([r.objective for r in evals])),
                wall_s=float(np.sum([r.wall_s for r in rows])),  # training time included
            )
        ]

    return _run_cells(cells, runner)


def sweep_learning_rates(
    exp: ExperimentConfig,
    lrs=None,
    seeds=None,
    episodes: int | None = None,
    timing: bool = False,
) -> list[MetricRow]:
    """One training run per (learning rate, seed); emits full reward curves.

    The swept value replaces the actor learning rate; the critic rate is
    scaled by the same factor so the configured actor/critic ratio holds.
    """
    lrs = tuple(lrs) if lrs is not None else exp.sweep.learning_rates
    if not lrs:
        raise ConfigError("learning-rate list must be non-empty")
    seeds = tuple(seeds) if seeds is not None else exp.sweep.seeds
    cells = [(lr, seed) for lr in lrs for seed in seeds]

    def runner(cell):
        lr, seed = cell
        factor = lr / exp.agent.actor_lr
        agent_cfg = replace(exp.agent, actor_lr=lr, critic_lr=exp.agent.critic_lr * factor)
        exp_lr = replace(exp, agent=agent_cfg)
        rows = run_policy("ddpg", exp_lr, seed, episodes=episodes, eval_episodes=1, timing=timing)
        return [r for r in rows if r.policy == "ddpg-train"]

    return _run_cells(cells, runner)


# ---------------------------------------------------------------------------
# aggregation and output files


def converged_reward(rows: list[MetricRow]) -> float:
    """Mean training reward over the final tenth of the episode curve."""
    curve = sorted((r for r in rows if r.policy == "ddpg-train"), key=lambda r: r.episode)
    if not curve:
        raise ValueError("no training rows to summarise")
    tail = max(1, len(curve) // 10)
    return float(np.mean([r.reward for r in curve[-tail:]]))


def _group(rows, key):
    grouped: dict = {}
    for row in rows:
        grouped.setdefault(key(row), []).append(row)
    return grouped


def aggregate_convergence(rows: list[MetricRow]) -> list[tuple[float, float, float, int]]:
    """Per learning rate: mean/std over seeds of the converged reward."""
    train_rows = [r for r in rows if r.policy == "ddpg-train"]
    by_lr_seed = _group(train_rows, lambda r: (r.lr, r.seed))
    by_lr: dict[float, list[float]] = {}
    for (lr, _seed), cell in sorted(by_lr_seed.items()):
        by_lr.setdefault(lr, []).append(converged_reward(cell))
    return [
        (lr, float(np.mean(vals)), float(np.std(vals)), len(vals))
        for lr, vals in sorted(by_lr.items())
    ]


def _aggregate_eval(rows: list[MetricRow], value) -> list[tuple[str, int, float, float, int]]:
    eval_rows = [r for r in rows if r.policy in POLICIES]
    by_cell = _group(eval_rows, lambda r: (r.policy, r.users, r.seed))
    per_seed: dict[tuple[str, int], list[float]] = {}
    for (policy, users, _seed), cell in sorted(by_cell.items()):
        per_seed.setdefault((policy, users), []).append(float(np.mean([value(r) for r in cell])))
    return [
        (policy, users, float(np.mean(vals)), float(np.std(vals)), len(vals))
        for (policy, users), vals in sorted(per_seed.items())
    ]


def aggregate_hit_ratio(rows):
    return _aggregate_eval(rows, lambda r: r.hit_ratio)


def aggregate_objective(rows):
    return _aggregate_eval(rows, lambda r: r.objective)


_ROW_SORT_KEY = lambda r: (r.policy, r.users, r.lr, r.seed, r.episode)


def write_metrics_csv(rows: list[MetricRow], path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(METRICS_HEADER + "\n")
        writer = csv.writer(fh, lineterminator="\n")
        for r in sorted(rows, key=_ROW_SORT_KEY):
            writer.writerow(
                [r.policy, r.seed, r.users, repr(r.lr), r.episode,
                 repr(r.reward), repr(r.hit_ratio), repr(r.objective), repr(r.wall_s)]
            )


def read_metrics_csv(path) -> list[MetricRow]:
    rows = []
    with open(path, newline="") as fh:
        for rec in csv.DictReader(fh):
            rows.append(
                MetricRow(
                    policy=rec["policy"],
                    seed=int(rec["seed"]),
                    users=int(rec["users"]),
                    lr=float(rec["lr"]),
                    episode=int(rec["episode"]),
                    reward=float(rec["reward"]),
                    hit_ratio=float(rec["hit_ratio"]),
                    objective=float(rec["objective"]),
                    wall_s=float(rec["wall_s"]),
                )
            )
    return rows


def _write_simple_csv(path, header: str, records) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(header + "\n")
        writer = csv.writer(fh, lineterminator="\n")
        for rec in records:
            writer.writerow([repr(v) if isinstance(v, float) else v for v in rec])


def _plot_outputs(rows, out_dir) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    conv = aggregate_convergence(rows)
    if conv:
        fig, ax = plt.subplots()
        lrs = [c[0] for c in conv]
        ax.errorbar(lrs, [c[1] for c in conv], yerr=[c[2] for c in conv], marker="o")
        ax.set_xscale("log")
        ax.set_xlabel("actor learning rate")
        ax.set_ylabel("converged reward")
        fig.savefig(os.path.join(out_dir, "fig3_convergence.svg"))
        plt.close(fig)

    for name, agg, label in (
        ("fig4_hit_ratio.svg", aggregate_hit_ratio(rows), "model hit ratio"),
        ("fig5_objective.svg", aggregate_objective(rows), "mean objective"),
    ):
        if not agg:
            continue
        fig, ax = plt.subplots()
        policies = sorted({a[0] for a in agg})
        counts = sorted({a[1] for a in agg})
        width = 0.8 / len(policies)
        for i, policy in enumerate(policies):
            vals = {a[1]: (a[2], a[3]) for a in agg if a[0] == policy}
            xs = [j + i * width for j in range(len(counts))]
            ys = [vals.get(c, (np.nan, 0.0))[0] for c in counts]
            errs = [vals.get(c, (np.nan, 0.0))[1] for c in counts]
            ax.bar(xs, ys, width=width, yerr=errs, label=policy)
        ax.set_xticks([j + 0.4 - width / 2 for j in range(len(counts))])
        ax.set_xticklabels([str(c) for c in counts])
        ax.set_xlabel("number of users")
        ax.set_ylabel(label)
        ax.legend()
        fig.savefig(os.path.join(out_dir, name))
        plt.close(fig)


def ensure_writable(out_dir) -> None:
    """Create the output directory and fail fast if it cannot take files."""
    try:
        os.makedirs(out_dir, exist_ok=True)
        probe = os.path.join(out_dir, ".write_probe")
        with open(probe, "w"):
            pass
        os.remove(probe)
    except OSError as exc:
        raise OSError(f"output directory {out_dir} is not writable: {exc}") from exc


def emit_outputs(rows: list[MetricRow], out_dir, plots: bool = False) -> None:
    """Write metrics.csv plus the per-figure aggregates (and optional SVGs)."""
    ensure_writable(out_dir)
    write_metrics_csv(rows, os.path.join(out_dir, "metrics.csv"))
    _write_simple_csv(
        os.path.join(out_dir, "fig3_convergence.csv"),
        "lr,reward_mean,reward_std,seeds",
        aggregate_convergence(rows),
    )
    _write_simple_csv(
        os.path.join(out_dir, "fig4_hit_ratio.csv"),
        "policy,users,hit_ratio_mean,hit_ratio_std,seeds",
        aggregate_hit_ratio(rows),
    )
    _write_simple_csv(
        os.path.join(out_dir, "fig5_objective.csv"),
        "policy,users,objective_mean,objective_std,seeds",
        aggregate_objective(rows),
    )
    if plots and rows:
        _plot_outputs(rows, out_dir)
