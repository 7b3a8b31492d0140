"""Scenario assembly: every constant a simulation run depends on.

A scenario is built once from sampling ranges and a scenario seed; the
per-model constants drawn here stay frozen for the whole run so that every
policy evaluated against the scenario sees the same model catalogue.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property
from types import SimpleNamespace

import numpy as np

from .errors import ConfigError
from .models import (
    MB_BITS,
    GenAiModelSpec,
    PopularityChain,
    RadioConfig,
    downlink_rate,
    uplink_rate,
)

_SCENARIO_STREAM = 101  # seed-stream tag for catalogue sampling


@dataclass(frozen=True)
class SystemConfig:
    """Immutable description of one simulated edge-caching scenario."""

    n_users: int
    models: tuple[GenAiModelSpec, ...]
    radio: RadioConfig = field(default_factory=RadioConfig)
    chain: PopularityChain = field(default_factory=PopularityChain)
    area_m: float = 250.0
    slots_per_episode: int = 50
    slot_duration_s: float = 20.0  # bookkeeping only, never enforced as a deadline
    capacity_gb: float = 20.0
    total_denoising_steps: float = 1000.0
    alpha: float = 0.7
    p_user_dbm: float = 23.0
    d_in_bits_range: tuple[float, float] = (5 * MB_BITS, 10 * MB_BITS)
    d_op_bits_range: tuple[float, float] = (5 * MB_BITS, 10 * MB_BITS)
    min_distance_m: float = 1.0
    gain_norm_db: tuple[float, float] = (-120.0, -60.0)
    penalty_delay_s: float | None = None  # None -> derived bound, see below

    def __post_init__(self):
        self.validate()
        if self.penalty_delay_s is None:
            object.__setattr__(self, "penalty_delay_s", self._derived_penalty_s())

    def validate(self):
        if self.n_users < 1:
            raise ConfigError("a scenario needs at least one user")
        if len(self.models) < 1:
            raise ConfigError("a scenario needs at least one model")
        if not self.capacity_gb > 0:
            raise ConfigError("cache capacity must be positive")
        if not 0.0 <= self.alpha <= 1.0:
            raise ConfigError("utility weight alpha must lie in [0, 1]")
        if self.slots_per_episode < 1:
            raise ConfigError("an episode needs at least one slot")
        if not self.total_denoising_steps > 0:
            raise ConfigError("total denoising step budget must be positive")
        if not self.d_in_bits_range[0] <= self.d_in_bits_range[1]:
            raise ConfigError("input size range is inverted")
        if not self.gain_norm_db[0] < self.gain_norm_db[1]:
            raise ConfigError("gain normalisation bounds are inverted")
        for i, spec in enumerate(self.models, start=1):
            if spec.index != i:
                raise ConfigError("model specs must be listed in index order 1..M")

    @property
    def m_models(self) -> int:
        return len(self.models)

    @cached_property
    def model_bank(self) -> SimpleNamespace:
        """Per-model constants stacked into arrays for vectorised slot math."""
        return SimpleNamespace(
            storage_gb=np.array([m.storage_gb for m in self.models]),
            output_bits=np.array([m.output_bits for m in self.models]),
            a1=np.array([m.a1 for m in self.models]),
            a2=np.array([m.a2 for m in self.models]),
            a3=np.array([m.a3 for m in self.models]),
            a4=np.array([m.a4 for m in self.models]),
            b1=np.array([m.b1 for m in self.models]),
            b2=np.array([m.b2 for m in self.models]),
        )

    def _derived_penalty_s(self) -> float:
        """Failure/cap delay: ten times a worst-case cloud round trip.

        The reference round trip is priced at the channel-gain floor of the
        observation normalisation with a fair uplink share, so it upper
        bounds any plausibly useful service path.  The same value caps a
        user's total delay inside the environment, which keeps slot rewards
        bounded even when a fade makes some wireless rate arbitrarily small.
        """
        h_floor = 10.0 ** (self.gain_norm_db[0] / 10.0)
        r_up = float(uplink_rate(1.0 / self.n_users, self.radio, self.p_user_dbm, h_floor))
        r_dw = float(downlink_rate(self.radio, h_floor))
        d_in_max = self.d_in_bits_range[1]
        d_op_max = float(self.model_bank.output_bits.max())
        gen_max = float((self.model_bank.b1 * self.model_bank.a3 + self.model_bank.b2).max())
        round_trip = (
            d_in_max / r_up
            + d_in_max / self.radio.r_bc_bps
            + d_op_max / r_dw
            + d_op_max / self.radio.r_cb_bps
            + gen_max
        )
        return 10.0 * round_trip

    def with_users(self, n_users: int) -> "SystemConfig":
        """Same scenario with a different user count (penalty re-derived)."""
        cfg = replace(self, n_users=n_users, penalty_delay_s=None)
        return cfg


def _span(rng: np.random.Generator, lo: float, hi: float, open_low: bool = False) -> float:
    """Uniform draw on [lo, hi), or on (lo, hi] when the low end is excluded."""
    if hi < lo:
        raise ConfigError(f"inverted sampling range ({lo}, {hi})")
    if open_low:
        return hi - rng.uniform(0.0, hi - lo)
    return rng.uniform(lo, hi)


def sample_model_catalogue(
    m_models: int,
    rng: np.random.Generator,
    storage_gb_range=(2.0, 10.0),
    d_op_mb_range=(5.0, 10.0),
    a1_range=(50.0, 100.0),
    a2_range=(100.0, 150.0),
    a3_range=(150.0, 200.0),
    a4_range=(0.0, 50.0),
    b1_range=(0.0, 0.5),
    b2_range=(0.0, 10.0),
) -> tuple[GenAiModelSpec, ...]:
    """Draw the frozen per-model constants for one scenario.

    The quality thresholds keep their required ordering because the a1 and
    a3 ranges do not overlap; a4, b1 and b2 are drawn on half-open ranges
    that exclude zero.
    """
    if m_models < 1:
        raise ConfigError("need at least one model in the catalogue")
    specs = []
    for idx in range(1, m_models + 1):
        specs.append(
            GenAiModelSpec(
                index=idx,
                storage_gb=_span(rng, *storage_gb_range),
                output_bits=_span(rng, d_op_mb_range[0] * MB_BITS, d_op_mb_range[1] * MB_BITS),
                a1=_span(rng, *a1_range),
                a2=_span(rng, *a2_range),
                a3=_span(rng, *a3_range),
                a4=_span(rng, *a4_range, open_low=True),
                b1=_span(rng, *b1_range, open_low=True),
                b2=_span(rng, *b2_range, open_low=True),
            )
        )
    return tuple(specs)


def build_scenario(
    n_users: int = 10,
    m_models: int = 10,
    scenario_seed: int = 0,
    storage_gb_range=(2.0, 10.0),
    d_op_mb_range=(5.0, 10.0),
    d_in_mb_range=(5.0, 10.0),
    a1_range=(50.0, 100.0),
    a2_range=(100.0, 150.0),
    a3_range=(150.0, 200.0),
    a4_range=(0.0, 50.0),
    b1_range=(0.0, 0.5),
    b2_range=(0.0, 10.0),
    radio: RadioConfig | None = None,
    chain: PopularityChain | None = None,
    **overrides,
) -> SystemConfig:
    """Sample a model catalogue and assemble the full scenario config.

    ``overrides`` feed straight into :class:`SystemConfig` for the scalar
    constants (slots_per_episode, capacity_gb, alpha, ...).
    """
    rng = np.random.default_rng([_SCENARIO_STREAM, int(scenario_seed)])
    models = sample_model_catalogue(
        m_models,
        rng,
        storage_gb_range=storage_gb_range,
        d_op_mb_range=d_op_mb_range,
        a1_range=a1_range,
        a2_range=a2_range,
        a3_range=a3_range,
        a4_range=a4_range,
        b1_range=b1_range,
        b2_range=b2_range,
    )
    return SystemConfig(
        n_users=n_users,
        models=models,
        radio=radio if radio is not None else RadioConfig(),
        chain=chain if chain is not None else PopularityChain(),
        d_in_bits_range=(d_in_mb_range[0] * MB_BITS, d_in_mb_range[1] * MB_BITS),
        d_op_bits_range=(d_op_mb_range[0] * MB_BITS, d_op_mb_range[1] * MB_BITS),
        **overrides,
    )
