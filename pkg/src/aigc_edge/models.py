"""Physical and statistical models of the edge image-generation service.

Everything here is a pure function of its arguments (plus an explicitly
passed numpy Generator where sampling is involved), so the functions are
safe to call from vectorised code: scalar arguments give scalar results,
array arguments broadcast in the usual numpy way.

Conventions used throughout:
  * powers are dBm, noise density is dBm/Hz, gains are linear ratios,
  * rates are bit/s, sizes are bits, distances are metres,
  * model indices and popularity states are 1-based,
  * image quality is a roughness score (total variation): lower is better.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ConfigError

MB_BITS = 8e6  # decimal megabyte, the usual convention in link-rate arithmetic

# Log-distance macro-cell loss: -128.1 dB at 1 km, 37.6 dB per decade.
# The reference constants assume the distance is expressed in kilometres.
_PL_REF_DB = -128.1
_PL_SLOPE_DB = -37.6


@dataclass(frozen=True)
class GenAiModelSpec:
    """One deployable generative model variant.

    The quality/latency behaviour of diffusion inference is summarised by
    six fitted constants: below ``a1`` denoising steps the output stays at
    the raw roughness ``a2``; quality then improves linearly until ``a3``
    steps, where it saturates at the best roughness ``a4``.  Inference
    time is affine in the step count: ``b1 * steps + b2`` seconds.
    """

    index: int
    storage_gb: float
    output_bits: float
    a1: float
    a2: float
    a3: float
    a4: float
    b1: float
    b2: float

    def __post_init__(self):
        if not self.a1 < self.a3:
            raise ConfigError(f"model {self.index}: a1={self.a1} must be < a3={self.a3}")
        if not self.a4 < self.a2:
            raise ConfigError(f"model {self.index}: a4={self.a4} must be < a2={self.a2}")
        for name in ("storage_gb", "output_bits", "b1", "b2"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"model {self.index}: {name} must be positive")


@dataclass(frozen=True)
class PopularityChain:
    """Markov chain over three popularity-skewness states."""

    gamma_values: tuple[float, float, float] = (0.2, 0.5, 0.7)
    transition: tuple[tuple[float, float, float], ...] = (
        (0.6, 0.2, 0.2),
        (0.1, 0.7, 0.2),
        (0.2, 0.3, 0.5),
    )

    def __post_init__(self):
        mat = np.asarray(self.transition, dtype=float)
        if mat.shape != (3, 3):
            raise ConfigError("popularity transition matrix must be 3x3")
        if np.any(mat < 0.0) or np.any(mat > 1.0):
            raise ConfigError("transition probabilities must lie in [0, 1]")
        if np.any(np.abs(mat.sum(axis=1) - 1.0) > 1e-12):
            raise ConfigError("each transition row must sum to 1")
        if len(self.gamma_values) != 3:
            raise ConfigError("exactly three skewness values are required")

    @cached_property
    def matrix(self) -> np.ndarray:
        return np.asarray(self.transition, dtype=float)

    @cached_property
    def _row_edges(self) -> np.ndarray:
        return np.cumsum(self.matrix, axis=1)


@dataclass(frozen=True)
class RadioConfig:
    """Static radio-plane parameters of the base station."""

    w_up_hz: float = 20e6
    w_dw_hz: float = 40e6
    u0_dbm_hz: float = -176.0  # single noise density, used on both links
    p_b_dbm: float = 43.0
    r_bc_bps: float = 100e6  # wired backhaul, station -> cloud
    r_cb_bps: float = 100e6  # wired backhaul, cloud -> station
    bs_position: tuple[float, float] = (125.0, 125.0)

    def __post_init__(self):
        for name in ("w_up_hz", "w_dw_hz", "r_bc_bps", "r_cb_bps"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"radio parameter {name} must be positive")


@dataclass
class UserSnapshot:
    """One user's observable situation within a single time slot."""

    position: tuple[float, float]
    transmit_power_dbm: float
    request_model: int  # 1-based index into the model catalogue
    input_bits: float
    channel_gain: float  # linear, path loss times fading power


# ---------------------------------------------------------------------------
# request popularity


def zipf_distribution(gamma: float, m_count: int) -> np.ndarray:
    """Request probability over model indices 1..m_count, mass ~ i**(-gamma)."""
    if m_count < 1:
        raise ConfigError("need at least one model in the catalogue")
    ranks = np.arange(1, m_count + 1, dtype=float)
    weights = ranks ** (-float(gamma))
    return weights / weights.sum()


def sample_request(dist: np.ndarray, rng: np.random.Generator) -> int:
    """Draw one 1-based model index from a request distribution."""
    return int(sample_requests(dist, 1, rng)[0])


def sample_requests(dist: np.ndarray, n: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``n`` 1-based model indices by inverse-CDF sampling."""
    edges = np.cumsum(np.asarray(dist, dtype=float))
    u = rng.random(n)
    idx = np.searchsorted(edges, u, side="right") + 1
    return np.minimum(idx, len(edges))  # guard the cumsum-rounding edge


def advance_popularity(chain: PopularityChain, current: int, rng: np.random.Generator) -> int:
    """Sample the next popularity state (1..3) from the chain row of ``current``."""
    edges = chain._row_edges[current - 1]
    nxt = int(np.searchsorted(edges, rng.random(), side="right")) + 1
    return min(nxt, 3)


# ---------------------------------------------------------------------------
# wireless channel


def dbm_to_mw(dbm):
    return 10.0 ** (np.asarray(dbm, dtype=float) / 10.0)


def mw_to_dbm(mw):
    return 10.0 * np.log10(np.asarray(mw, dtype=float))


def path_loss_db(distance_m, min_distance_m: float = 1.0):
    """Large-scale path loss in dB at a user-station distance in metres.

    Distances at or below ``min_distance_m`` are clamped rather than
    rejected, which bounds the loss for users that spawn on top of the
    station.
    """
    d = np.maximum(np.asarray(distance_m, dtype=float), min_distance_m)
    return _PL_REF_DB + _PL_SLOPE_DB * np.log10(d / 1000.0)


def rayleigh_power(rng: np.random.Generator, size=None):
    """Squared magnitude of a unit-variance complex Gaussian fade, mean 1."""
    return rng.exponential(1.0, size=size)


def channel_gain(path_loss_db, rayleigh_power):
    """Linear channel gain combining path loss (dB) and fading power."""
    return 10.0 ** (np.asarray(path_loss_db, dtype=float) / 10.0) * rayleigh_power


def uplink_rate(b, radio: RadioConfig, p_n_dbm, h):
    """Shannon rate of a user's uplink share, bit/s.

    ``b`` is the fraction of the uplink band assigned to the user; both the
    bandwidth and the in-band noise scale with it.  A zero share carries
    zero rate (the limit of ``b*log2(1 + c/b)`` as ``b`` goes to 0).
    """
    b = np.asarray(b, dtype=float)
    signal_mw = dbm_to_mw(p_n_dbm) * np.asarray(h, dtype=float)
    noise_mw = dbm_to_mw(radio.u0_dbm_hz) * b * radio.w_up_hz
    snr = np.divide(
        signal_mw,
        noise_mw,
        out=np.zeros(np.broadcast_shapes(np.shape(signal_mw), np.shape(noise_mw))),
        where=noise_mw > 0,
    )
    return b * radio.w_up_hz * np.log2(1.0 + snr)


def downlink_rate(radio: RadioConfig, h):
    """Shannon rate of the station-to-user feedback link, bit/s.

    The station transmits to each user over the full downlink band; there
    is no per-user share on this direction.
    """
    snr = dbm_to_mw(radio.p_b_dbm) * np.asarray(h, dtype=float) / (
        dbm_to_mw(radio.u0_dbm_hz) * radio.w_dw_hz
    )
    return radio.w_dw_hz * np.log2(1.0 + snr)


# ---------------------------------------------------------------------------
# service delays


def uplink_delay(d_in_bits, rate_up_bps, cached, r_bc_bps, penalty_s=np.inf):
    """Seconds to move the request input to wherever it is served.

    A cache miss forwards the input over the wired backhaul on top of the
    wireless hop.  A zero wireless rate with a nonzero payload yields the
    configured penalty instead of a division by zero, keeping downstream
    reward arithmetic finite.
    """
    d = np.asarray(d_in_bits, dtype=float)
    rate = np.asarray(rate_up_bps, dtype=float)
    shape = np.broadcast_shapes(d.shape, rate.shape)
    wireless = np.divide(d, rate, out=np.zeros(shape), where=rate > 0)
    wireless = np.where((rate <= 0) & (d > 0), penalty_s, wireless)
    backhaul = np.where(cached, 0.0, d / r_bc_bps)
    return wireless + backhaul


def downlink_delay(d_op_bits, rate_dw_bps, cached, r_cb_bps, penalty_s=np.inf):
    """Seconds to return the generated image to the user; mirrors the uplink."""
    d = np.asarray(d_op_bits, dtype=float)
    rate = np.asarray(rate_dw_bps, dtype=float)
    shape = np.broadcast_shapes(d.shape, rate.shape)
    wireless = np.divide(d, rate, out=np.zeros(shape), where=rate > 0)
    wireless = np.where((rate <= 0) & (d > 0), penalty_s, wireless)
    backhaul = np.where(cached, 0.0, d / r_cb_bps)
    return wireless + backhaul


# ---------------------------------------------------------------------------
# image generation


def generation_quality(x, l_total, spec, cached):
    """Roughness score of the generated image (lower is better).

    Served at the station, the score is flat at ``a2`` up to ``a1``
    allocated steps, falls linearly to ``a4`` at ``a3`` steps and stays
    there.  Served in the cloud, the score is always the best value ``a4``
    because the cloud runs the full denoising schedule.
    """
    steps = np.asarray(x, dtype=float) * l_total
    slope = (spec.a4 - spec.a2) / (spec.a3 - spec.a1)
    at_station = np.select(
        [steps <= spec.a1, steps >= spec.a3],
        [np.broadcast_to(spec.a2, steps.shape), np.broadcast_to(spec.a4, steps.shape)],
        default=spec.a2 + slope * (steps - spec.a1),
    )
    return np.where(cached, at_station, spec.a4)


def generation_delay(x, l_total, spec, cached):
    """Inference seconds: affine in allocated steps at the station.

    The cloud always runs the ``a3`` steps needed for best quality, so a
    miss costs ``b1 * a3 + b2`` regardless of the station-side allocation.
    """
    steps = np.asarray(x, dtype=float) * l_total
    at_station = spec.b1 * steps + spec.b2
    at_cloud = spec.b1 * spec.a3 + spec.b2
    return np.where(cached, at_station, at_cloud)


def total_delay(uplink_s, downlink_s, generation_s):
    """End-to-end provisioning delay of one request."""
    return uplink_s + downlink_s + generation_s


def utility(alpha, total_delay_s, quality):
    """Per-request cost: delay and roughness blended by the weight ``alpha``."""
    return alpha * total_delay_s + (1.0 - alpha) * quality
