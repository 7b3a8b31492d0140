"""Walk through the physical-layer building blocks one at a time.

Run:  python demos/channel_and_service_models.py

Prints a tour of the request-popularity law, the wireless channel, the
link delays, and the fitted image-generation curves, using the reference
model constants throughout.
"""

import numpy as np

from aigc_edge import (
    GenAiModelSpec,
    RadioConfig,
    channel_gain,
    downlink_rate,
    generation_delay,
    generation_quality,
    path_loss_db,
    rayleigh_power,
    uplink_delay,
    uplink_rate,
    utility,
    zipf_distribution,
)

radio = RadioConfig()
spec = GenAiModelSpec(1, 5.0, 8e7, a1=60, a2=110, a3=170, a4=28, b1=0.18, b2=5.74)

print("=== request popularity ===")
for gamma in (0.2, 0.5, 0.7):
    dist = zipf_distribution(gamma, 10)
    print(f"skewness {gamma}: top model {dist[0]:.3f}, least popular {dist[-1]:.3f}")

print("\n=== channel: distance -> loss -> gain ===")
rng = np.random.default_rng(0)
for d in (50, 150, 350):
    loss = path_loss_db(d)
    h = channel_gain(loss, rayleigh_power(rng))
    print(f"{d:4d} m: path loss {loss:7.1f} dB, one faded gain {h:.3e}")

print("\n=== rates and delays for a mid-cell user ===")
h = channel_gain(path_loss_db(150.0), 1.0)
for share in (0.1, 0.5, 1.0):
    rate = uplink_rate(share, radio, 23.0, h)
    print(f"uplink share {share:.1f}: {rate/1e6:7.1f} Mbit/s")
rate_up = uplink_rate(0.1, radio, 23.0, h)
rate_dw = downlink_rate(radio, h)
d_in = 8 * 8e6  # an 8 MB prompt image
print(f"downlink: {rate_dw/1e6:.1f} Mbit/s")
print(f"served at the station: uplink {uplink_delay(d_in, rate_up, True, radio.r_bc_bps):.2f} s")
print(f"served in the cloud:   uplink {uplink_delay(d_in, rate_up, False, radio.r_bc_bps):.2f} s"
      " (backhaul hop added)")

print("\n=== image generation: steps vs quality vs time ===")
print(f"{'steps':>6} {'roughness':>10} {'seconds':>8}")
for steps in (0, 60, 115, 170, 250):
    x = steps / 1000.0
    q = generation_quality(x, 1000.0, spec, True)
    t = generation_delay(x, 1000.0, spec, True)
    print(f"{steps:6d} {float(q):10.1f} {float(t):8.2f}")
print(f" cloud {float(generation_quality(0, 1000, spec, False)):10.1f}"
      f" {float(generation_delay(0, 1000, spec, False)):8.2f}")

print("\n=== blended cost (alpha = 0.7) ===")
for steps in (0, 170):
    x = steps / 1000.0
    total = (
        uplink_delay(d_in, rate_up, True, radio.r_bc_bps)
        + generation_delay(x, 1000.0, spec, True)
        + spec.output_bits / rate_dw
    )
    q = generation_quality(x, 1000.0, spec, True)
    print(f"hit with {steps:3d} steps: delay {float(total):6.2f} s,"
          f" roughness {float(q):5.1f}, utility {float(utility(0.7, total, q)):6.2f}")
