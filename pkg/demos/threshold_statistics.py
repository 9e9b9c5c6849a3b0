"""
Long-time intensity statistics at the instability thresholds
============================================================

On the degenerate-threshold surfaces the single-mode second-order
correlation settles to a closed-form value between 1 (coherent) and 3
(superchaotic). With no optical seed the value is exactly 3; seeding
pulls it down by an amount that depends on intensity and phase.

The script tabulates the closed form against the full moment pipeline
run out to long times, then sweeps the seed phase to show the swing.
"""

import math

from caosim import ModelParams, OpticalInit, long_time_g2, threshold_g2

params = ModelParams(0.0, 1.0)  # resonant threshold

print("closed form vs dynamics (resonant threshold, chi=1):")
print(f"{'|alpha|^2':>10} {'phase':>8} {'closed':>10} {'dynamics':>10}")
for alpha2, phi in [(0.0, 0.0), (1.0, 0.0), (4.0, 0.0), (4.0, math.pi / 2)]:
    init = OpticalInit(math.sqrt(alpha2), phi)
    closed = threshold_g2(params, init, 0.0)
    dynamic = long_time_g2(params, init, "optical")
    print(f"{alpha2:10.1f} {phi:8.4f} {closed:10.6f} {dynamic:10.6f}")

print("\nphase sweep of the closed form at |alpha|^2 = 4:")
for k in range(9):
    phi = k * math.pi / 8.0
    value = threshold_g2(params, OpticalInit(2.0, phi), 0.0)
    bar = "#" * round(20 * (value - 1.0) / 2.0)
    print(f"  phi={phi:6.4f}  g2={value:8.6f}  {bar}")
