"""
Stability regimes of the linear atom-photon system
==================================================

The drift matrix has four eigenfrequencies whose pattern decides how the
coupled matter-wave and light amplitudes behave: purely oscillatory
(stable), growing with a single exponential rate, growing while beating
at a second frequency, or sitting exactly on a degenerate threshold
where growth is polynomial.

This script scans the (detuning, coupling) plane and prints a coarse
character map, then inspects a few named points in detail.
"""

import numpy as np

from caosim import ModelParams, build_generator, classify_regime

# one character per regime keeps the map readable in a terminal
GLYPH = {"i": ".", "ii": "E", "iii": "B", "iv": "*"}

deltas = np.linspace(-4.0, 4.0, 33)
chis = np.linspace(0.0, 2.0, 21)

print("regime map: '.' stable  'E' exponential  'B' beating  '*' threshold")
print(f"delta in [{deltas[0]}, {deltas[-1]}], chi in [{chis[0]}, {chis[-1]}]\n")

for chi in chis[::-1]:
    row = []
    for delta in deltas:
        report = classify_regime(build_generator(ModelParams(delta, chi)))
        row.append(GLYPH[report.regime.value])
    print(f"chi={chi:4.1f}  " + "".join(row))

print("\nselected points:")
for delta, chi in [(1.0, 1.0), (-1.0, 1.0), (0.0, 1.0), (4.0, 1.0), (2.0, 0.0)]:
    report = classify_regime(build_generator(ModelParams(delta, chi)))
    line = f"  delta={delta:+.1f} chi={chi:.1f}: regime {report.regime.value}"
    if report.omega is not None:
        line += f", oscillation {report.omega:.4f}, growth {report.gamma:.4f}"
    if report.threshold_kind is not None:
        line += f" ({report.threshold_kind.value})"
    print(line)
