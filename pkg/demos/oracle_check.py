"""
Cross-checking the moment pipeline against a truncated Fock oracle
==================================================================

The library computes statistics from Gaussian moments, which is exact
for this quadratic model but rests on a chain of algebra (Green's
function, Wick expansion, normalization). A brute-force check evolves
the same state in a truncated number basis and reads the correlations
off the wavefunction directly.

The oracle grows its truncation until the population in the top Fock
levels is negligible, so agreement below is a real consistency test,
not two codes sharing one approximation.
"""

import math

from caosim import (
    ModelParams,
    OpticalInit,
    build_generator,
    correlation_record,
    evolve,
    green_function,
    initial_state,
    oracle_records,
)

params = ModelParams(1.0, 1.0)
init = OpticalInit(2.0, math.pi / 4)
times = [0.25, 0.5, 1.0, 2.0]

fock, cfg = oracle_records(params, init, times)
print(f"oracle truncation used: {cfg.nmax_atom} x {cfg.nmax_phot} levels\n")

gen = build_generator(params)
s0 = initial_state(init)

print(f"{'t':>5} {'n3 gauss':>12} {'n3 fock':>12} {'g13 gauss':>11} "
      f"{'g13 fock':>11} {'worst dev':>10}")
for rec in fock:
    gauss = correlation_record(evolve(s0, green_function(gen, rec.t)), rec.t)
    dev = max(
        abs(rec.n3 - gauss.n3) / gauss.n3,
        abs(rec.g13 - gauss.g13),
    )
    print(f"{rec.t:5.2f} {gauss.n3:12.8f} {rec.n3:12.8f} "
          f"{gauss.g13:11.7f} {rec.g13:11.7f} {dev:10.2e}")
