"""Gaussian state of the atom-photon pair: means, ordered second moments, Wick.

The initial condition is atomic vacuum tensor an optical coherent state with
amplitude alpha = |alpha| e^{-i phi} (note the minus sign in the exponent).
Linear evolution keeps the state Gaussian, so every higher operator moment
follows from the mean vector and the ordered second-moment matrix
S_ij = <dx_i dx_j> by the Isserlis/Wick expansion.

S is deliberately kept in operator order (not symmetrized): the correlators
of interest are normally-ordered products, and ordered moments make the
contraction bookkeeping direct and sign-free.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import InvalidParameterError
from .propagator import Propagator

# Operator labels for moment index tuples (1-based, matching x_1..x_4).
ATOM, ATOM_DAG, LIGHT, LIGHT_DAG = 1, 2, 3, 4

# The three full pairings of four slots; contractions take the earlier
# operator first, so each pair is (earlier, later).
_FULL_PAIRINGS = (
    (((0, 1), (2, 3))),
    (((0, 2), (1, 3))),
    (((0, 3), (1, 2))),
)


@dataclass(frozen=True)
class OpticalInit:
    """Initial coherent amplitude of the light field, alpha = amp * e^{-i phase}."""

    amp: float
    phase: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.amp) and math.isfinite(self.phase)):
            raise InvalidParameterError("amp and phase must be finite")
        if self.amp < 0:
            raise InvalidParameterError(f"amp must be >= 0, got {self.amp}")
        object.__setattr__(self, "phase", self.phase % (2.0 * math.pi))

    @property
    def alpha(self) -> complex:
        return self.amp * np.exp(-1j * self.phase)

    @property
    def intensity(self) -> float:
        return self.amp**2


@dataclass(frozen=True)
class GaussianState:
    """Mean vector and ordered second-moment matrix of (c, c†, a, a†)."""

    mean: np.ndarray
    smat: np.ndarray


def initial_state(init: OpticalInit) -> GaussianState:
    """Atomic vacuum tensor optical coherent state.

    The coherent displacement carries all the alpha-dependence; the
    fluctuation moments are the two-mode vacuum pattern S_12 = S_34 = 1.
    """
    alpha = init.alpha
    mean = np.array([0.0, 0.0, alpha, np.conj(alpha)], dtype=complex)
    smat = np.zeros((4, 4), dtype=complex)
    smat[0, 1] = 1.0
    smat[2, 3] = 1.0
    mean.setflags(write=False)
    smat.setflags(write=False)
    return GaussianState(mean=mean, smat=smat)


def evolve(s0: GaussianState, p: Propagator) -> GaussianState:
    """Push means and second moments through the Green's function.

    mean(t) = G mean(0) and S(t) = G S(0) G^T (plain transpose: the ordered
    moments transform bilinearly, with no conjugation).
    """
    g = p.gmat
    mean = g @ s0.mean
    smat = g @ s0.smat @ g.T
    mean.setflags(write=False)
    smat.setflags(write=False)
    return GaussianState(mean=mean, smat=smat)


def moment4(s: GaussianState, indices: tuple[int, int, int, int]) -> complex:
    """Ordered fourth moment <x_{i1} x_{i2} x_{i3} x_{i4}> by Wick expansion.

    ``indices`` are operator labels in 1..4 in the order the operators appear
    in the product. The expansion is the Isserlis formula with means: the
    product of the four means, plus the six single contractions times the two
    remaining means, plus the three order-respecting full pairings.
    """
    idx = tuple(i - 1 for i in indices)
    if any(i not in (0, 1, 2, 3) for i in idx):
        raise InvalidParameterError(f"indices must be in 1..4, got {indices}")
    mu = [s.mean[i] for i in idx]
    smat = s.smat

    total = mu[0] * mu[1] * mu[2] * mu[3]
    for a, b in combinations(range(4), 2):
        c, d = (k for k in range(4) if k not in (a, b))
        total += smat[idx[a], idx[b]] * mu[c] * mu[d]
    for (a, b), (c, d) in _FULL_PAIRINGS:
        total += smat[idx[a], idx[b]] * smat[idx[c], idx[d]]
    return complex(total)


def occupation(s: GaussianState, mode: str) -> float:
    """Mean excitation number <x† x> of the atomic or optical mode."""
    if mode == "atomic":
        p, q = 0, 1
    elif mode == "optical":
        p, q = 2, 3
    else:
        raise InvalidParameterError(f"mode must be 'atomic' or 'optical', got {mode!r}")
    return float((abs(s.mean[p]) ** 2 + s.smat[q, p]).real)
