"""Second-order statistics: single-mode g2, cross-correlation, and bounds.

All correlators are normally-ordered equal-time quantities built from the
generic fourth-moment kernel of the gaussian module:

  g_ii = <x† x† x x> / <x† x>^2          (1 coherent, 2 chaotic, >2 superchaotic)
  g_13 = <c† c a† a> / (<c† c> <a† a>)   (atom-photon cross-correlation)

Classical fields obey g_13 <= sqrt(g_11 g_33); quantum fields may violate
that bound but never sqrt((g_11 + 1/n_1)(g_33 + 1/n_3)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

import numpy as np

from .errors import (
    InvalidParameterError,
    NonConvergenceError,
    PropagatorOverflowError,
    UndefinedCorrelationError,
)
from .gaussian import (
    ATOM,
    ATOM_DAG,
    LIGHT,
    LIGHT_DAG,
    GaussianState,
    OpticalInit,
    evolve,
    initial_state,
    moment4,
    occupation,
)
from .model import ModelParams, Regime, build_generator, classify_regime
from .propagator import green_function

#: Occupations below this are treated as zero, making normalized correlators 0/0.
OCCUPATION_THRESHOLD = 1e-12

#: Correlators are real by construction; larger relative imaginary residues
#: indicate a bug upstream.
IMAG_RESIDUE_RTOL = 1e-10

_G2_INDICES = {
    "atomic": (ATOM_DAG, ATOM_DAG, ATOM, ATOM),
    "optical": (LIGHT_DAG, LIGHT_DAG, LIGHT, LIGHT),
}


@dataclass(frozen=True)
class CorrelationRecord:
    """Time-stamped bundle of occupations, correlators and both bounds.

    A field is ``None`` when the correlator is undefined (0/0 at vanishing
    occupation, e.g. the atomic mode at t=0).
    """

    t: float
    n1: float
    n3: float
    g11: float | None
    g33: float | None
    g13: float | None
    classical_bound: float | None
    quantum_bound: float | None

    def defined(self, name: str) -> bool:
        return getattr(self, name) is not None

    @classmethod
    def field_names(cls) -> list[str]:
        return [f.name for f in fields(cls)]


def _real_part(value: complex, label: str) -> float:
    scale = max(abs(value), 1.0)
    if abs(value.imag) > IMAG_RESIDUE_RTOL * scale:
        raise ArithmeticError(
            f"{label} has relative imaginary residue {abs(value.imag) / scale:.3e}"
        )
    return value.real


def g2_single(
    s: GaussianState, mode: str, threshold: float = OCCUPATION_THRESHOLD
) -> float:
    """Normalized second-order correlation of one mode."""
    if mode not in _G2_INDICES:
        raise InvalidParameterError(f"mode must be 'atomic' or 'optical', got {mode!r}")
    n = occupation(s, mode)
    if n <= threshold:
        raise UndefinedCorrelationError(f"g2_{mode}", n, threshold)
    num = moment4(s, _G2_INDICES[mode])
    return _real_part(num, f"g2_{mode} numerator") / n**2


def g2_cross(s: GaussianState, threshold: float = OCCUPATION_THRESHOLD) -> float:
    """Equal-time intensity cross-correlation between the two modes."""
    n1 = occupation(s, "atomic")
    n3 = occupation(s, "optical")
    if n1 <= threshold:
        raise UndefinedCorrelationError("g2_cross (atomic)", n1, threshold)
    if n3 <= threshold:
        raise UndefinedCorrelationError("g2_cross (optical)", n3, threshold)
    num = moment4(s, (ATOM_DAG, ATOM, LIGHT_DAG, LIGHT))
    return _real_part(num, "g2_cross numerator") / (n1 * n3)


def bounds(
    s: GaussianState, threshold: float = OCCUPATION_THRESHOLD
) -> tuple[float, float]:
    """Classical and quantum upper bounds on the cross-correlation."""
    n1 = occupation(s, "atomic")
    n3 = occupation(s, "optical")
    if n1 <= threshold:
        raise UndefinedCorrelationError("bounds (atomic)", n1, threshold)
    if n3 <= threshold:
        raise UndefinedCorrelationError("bounds (optical)", n3, threshold)
    g11 = g2_single(s, "atomic", threshold)
    g33 = g2_single(s, "optical", threshold)
    classical = math.sqrt(g11 * g33)
    quantum = math.sqrt((g11 + 1.0 / n1) * (g33 + 1.0 / n3))
    return classical, quantum


def correlation_record(
    s: GaussianState, t: float, threshold: float = OCCUPATION_THRESHOLD
) -> CorrelationRecord:
    """Evaluate every observable, mapping undefined correlators to None."""

    def _try(fn, *args):
        try:
            return fn(*args, threshold)
        except UndefinedCorrelationError:
            return None

    both = _try(bounds, s)
    return CorrelationRecord(
        t=t,
        n1=occupation(s, "atomic"),
        n3=occupation(s, "optical"),
        g11=_try(g2_single, s, "atomic"),
        g33=_try(g2_single, s, "optical"),
        g13=_try(g2_cross, s),
        classical_bound=both[0] if both else None,
        quantum_bound=both[1] if both else None,
    )


def threshold_g2(
    params: ModelParams,
    init: OpticalInit,
    delta_c: float,
    tol: float = 1e-9,
) -> float:
    """Closed-form asymptotic g2 on the instability thresholds delta_c in {0, 4 chi^2}.

    On those critical surfaces the field amplitudes grow linearly in time and
    both single-mode correlations approach the same constant, which lies in
    [1, 3] for every intensity and phase.
    """
    chi = params.chi
    if chi <= 0:
        raise InvalidParameterError("threshold formula requires chi > 0")
    pscale = max(1.0, abs(delta_c))
    if abs(delta_c) > tol and abs(delta_c - 4.0 * chi**2) > tol * pscale:
        raise InvalidParameterError(
            f"delta_c must be 0 or 4*chi^2={4.0 * chi**2}, got {delta_c}"
        )
    if abs(params.delta - delta_c) > tol * pscale:
        raise InvalidParameterError(
            f"params.delta={params.delta} is off the critical surface delta={delta_c}"
        )
    cos2 = math.cos(init.phase - math.pi * delta_c / (8.0 * chi**2)) ** 2
    u = init.intensity * cos2
    a = 1.0 + delta_c
    return 1.0 + 2.0 * a * (a + 8.0 * u) / (a + 4.0 * u) ** 2


@dataclass(frozen=True)
class LongTimePolicy:
    """How the long-time limit is extracted.

    Regime ii/iv: sample g2 over doubling windows [t, 2t] until the spread is
    below ``rtol`` (regime ii) or window means agree to ``rtol_threshold``
    (regime iv). Regime iii: summary statistics over one oscillation period
    starting at ``t_ref``, plus the value at ``fixed_t`` when given.
    """

    t_start: float = 10.0
    t_max: float = 2000.0
    rtol: float = 1e-6
    rtol_threshold: float = 1e-3
    samples_per_window: int = 9
    t_ref: float = 30.0
    fixed_t: float | None = None


@dataclass(frozen=True)
class OscillationSummary:
    """Stationary-oscillation statistics of g2 in the beating regime."""

    minimum: float
    maximum: float
    mean: float
    period: float
    fixed_t_value: float | None = None


def _g2_at(params, init, mode, t, threshold=OCCUPATION_THRESHOLD):
    gen = build_generator(params)
    state = evolve(initial_state(init), green_function(gen, t))
    if mode == "cross":
        return g2_cross(state, threshold)
    return g2_single(state, mode, threshold)


def _window_values(params, init, mode, t_lo, t_hi, count):
    return [
        _g2_at(params, init, mode, t)
        for t in np.linspace(t_lo, t_hi, count)
    ]


def long_time_g2(
    params: ModelParams,
    init: OpticalInit,
    mode: str = "atomic",
    policy: LongTimePolicy = LongTimePolicy(),
):
    """Long-time value of a correlation in the unstable regimes.

    Returns a converged scalar in regimes ii and iv, and an
    :class:`OscillationSummary` in regime iii.
    """
    if mode not in ("atomic", "optical", "cross"):
        raise InvalidParameterError(f"unknown mode {mode!r}")
    report = classify_regime(build_generator(params))
    regime = report.regime
    if regime == Regime.STABLE_I:
        raise InvalidParameterError(
            "long-time extraction requires an unstable regime (ii, iii or iv)"
        )

    if regime == Regime.BEATING_EXPONENTIAL_III:
        period = 2.0 * math.pi / report.omega
        values = _window_values(
            params, init, mode, policy.t_ref, policy.t_ref + period, 65
        )
        fixed = _g2_at(params, init, mode, policy.fixed_t) if policy.fixed_t else None
        return OscillationSummary(
            minimum=min(values),
            maximum=max(values),
            mean=float(np.mean(values)),
            period=period,
            fixed_t_value=fixed,
        )

    t = policy.t_start
    last = None
    while t <= policy.t_max:
        try:
            values = _window_values(
                params, init, mode, t, 2.0 * t, policy.samples_per_window
            )
        except PropagatorOverflowError as exc:
            raise NonConvergenceError(
                f"moments overflow at t={exc.t} before convergence",
                last_window=last,
            ) from exc
        mean = float(np.mean(values))
        spread = (max(values) - min(values)) / max(abs(mean), 1e-300)
        if regime == Regime.SINGLE_EXPONENTIAL_II:
            if spread < policy.rtol:
                return mean
        else:  # regime iv: oscillations decay slowly, compare window means
            if last is not None and abs(mean - last[0]) <= policy.rtol_threshold * abs(
                mean
            ):
                return mean
        last = (mean, spread, t)
        t *= 2.0
    raise NonConvergenceError(
        f"no convergence up to t_max={policy.t_max}", last_window=last
    )
