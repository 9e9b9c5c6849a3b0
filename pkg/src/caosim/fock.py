"""Brute-force oracle: exact evolution in a truncated two-mode Fock basis.

The quadratic atom-photon Hamiltonian (including the counter-rotating
pair-creation terms, with no rotating-wave simplification) is built as a
dense real-symmetric matrix on the product basis |n_atom> x |n_phot> and
diagonalized once; one decomposition then serves every evolution time.

Truncation is policed, not assumed: a state is trusted only while the
population in the top two levels of either mode stays below ``tail_tol``.
Unstable regimes grow excitation numbers exponentially in time, so the
driver doubles the violating dimension until the tails pass or the product
dimension cap is hit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import expm_multiply

from .errors import InvalidParameterError, TruncationError
from .gaussian import OpticalInit
from .model import ModelParams
from .observables import OCCUPATION_THRESHOLD, CorrelationRecord

DEFAULT_DIM_CAP = 4096

#: The adaptive driver evolves with a sparse Krylov propagator, so it can
#: afford far larger truncations than the dense-diagonalization path.
SPARSE_DIM_CAP = 1 << 18


@dataclass(frozen=True)
class FockConfig:
    """Truncation sizes and the admissible tail population."""

    nmax_atom: int = 16
    nmax_phot: int = 16
    tail_tol: float = 1e-8
    dim_cap: int = DEFAULT_DIM_CAP

    def __post_init__(self):
        if self.nmax_atom < 2 or self.nmax_phot < 2:
            raise InvalidParameterError("truncation dimensions must be >= 2")
        if not 0.0 < self.tail_tol <= 1e-4:
            raise InvalidParameterError("tail_tol must be in (0, 1e-4]")

    @property
    def dim(self) -> int:
        return self.nmax_atom * self.nmax_phot


@dataclass(frozen=True)
class FockState:
    """Truncated two-mode state vector, shaped (nmax_atom, nmax_phot)."""

    amplitudes: np.ndarray
    tail_mass: float = 0.0
    trusted: bool = True

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def build_hamiltonian(params: ModelParams, cfg: FockConfig) -> np.ndarray:
    """Dense matrix of c†c + delta a†a + chi (a†c† + a†c + c†a + c a)."""
    if cfg.dim > cfg.dim_cap:
        raise TruncationError(
            f"product dimension {cfg.dim} exceeds cap {cfg.dim_cap}"
        )
    na, nph = cfg.nmax_atom, cfg.nmax_phot
    c = np.kron(np.diag(np.sqrt(np.arange(1.0, na)), 1), np.eye(nph))
    a = np.kron(np.eye(na), np.diag(np.sqrt(np.arange(1.0, nph)), 1))
    h = (
        c.T @ c
        + params.delta * (a.T @ a)
        + params.chi * (a.T @ c.T + a.T @ c + c.T @ a + c @ a)
    )
    return (h + h.T) / 2.0


def coherent_fock(amp: float, phase: float, cfg: FockConfig) -> FockState:
    """Atomic vacuum tensor truncated coherent state alpha = amp e^{-i phase}."""
    intensity = amp**2
    if intensity > cfg.nmax_phot / 4.0:
        raise TruncationError(
            f"|alpha|^2={intensity} too large for nmax_phot={cfg.nmax_phot} "
            "(needs |alpha|^2 <= nmax_phot/4)"
        )
    alpha = amp * np.exp(-1j * phase)
    n = np.arange(cfg.nmax_phot)
    # log-space Poisson amplitudes avoid factorial overflow at large cutoffs
    log_mag = -intensity / 2.0 + n * np.log(np.abs(alpha)) - 0.5 * np.array(
        [math.lgamma(k + 1.0) for k in n]
    ) if amp > 0 else np.where(n == 0, 0.0, -np.inf)
    phases = np.exp(-1j * phase * n)
    coh = np.exp(log_mag) * phases
    tail = float(1.0 - np.sum(np.abs(coh) ** 2))
    if tail > cfg.tail_tol:
        raise TruncationError(
            f"coherent tail mass {tail:.3e} exceeds tail_tol {cfg.tail_tol:.1e}",
            tail_mass=tail,
        )
    amplitudes = np.zeros((cfg.nmax_atom, cfg.nmax_phot), dtype=complex)
    amplitudes[0, :] = coh / np.linalg.norm(coh)
    return FockState(amplitudes=amplitudes, tail_mass=max(tail, 0.0))


def diagonalize(h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of the (self-adjoint) Hamiltonian; reusable over t."""
    return np.linalg.eigh(h)


def evolve_exact(
    psi0: FockState,
    h: np.ndarray,
    t: float,
    cfg: FockConfig,
    decomposition: tuple[np.ndarray, np.ndarray] | None = None,
) -> FockState:
    """psi(t) = exp(-i H t) psi(0), exact within the truncation.

    Pass a precomputed ``diagonalize(h)`` result when evolving the same
    Hamiltonian to many times. The returned state is flagged untrusted when
    the top two levels of either mode carry more than ``cfg.tail_tol``.
    """
    if abs(psi0.norm - 1.0) > 1e-10:
        raise InvalidParameterError(f"psi0 not normalized: |psi|={psi0.norm}")
    w, v = decomposition if decomposition is not None else diagonalize(h)
    flat = psi0.amplitudes.reshape(-1)
    evolved = v @ (np.exp(-1j * w * t) * (v.conj().T @ flat))
    amplitudes = evolved.reshape(psi0.amplitudes.shape)
    populations = np.abs(amplitudes) ** 2
    tail = float(max(populations[-2:, :].sum(), populations[:, -2:].sum()))
    return FockState(
        amplitudes=amplitudes,
        tail_mass=tail,
        trusted=tail <= cfg.tail_tol,
    )


def oracle_observables(
    psi: FockState, t: float = 0.0, threshold: float = OCCUPATION_THRESHOLD
) -> CorrelationRecord:
    """Occupations, g2 correlators and bounds by direct ladder-operator action.

    Normally-ordered moments are diagonal in the number basis, so they reduce
    to population-weighted sums. Undefined correlators (occupation below
    ``threshold``) become None, mirroring the moment-pipeline policy.
    """
    if not psi.trusted:
        raise TruncationError(
            f"state untrusted: tail mass {psi.tail_mass:.3e}",
            tail_mass=psi.tail_mass,
        )
    p = np.abs(psi.amplitudes) ** 2
    n_atom = np.arange(p.shape[0])[:, None]
    n_phot = np.arange(p.shape[1])[None, :]
    n1 = float(np.sum(n_atom * p))
    n3 = float(np.sum(n_phot * p))
    g11 = g33 = g13 = classical = quantum = None
    if n1 > threshold:
        g11 = float(np.sum(n_atom * (n_atom - 1) * p)) / n1**2
    if n3 > threshold:
        g33 = float(np.sum(n_phot * (n_phot - 1) * p)) / n3**2
    if n1 > threshold and n3 > threshold:
        g13 = float(np.sum(n_atom * n_phot * p)) / (n1 * n3)
        classical = math.sqrt(g11 * g33)
        quantum = math.sqrt((g11 + 1.0 / n1) * (g33 + 1.0 / n3))
    return CorrelationRecord(
        t=t,
        n1=n1,
        n3=n3,
        g11=g11,
        g33=g33,
        g13=g13,
        classical_bound=classical,
        quantum_bound=quantum,
    )


def sparse_hamiltonian(params: ModelParams, cfg: FockConfig) -> sparse.csc_matrix:
    """Sparse variant of :func:`build_hamiltonian` for Krylov evolution."""
    na, nph = cfg.nmax_atom, cfg.nmax_phot
    c = sparse.kron(
        sparse.diags(np.sqrt(np.arange(1.0, na)), 1), sparse.eye(nph)
    )
    a = sparse.kron(
        sparse.eye(na), sparse.diags(np.sqrt(np.arange(1.0, nph)), 1)
    )
    h = (
        c.T @ c
        + params.delta * (a.T @ a)
        + params.chi * (a.T @ c.T + a.T @ c + c.T @ a + c @ a)
    )
    return h.tocsc()


def oracle_records(
    params: ModelParams,
    init: OpticalInit,
    times: list[float],
    cfg: FockConfig | None = None,
) -> tuple[list[CorrelationRecord], FockConfig]:
    """Evolve to every requested time with adaptive truncation.

    Doubles the dimension whose tail violates ``tail_tol`` (photon side for
    an inadequate initial coherent state, either side after evolution) and
    retries, until all tails pass or the product dimension cap is hit.
    Returns the records and the truncation that was finally used.

    Evolution here uses a sparse Krylov propagator rather than the dense
    diagonalization of :func:`evolve_exact`: the unstable regimes develop
    heavy thermal-like number tails, and the truncations needed to police
    them to ``tail_tol`` are far beyond what a dense eigendecomposition can
    afford. The two evolution paths agree to roundoff at small dimensions
    (see the test suite).
    """
    if cfg is None:
        cfg = FockConfig(dim_cap=SPARSE_DIM_CAP)
    times = sorted(times)
    while True:
        try:
            psi0 = coherent_fock(init.amp, init.phase, cfg)
        except TruncationError:
            cfg = _grow(cfg, atom=False, phot=True)
            continue
        h = (-1j) * sparse_hamiltonian(params, cfg)
        states = []
        flat = psi0.amplitudes.reshape(-1)
        t_prev = 0.0
        for t in times:
            flat = expm_multiply(h * (t - t_prev), flat)
            t_prev = t
            amplitudes = flat.reshape(psi0.amplitudes.shape)
            pops = np.abs(amplitudes) ** 2
            tail = float(max(pops[-2:, :].sum(), pops[:, -2:].sum()))
            states.append(
                FockState(
                    amplitudes=amplitudes,
                    tail_mass=tail,
                    trusted=tail <= cfg.tail_tol,
                )
            )
        bad_atom = bad_phot = False
        for s in states:
            if not s.trusted:
                pops = np.abs(s.amplitudes) ** 2
                if pops[-2:, :].sum() > cfg.tail_tol:
                    bad_atom = True
                if pops[:, -2:].sum() > cfg.tail_tol:
                    bad_phot = True
        if not (bad_atom or bad_phot):
            records = [
                oracle_observables(s, t) for s, t in zip(states, times)
            ]
            return records, cfg
        cfg = _grow(cfg, atom=bad_atom, phot=bad_phot)


def _grow(cfg: FockConfig, atom: bool, phot: bool) -> FockConfig:
    na = cfg.nmax_atom * 2 if atom else cfg.nmax_atom
    nph = cfg.nmax_phot * 2 if phot else cfg.nmax_phot
    if na * nph > cfg.dim_cap:
        raise TruncationError(
            f"adaptive truncation needs {na}x{nph} > dimension cap {cfg.dim_cap}"
        )
    return replace(cfg, nmax_atom=na, nmax_phot=nph)
