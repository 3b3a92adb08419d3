"""Spectral time evolution of the vacuum-photon initial state.

H' is diagonalized once; the amplitude of n photons at time tau is

    A_n(tau) = sum_k V[n, k] exp(-i tau lambda_k) V[0, k]

which costs O(d^2) per time point. The free evolution exp(-i H0 t) is a
global phase on the excitation sector and is not applied.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import LinAlgError, eigh_tridiagonal

from .ensemble import DickeInitialState
from .errors import ConvergenceFailure
from .hamiltonian import EffectiveHamiltonian

# caps the (T, d) complex work arrays of batch evaluation at ~64 MB each
_BATCH_ELEMENTS = 4_000_000


@dataclass(frozen=True)
class SpectralDecomposition:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    source: EffectiveHamiltonian = field(repr=False)

    @property
    def dimension(self) -> int:
        return self.eigenvalues.shape[0]

    @property
    def initial_overlaps(self) -> np.ndarray:
        """Overlap of each eigenvector with the vacuum-photon basis state."""
        return self.eigenvectors[0]


@dataclass(frozen=True)
class EvolutionAmplitudes:
    tau: float
    amplitudes: np.ndarray

    @property
    def norm(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    # first nonzero component of every column made positive
    nz = vectors != 0.0
    first = np.argmax(nz, axis=0)
    lead = vectors[first, np.arange(vectors.shape[1])]
    return vectors * np.where(lead < 0.0, -1.0, 1.0)


def spectral_decompose(h: EffectiveHamiltonian) -> SpectralDecomposition:
    """Eigen-decomposition of H' with ascending eigenvalues."""
    d = h.dimension
    if d == 1:
        w = np.array(h.diag, dtype=float)
        v = np.ones((1, 1))
    else:
        try:
            w, v = eigh_tridiagonal(h.diag, h.offdiag, check_finite=True)
        except LinAlgError as exc:
            info = _lapack_info(str(exc))
            raise ConvergenceFailure(d, info, str(exc)) from exc
        order = np.argsort(w, kind="stable")
        w, v = w[order], _fix_signs(v[:, order])
    w.flags.writeable = False
    v.flags.writeable = False
    return SpectralDecomposition(eigenvalues=w, eigenvectors=v, source=h)


def _lapack_info(message: str):
    for token in message.replace("=", " ").split():
        if token.lstrip("-").isdigit():
            return int(token)
    return None


def _phase_weights(decomp: SpectralDecomposition, taus: np.ndarray):
    """Contiguous real/imaginary parts of exp(-i tau lambda_k) V[0, k], shape (T, d)."""
    phase = np.outer(taus, decomp.eigenvalues)
    v0 = decomp.eigenvectors[0]
    return np.cos(phase) * v0, -np.sin(phase) * v0


def evolution_amplitudes(decomp: SpectralDecomposition, tau: float) -> EvolutionAmplitudes:
    if tau < 0:
        raise ValueError(f"tau must be non-negative, got {tau}")
    v = decomp.eigenvectors
    if tau == 0:
        amps = np.zeros(decomp.dimension, dtype=np.complex128)
        amps[0] = 1.0
        return EvolutionAmplitudes(tau=0.0, amplitudes=amps)
    cr, ci = _phase_weights(decomp, np.array([tau], dtype=float))
    # real V times the real and imaginary weights separately keeps V real
    amps = v @ cr[0] + 1j * (v @ ci[0])
    return EvolutionAmplitudes(tau=float(tau), amplitudes=amps)


def amplitude_batch(decomp: SpectralDecomposition, taus) -> np.ndarray:
    """Amplitudes at many times as a (len(taus), d) complex array."""
    taus = np.asarray(taus, dtype=float).reshape(-1)
    if np.any(taus < 0):
        raise ValueError("tau must be non-negative")
    v = decomp.eigenvectors
    d = decomp.dimension
    out = np.empty((taus.shape[0], d), dtype=np.complex128)
    step = max(1, _BATCH_ELEMENTS // max(d, 1))
    vt = v.T
    for start in range(0, taus.shape[0], step):
        sl = slice(start, start + step)
        cr, ci = _phase_weights(decomp, taus[sl])
        out[sl].real = cr @ vt
        out[sl].imag = ci @ vt
    # U(0) is the identity; avoid round-off from V V^T
    start = taus == 0.0
    out[start] = 0.0
    out[start, 0] = 1.0
    return out


def probability_batch(decomp: SpectralDecomposition, taus) -> np.ndarray:
    """|A_n(tau)|^2 as a (len(taus), d) array, evaluated in bounded chunks."""
    taus = np.asarray(taus, dtype=float).reshape(-1)
    d = decomp.dimension
    out = np.empty((taus.shape[0], d))
    step = max(1, _BATCH_ELEMENTS // max(d, 1))
    for start in range(0, taus.shape[0], step):
        a = amplitude_batch(decomp, taus[start:start + step])
        out[start:start + step] = a.real**2 + a.imag**2
    return out


def joint_state_amplitudes(
    state: DickeInitialState, decomp: SpectralDecomposition, tau: float
) -> np.ndarray:
    """Coefficients of |J, M-n>|n> (interaction picture), indexed by n.

    Entry n carries the coupling phase exp(i n phi) on top of A_n(tau).
    """
    if decomp.dimension != state.dimension:
        raise ValueError("decomposition was not built from this state")
    amps = evolution_amplitudes(decomp, tau).amplitudes
    n = np.arange(state.dimension)
    return np.exp(1j * n * state.phi) * amps
