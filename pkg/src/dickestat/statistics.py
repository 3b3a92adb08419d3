"""Photon-number distribution and derived emission statistics."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.stats import poisson

from . import kernels
from .ensemble import DickeInitialState
from .errors import AllUndefined
from .hamiltonian import build_effective_hamiltonian
from .propagator import (
    EvolutionAmplitudes,
    SpectralDecomposition,
    evolution_amplitudes,
    probability_batch,
    spectral_decompose,
)

MEAN_FLOOR = 1e-12
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
SERIES_CHUNK = 256


@dataclass(frozen=True)
class PhotonDistribution:
    tau: float
    probabilities: np.ndarray

    @property
    def support(self) -> int:
        return self.probabilities.shape[0]


@dataclass(frozen=True)
class EmissionStatistics:
    tau: float
    mean: float
    variance: float
    std: float
    mandel_q: Optional[float]
    fock_peak: tuple[int, float]


@dataclass(frozen=True)
class QminResult:
    q_min: float
    tau_at_min: float
    grid_points: int
    refined: bool


def photon_distribution(amps: EvolutionAmplitudes) -> PhotonDistribution:
    a = amps.amplitudes
    return PhotonDistribution(tau=amps.tau, probabilities=a.real**2 + a.imag**2)


def _summaries(probs: np.ndarray):
    """Vectorised mean/variance/Q/peak for a (T, d) probability array."""
    _, mean, fact2, peak_n, peak_p = kernels.distribution_moments(probs)
    variance = np.maximum(fact2 + mean - mean * mean, 0.0)
    defined = mean >= MEAN_FLOOR
    with np.errstate(divide="ignore", invalid="ignore"):
        q = np.where(defined, (variance - mean) / np.where(defined, mean, 1.0), np.nan)
    return mean, variance, q, peak_n, peak_p


def moments(dist: PhotonDistribution) -> EmissionStatistics:
    mean, var, q, peak_n, peak_p = _summaries(dist.probabilities[None, :])
    return _record(dist.tau, mean[0], var[0], q[0], peak_n[0], peak_p[0])


def _record(tau, mean, var, q, peak_n, peak_p) -> EmissionStatistics:
    return EmissionStatistics(
        tau=float(tau),
        mean=float(mean),
        variance=float(var),
        std=math.sqrt(var),
        mandel_q=None if math.isnan(q) else float(q),
        fock_peak=(int(peak_n), float(peak_p)),
    )


def decompose(state: DickeInitialState) -> SpectralDecomposition:
    return spectral_decompose(build_effective_hamiltonian(state))


def photon_distribution_at(state: DickeInitialState, tau: float) -> PhotonDistribution:
    """Full pipeline for a single time point."""
    return photon_distribution(evolution_amplitudes(decompose(state), tau))


def mandel_q_curve(decomp: SpectralDecomposition, taus) -> np.ndarray:
    """Mandel-Q at each tau; NaN where the mean photon number is below the floor."""
    taus = np.asarray(taus, dtype=float)
    return _summaries(probability_batch(decomp, taus))[2]


def _q_at(decomp: SpectralDecomposition, tau: float) -> float:
    q = _summaries(photon_distribution(evolution_amplitudes(decomp, tau)).probabilities[None, :])[2][0]
    return math.inf if math.isnan(q) else float(q)


def _golden_section(f, a: float, b: float, xtol: float):
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while b - a > xtol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    return (c, fc) if fc <= fd else (d, fd)


def q_min(state: DickeInitialState, grid_points: int = 2000, refine: bool = True) -> QminResult:
    """Minimum Mandel-Q over the first evolution cycle 0 < tau <= 1."""
    if grid_points < 100:
        raise ValueError(f"grid_points must be >= 100, got {grid_points}")
    decomp = decompose(state)
    taus = np.linspace(0.0, 1.0, grid_points + 1)[1:]
    q = mandel_q_curve(decomp, taus)
    if np.all(np.isnan(q)):
        raise AllUndefined(
            f"Mandel-Q undefined on the whole grid for {state.label()}: "
            "the ensemble holds no excitations and cannot emit"
        )
    i = int(np.nanargmin(q))
    best_tau, best_q = float(taus[i]), float(q[i])
    if refine:
        lo = float(taus[i - 1]) if i > 0 else 0.0
        hi = float(taus[i + 1]) if i + 1 < taus.shape[0] else 1.0
        t, v = _golden_section(lambda x: _q_at(decomp, x), lo, hi, 1e-6)
        if v < best_q:
            best_tau, best_q = t, v
    return QminResult(q_min=best_q, tau_at_min=best_tau, grid_points=grid_points, refined=refine)


def birula_alpha(n_atoms: int, tau: float) -> float:
    """Coherent-state amplitude |alpha| = tau N / 2 of early maximally superradiant emission."""
    if tau < 0:
        raise ValueError("tau must be non-negative")
    return tau * n_atoms / 2.0


def _poisson_rows(means: np.ndarray, d: int):
    n = np.arange(d)
    pmf = poisson.pmf(n[None, :], means[:, None])
    return pmf, poisson.sf(d - 1, means)


def _tv_rows(probs: np.ndarray, means: np.ndarray) -> np.ndarray:
    pmf, tail = _poisson_rows(np.asarray(means, dtype=float), probs.shape[1])
    return 0.5 * (np.abs(probs - pmf).sum(axis=1) + tail)


def poisson_tv_distance(dist: PhotonDistribution, mean: float) -> float:
    """Total-variation distance to Poisson(mean); the tail beyond the support counts fully."""
    if mean < 0:
        raise ValueError("mean must be non-negative")
    return float(_tv_rows(dist.probabilities[None, :], np.array([mean]))[0])


def _check_taus(taus) -> np.ndarray:
    taus = np.asarray(taus, dtype=float).reshape(-1)
    if np.any(taus < 0):
        raise ValueError("tau values must be non-negative")
    if np.any(np.diff(taus) < 0):
        raise ValueError("tau values must be non-decreasing")
    return taus


def series_columns(decomp: SpectralDecomposition, taus, with_tv: bool = True) -> dict:
    """Column arrays (tau, mean, variance, std, mandel_q, peaks, tv) for many taus."""
    taus = _check_taus(taus)
    cols = {k: [] for k in ("mean", "variance", "mandel_q", "fock_peak_n", "fock_peak_p", "tv_to_poisson")}
    for start in range(0, taus.shape[0], SERIES_CHUNK):
        probs = probability_batch(decomp, taus[start:start + SERIES_CHUNK])
        mean, var, q, pn, pp = _summaries(probs)
        cols["mean"].append(mean)
        cols["variance"].append(var)
        cols["mandel_q"].append(q)
        cols["fock_peak_n"].append(pn)
        cols["fock_peak_p"].append(pp)
        if with_tv:
            cols["tv_to_poisson"].append(_tv_rows(probs, mean))
    out = {"tau": taus}
    for k, parts in cols.items():
        if parts:
            out[k] = np.concatenate(parts)
        elif k != "tv_to_poisson" or with_tv:
            out[k] = np.empty(0)
    out["std"] = np.sqrt(out["variance"])
    return out


def statistics_series(state: DickeInitialState, taus: Sequence[float]) -> list[EmissionStatistics]:
    """Statistics at every tau from one shared decomposition."""
    taus = _check_taus(taus)
    cols = series_columns(decompose(state), taus, with_tv=False)
    return [
        _record(t, m, v, q, pn, pp)
        for t, m, v, q, pn, pp in zip(
            cols["tau"], cols["mean"], cols["variance"], cols["mandel_q"],
            cols["fock_peak_n"], cols["fock_peak_p"],
        )
    ]
