"""Independent reference computations.

Two routes that do not share the spectral propagator:

* a brute-force model of N <= 4 two-level atoms and one truncated mode in
  the full product space (spin configurations x photon number), built
  directly from the collective operators and evolved by dense
  diagonalization;
* an adaptive high-order Taylor integrator of i dG/dtau = H' G, which shares
  H' with the main pipeline but not the exponentiation.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.linalg import eigh

from . import kernels
from .ensemble import DickeInitialState
from .errors import DimensionError, RangeError, StepFailure
from .hamiltonian import build_effective_hamiltonian
from .propagator import probability_batch, spectral_decompose
from .statistics import PhotonDistribution

MAX_ATOMS = 4
VALIDATION_THRESHOLD = 1e-10
TAYLOR_ORDER = 12

_SIGMA_PLUS = np.array([[0.0, 0.0], [1.0, 0.0]])  # basis (ground, excited)
_SIGMA_Z = np.diag([-1.0, 1.0])


def _embed(op: np.ndarray, site: int, n_atoms: int) -> np.ndarray:
    out = np.ones((1, 1))
    for i in range(n_atoms):
        out = np.kron(out, op if i == site else np.eye(2))
    return out


@dataclass(frozen=True)
class FullSpaceModel:
    """Interaction Hamiltonian over (spin configurations) x (photon number 0..fock_cutoff).

    Entries are in units of |g|:
    delta * Jz + exp(-i phi) a J+ + exp(i phi) a^dagger J-.
    """

    n_atoms: int
    fock_cutoff: int
    delta: float = 0.0
    phi: float = 0.0

    def __post_init__(self):
        if not 1 <= self.n_atoms <= MAX_ATOMS:
            raise DimensionError(f"brute force supports 1..{MAX_ATOMS} atoms, got {self.n_atoms}")
        if self.fock_cutoff < self.n_atoms + 1:
            raise RangeError(f"fock_cutoff must be >= n_atoms + 1 = {self.n_atoms + 1}")

    @property
    def atom_dim(self) -> int:
        return 2**self.n_atoms

    @property
    def photon_dim(self) -> int:
        return self.fock_cutoff + 1

    @cached_property
    def collective(self):
        """(J+, J-, Jz) on the atomic space."""
        jp = sum(_embed(_SIGMA_PLUS, i, self.n_atoms) for i in range(self.n_atoms))
        jz = sum(_embed(_SIGMA_Z, i, self.n_atoms) for i in range(self.n_atoms)) / 2
        return jp, jp.T.copy(), jz

    @cached_property
    def annihilation(self) -> np.ndarray:
        return np.diag(np.sqrt(np.arange(1, self.photon_dim, dtype=float)), k=1)

    @cached_property
    def hamiltonian(self) -> np.ndarray:
        jp, jm, jz = self.collective
        a = self.annihilation
        eye_ph = np.eye(self.photon_dim)
        return (
            self.delta * np.kron(jz, eye_ph).astype(complex)
            + np.exp(-1j * self.phi) * np.kron(jp, a)
            + np.exp(1j * self.phi) * np.kron(jm, a.T)
        )

    @cached_property
    def excitation_number(self) -> np.ndarray:
        _, _, jz = self.collective
        n_ph = np.diag(np.arange(self.photon_dim, dtype=float))
        return np.kron(jz + self.n_atoms / 2 * np.eye(self.atom_dim), np.eye(self.photon_dim)) + np.kron(
            np.eye(self.atom_dim), n_ph
        )

    @cached_property
    def eigensystem(self):
        return eigh(self.hamiltonian)

    def evolve(self, psi0: np.ndarray, tau: float) -> np.ndarray:
        w, v = self.eigensystem
        return v @ (np.exp(-1j * tau * w) * (v.conj().T @ psi0))

    def with_vacuum(self, atomic: np.ndarray) -> np.ndarray:
        vac = np.zeros(self.photon_dim)
        vac[0] = 1.0
        return np.kron(np.asarray(atomic, dtype=complex), vac)

    def photon_marginal(self, psi: np.ndarray) -> np.ndarray:
        amp = psi.reshape(self.atom_dim, self.photon_dim)
        return np.sum(amp.real**2 + amp.imag**2, axis=0)


def symmetric_dicke_vector(n_atoms: int, excited: int) -> np.ndarray:
    """|J=N/2, M=excited-N/2> as an equal superposition of spin configurations."""
    if not 0 <= excited <= n_atoms:
        raise RangeError(f"excited={excited} outside [0, {n_atoms}]")
    vec = np.zeros(2**n_atoms)
    for ups in itertools.combinations(range(n_atoms), excited):
        index = sum(1 << (n_atoms - 1 - i) for i in ups)  # site 0 is the leading kron factor
        vec[index] = 1.0
    return vec / np.linalg.norm(vec)


def singlet_vector() -> np.ndarray:
    """(|ge> - |eg>)/sqrt(2), the two-atom dark state."""
    vec = np.zeros(4)
    vec[0b01] = 1.0
    vec[0b10] = -1.0
    return vec / np.sqrt(2.0)


def brute_force_distribution(
    n_atoms: int, excited: int, delta: float, tau: float, phi: float = 0.0, fock_cutoff: int | None = None
) -> PhotonDistribution:
    """Photon marginal after evolving |Dicke>|0> in the full product space."""
    if n_atoms > MAX_ATOMS:
        raise DimensionError(f"brute force supports at most {MAX_ATOMS} atoms, got {n_atoms}")
    model = FullSpaceModel(n_atoms, fock_cutoff or n_atoms + 1, delta, phi)
    psi = model.evolve(model.with_vacuum(symmetric_dicke_vector(n_atoms, excited)), tau)
    return PhotonDistribution(tau=float(tau), probabilities=model.photon_marginal(psi))


def singlet_distribution(delta: float, tau: float, phi: float = 0.0) -> PhotonDistribution:
    """Photon marginal for two atoms starting in the singlet (J=0)."""
    model = FullSpaceModel(2, 3, delta, phi)
    psi = model.evolve(model.with_vacuum(singlet_vector()), tau)
    return PhotonDistribution(tau=float(tau), probabilities=model.photon_marginal(psi))


def ode_distribution(state: DickeInitialState, tau: float, tol: float = 1e-10) -> PhotonDistribution:
    """Integrate the amplitude equation step by step instead of diagonalizing.

    ``tol`` bounds the estimated error per unit time, so it approximates the
    global error at ``tau``.
    """
    if not 1e-12 <= tol <= 1e-6:
        raise ValueError(f"tol must lie in [1e-12, 1e-6], got {tol}")
    if tau < 0:
        raise ValueError("tau must be non-negative")
    h = build_effective_hamiltonian(state)
    psi0 = np.zeros(h.dimension, dtype=complex)
    psi0[0] = 1.0
    psi, accepted, rejected, status = kernels.taylor_propagate(
        np.ascontiguousarray(h.diag), np.ascontiguousarray(h.offdiag), psi0,
        float(tau), float(tol), TAYLOR_ORDER, 10_000_000,
    )
    if status == 1:
        raise StepFailure(f"step size underflow after {accepted} accepted / {rejected} rejected steps")
    if status == 2:
        raise StepFailure(f"step budget exhausted after {accepted + rejected} steps")
    return PhotonDistribution(tau=float(tau), probabilities=psi.real**2 + psi.imag**2)


@dataclass
class ValidationEntry:
    n_atoms: int
    excited: int
    delta: float
    tau: float
    max_diff: float


@dataclass
class ValidationReport:
    entries: list[ValidationEntry]
    threshold: float = VALIDATION_THRESHOLD

    @property
    def worst(self) -> ValidationEntry | None:
        return max(self.entries, key=lambda e: e.max_diff, default=None)

    @property
    def passed(self) -> bool:
        w = self.worst
        return w is None or w.max_diff < self.threshold


def validate(max_atoms: int = MAX_ATOMS, deltas=(0.0, 1.0, 10.0), taus=None) -> ValidationReport:
    """Compare the main pipeline with brute force on every small configuration."""
    if taus is None:
        taus = np.linspace(0.0, 3.0, 25)
    taus = np.asarray(taus, dtype=float).reshape(-1)
    if max_atoms > MAX_ATOMS:
        raise DimensionError(f"brute force supports at most {MAX_ATOMS} atoms, got {max_atoms}")
    entries = []
    for n_atoms in range(1, max_atoms + 1):
        for excited in range(n_atoms + 1):
            atomic = symmetric_dicke_vector(n_atoms, excited)
            for delta in deltas:
                state = DickeInitialState(n_atoms, 2 * excited - n_atoms, delta)
                pipeline = probability_batch(
                    spectral_decompose(build_effective_hamiltonian(state)), taus
                )
                model = FullSpaceModel(n_atoms, n_atoms + 1, delta)
                psi0 = model.with_vacuum(atomic)
                for tau, p in zip(taus, pipeline):
                    ref = model.photon_marginal(model.evolve(psi0, tau))
                    padded = np.zeros_like(ref)
                    padded[: p.shape[0]] = p
                    entries.append(
                        ValidationEntry(n_atoms, excited, float(delta), float(tau),
                                        float(np.max(np.abs(padded - ref))))
                    )
    return ValidationReport(entries)
