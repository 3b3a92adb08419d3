"""Real symmetric tridiagonal effective Hamiltonian for |J, M>|0>.

Only the excitation sector reachable from the vacuum-photon initial state is
built. Rows and columns are indexed by photon number n = 0..J+M, with the
atoms in |J, q = M - n>. In units of |g|::

    H[n, n]     = (M - n) * delta
    H[n, n + 1] = sqrt((J - M + n + 1) (J + M - n) (n + 1))

The complementary block (q > M) is decoupled from this sector because its
link coefficient carries a factor (M - q) = 0, so it is never formed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .ensemble import DickeInitialState
from .errors import CoefficientOverflow

_INT64_SAFE = 2**63 - 1


@dataclass(frozen=True)
class EffectiveHamiltonian:
    diag: np.ndarray
    offdiag: np.ndarray
    source: DickeInitialState = field(repr=False)

    @property
    def dimension(self) -> int:
        return self.diag.shape[0]

    def dense(self) -> np.ndarray:
        h = np.diag(self.diag)
        if self.dimension > 1:
            idx = np.arange(self.dimension - 1)
            h[idx, idx + 1] = self.offdiag
            h[idx + 1, idx] = self.offdiag
        return h

    def matvec(self, x: np.ndarray) -> np.ndarray:
        y = self.diag * x
        if self.dimension > 1:
            y[:-1] += self.offdiag * x[1:]
            y[1:] += self.offdiag * x[:-1]
        return y


def coupling_radicands(state: DickeInitialState) -> list[int]:
    """Exact integer products (J-M+n+1)(J+M-n)(n+1) for n = 0..J+M-1."""
    lower = (state.two_j - state.two_m) // 2  # J - M
    upper = state.excitation_count            # J + M
    n = np.arange(upper, dtype=np.int64)
    # (J-M+n+1)(J+M-n)(n+1) <= (2J+1)^3; stay in int64 whenever that bound fits
    if (state.two_j + 1) ** 3 <= _INT64_SAFE:
        return ((lower + n + 1) * (upper - n) * (n + 1)).tolist()
    return [(lower + k + 1) * (upper - k) * (k + 1) for k in range(upper)]


def offdiagonal_couplings(state: DickeInitialState) -> np.ndarray:
    """Photon-emission couplings between neighbouring photon numbers."""
    try:
        radicands = np.array([float(r) for r in coupling_radicands(state)], dtype=float)
    except OverflowError as exc:
        raise CoefficientOverflow(
            f"coupling coefficient for 2J={state.two_j} exceeds float range"
        ) from exc
    return np.sqrt(radicands)


def diagonal_detunings(state: DickeInitialState) -> np.ndarray:
    n = np.arange(state.dimension, dtype=float)
    return (state.two_m / 2 - n) * state.delta


def build_effective_hamiltonian(state: DickeInitialState) -> EffectiveHamiltonian:
    """Build the tridiagonal block acting on the reachable excitation sector."""
    diag = diagonal_detunings(state)
    offdiag = offdiagonal_couplings(state)
    diag.flags.writeable = False
    offdiag.flags.writeable = False
    return EffectiveHamiltonian(diag=diag, offdiag=offdiag, source=state)


def generator_radicand(two_j: int, n: int, two_q: int, two_qp: int) -> Fraction:
    """Radicand of the off-diagonal generator element between atomic indices.

    This evaluates the general coupled-basis generator (arbitrary photon
    sector offset ``n``) directly, before any reindexing by photon number.
    Returns 0 for non-adjacent indices. A negative value signals an element
    outside the physical sector.
    """
    j, q, qp = Fraction(two_j, 2), Fraction(two_q, 2), Fraction(two_qp, 2)
    if q - 1 == qp:
        return (j - qp) * (j + qp + 1) * (j - qp + n)
    if q + 1 == qp:
        return (j + qp) * (j - qp + 1) * (j - qp + 1 + n)
    return Fraction(0)


def generator_element(two_j: int, n: int, two_q: int, two_qp: int, delta: float) -> complex:
    """Full generator element (diagonal detuning or off-diagonal coupling)."""
    if two_q == two_qp:
        return complex(two_qp / 2 * delta)
    r = generator_radicand(two_j, n, two_q, two_qp)
    if r >= 0:
        return complex(math.sqrt(r))
    return 1j * math.sqrt(-r)
