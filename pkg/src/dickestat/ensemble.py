"""Dicke-state configurations |J, M> stored as exact doubled integers."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import ParityMismatch, RangeError


@dataclass(frozen=True)
class DickeInitialState:
    """Atomic ensemble in |J, M> with the field mode in vacuum.

    Angular momenta are held doubled (``two_j = 2J``, ``two_m = 2M``) so
    ensembles with an odd number of atoms are represented exactly.
    ``delta`` is the detuning in units of the coupling magnitude and ``phi``
    is the coupling phase arg(g); ``phi`` never affects photon-number
    statistics.
    """

    two_j: int
    two_m: int
    delta: float = 0.0
    phi: float = 0.0

    def __post_init__(self):
        for name in ("two_j", "two_m"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int):
                if isinstance(value, float) and value.is_integer():
                    object.__setattr__(self, name, int(value))
                else:
                    raise TypeError(f"{name} must be an integer, got {value!r}")
        object.__setattr__(self, "delta", float(self.delta))
        object.__setattr__(self, "phi", float(self.phi))
        if self.two_j < 0:
            raise RangeError(f"2J must be non-negative, got {self.two_j}")
        if (self.two_j - self.two_m) % 2:
            raise ParityMismatch(
                f"2J={self.two_j} and 2M={self.two_m} must have the same parity"
            )
        if abs(self.two_m) > self.two_j:
            raise RangeError(f"|2M|={abs(self.two_m)} exceeds 2J={self.two_j}")
        if not math.isfinite(self.delta) or not math.isfinite(self.phi):
            raise RangeError("delta and phi must be finite")

    @property
    def j(self) -> Fraction:
        return Fraction(self.two_j, 2)

    @property
    def m(self) -> Fraction:
        return Fraction(self.two_m, 2)

    @property
    def excitation_count(self) -> int:
        """J + M: the largest photon number the ensemble can emit."""
        return (self.two_j + self.two_m) // 2

    @property
    def dimension(self) -> int:
        return self.excitation_count + 1

    def label(self) -> str:
        return f"J={_half(self.two_j)}, M={_half(self.two_m)}, delta={self.delta:g}"


def _half(doubled: int) -> str:
    return str(doubled // 2) if doubled % 2 == 0 else f"{doubled}/2"


def dicke_state(two_j: int, two_m: int, delta: float = 0.0, phi: float = 0.0) -> DickeInitialState:
    """Validated |J, M> from doubled quantum numbers."""
    return DickeInitialState(two_j, two_m, delta, phi)


def from_excited_count(n_atoms: int, excited: int, delta: float = 0.0) -> DickeInitialState:
    """Symmetric Dicke state (J = N/2) with ``excited`` atoms up."""
    if n_atoms < 1:
        raise RangeError(f"need at least one atom, got {n_atoms}")
    if not 0 <= excited <= n_atoms:
        raise RangeError(f"excited={excited} outside [0, {n_atoms}]")
    return DickeInitialState(n_atoms, 2 * excited - n_atoms, delta, 0.0)
