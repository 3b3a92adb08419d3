"""Exact single-mode photon statistics of collective emission from Dicke states."""

__version__ = "0.1.0"

from .ensemble import DickeInitialState, dicke_state, from_excited_count
from .errors import (
    AllUndefined,
    CoefficientOverflow,
    ConfigError,
    ConvergenceFailure,
    DimensionError,
    ParityMismatch,
    RangeError,
    StepFailure,
)
from .hamiltonian import EffectiveHamiltonian, build_effective_hamiltonian
from .propagator import (
    EvolutionAmplitudes,
    SpectralDecomposition,
    evolution_amplitudes,
    joint_state_amplitudes,
    spectral_decompose,
)
from .statistics import (
    EmissionStatistics,
    PhotonDistribution,
    QminResult,
    birula_alpha,
    moments,
    photon_distribution,
    photon_distribution_at,
    poisson_tv_distance,
    q_min,
    statistics_series,
)

__all__ = [
    "AllUndefined", "CoefficientOverflow", "ConfigError", "ConvergenceFailure",
    "DickeInitialState", "DimensionError", "EffectiveHamiltonian", "EmissionStatistics",
    "EvolutionAmplitudes", "ParityMismatch", "PhotonDistribution", "QminResult",
    "RangeError", "SpectralDecomposition", "StepFailure", "birula_alpha",
    "build_effective_hamiltonian", "dicke_state", "evolution_amplitudes",
    "from_excited_count", "joint_state_amplitudes", "moments", "photon_distribution",
    "photon_distribution_at", "poisson_tv_distance", "q_min", "spectral_decompose",
    "statistics_series",
]
