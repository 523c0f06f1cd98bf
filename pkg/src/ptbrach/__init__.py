"""Time-optimal evolution of Hermitian and PT-symmetric two-level systems."""

from .config import get_hbar, hbar_context, set_hbar
from .errors import (
    BadGapError,
    BadSpecError,
    BrokenPTError,
    CompletionFailure,
    NoClosureError,
    NotPositiveError,
    ParallelStatesError,
    PTBrachError,
    StepTooLargeError,
    UnreachableError,
    ZeroVectorError,
)
from .linalg import eig2, mat_exp2, mat_exp4, pauli_decompose
from .hermitian import (
    HermitianParams,
    ThreeLevelSpec,
    energy_uncertainty,
    fs_distance,
    min_time,
    optimal_hamiltonian,
    passage_time,
    three_level_orthogonality,
    variational_time,
)
from .pt import (
    PTParams,
    c_operator,
    cpt_inner,
    cpt_norm,
    hermitian_equivalent,
    pt_eigensystem,
    pt_evolve,
    spin_flip_time,
)
from .dilation import fixed_dilation_hamiltonian, unitary_dilation
from .classical import first_return, integrate_orbit, switched_flight

__version__ = "0.1.0"

__all__ = [
    "BadGapError",
    "BadSpecError",
    "BrokenPTError",
    "CompletionFailure",
    "HermitianParams",
    "NoClosureError",
    "NotPositiveError",
    "PTBrachError",
    "PTParams",
    "ParallelStatesError",
    "StepTooLargeError",
    "ThreeLevelSpec",
    "UnreachableError",
    "ZeroVectorError",
    "c_operator",
    "cpt_inner",
    "cpt_norm",
    "eig2",
    "energy_uncertainty",
    "first_return",
    "fixed_dilation_hamiltonian",
    "fs_distance",
    "get_hbar",
    "hbar_context",
    "hermitian_equivalent",
    "integrate_orbit",
    "mat_exp2",
    "mat_exp4",
    "min_time",
    "optimal_hamiltonian",
    "passage_time",
    "pauli_decompose",
    "pt_eigensystem",
    "pt_evolve",
    "set_hbar",
    "spin_flip_time",
    "switched_flight",
    "three_level_orthogonality",
    "unitary_dilation",
    "variational_time",
]
