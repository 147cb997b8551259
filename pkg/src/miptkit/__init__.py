"""Monitored Clifford+T brickwork circuits on qubit chains.

Trajectory simulation (MPS / stabilizer tableau / dense state vector),
entanglement and stabilizer-Renyi-entropy observables, ensemble sweeps with
steady-state statistics, and scaling-law extraction of critical measurement
rates.
"""

from .backend import BACKEND_NAME
from .clifford import (
    CliffordGate1,
    CliffordGate2,
    conjugate,
    sample_clifford1,
    sample_clifford2,
)
from .exact import (
    StateVector,
    exact_entanglement,
    exact_stabilizer_entropy,
    pauli_distribution,
    pauli_expectation,
)
from .mps import CONVERGENCE_POLICY, MPSState, TruncationPolicy, exact_policy
from .pauli import PauliString
from .sampler import (
    MagicEstimate,
    PauliSample,
    estimate_m1,
    estimate_m2,
    sample_pauli,
)
from .tableau import StabilizerTableau

__version__ = "0.1.0"

__all__ = [
    "BACKEND_NAME",
    "CONVERGENCE_POLICY",
    "CliffordGate1",
    "CliffordGate2",
    "MPSState",
    "MagicEstimate",
    "PauliSample",
    "PauliString",
    "StabilizerTableau",
    "StateVector",
    "TruncationPolicy",
    "conjugate",
    "estimate_m1",
    "estimate_m2",
    "exact_entanglement",
    "exact_policy",
    "exact_stabilizer_entropy",
    "pauli_distribution",
    "pauli_expectation",
    "sample_clifford1",
    "sample_clifford2",
    "sample_pauli",
]
