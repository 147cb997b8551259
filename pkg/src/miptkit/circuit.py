"""One hybrid-circuit trajectory: brickwork Cliffords, T-gates, measurements.

Each time step applies (in a fixed, configurable order) a brickwork layer of
independent random two-site Cliffords (odd steps pair (0,1),(2,3),...; even
steps (1,2),(3,4),... with the edge qubits idle), then per-qubit T-gates
with probability q = eta/N^beta, then per-qubit Z measurements with
probability p. Observables are recorded every `obs_period` steps.

Randomness: the trajectory seed expands into four independent substreams
(gates, T-gate coin flips, measurements, magic sampling), so recording more
or fewer observables never perturbs the physical trajectory, and different
engines driven by the same seed consume the physical streams identically
(one uniform per potential T-gate, one per potential measurement, one per
actual measurement outcome).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .clifford import T_GATE, sample_clifford1, sample_clifford2
from .exact import StateVector, exact_entanglement, exact_stabilizer_entropy
from .mps import MPSState, TruncationPolicy
from .sampler import estimate_m2
from .tableau import StabilizerTableau

ENGINES = ("mps", "tableau", "exact")
STEP_PHASES = ("clifford", "tgate", "measure")


@dataclass(frozen=True)
class CircuitParams:
    """Parameters of one hybrid-circuit ensemble member."""

    n_qubits: int
    p: float
    eta: float
    beta: float
    total_steps: int | None = None
    obs_period: int = 8
    engine: str = "mps"
    brickwork: bool = True
    step_order: tuple = STEP_PHASES
    rel_threshold: float = 1e-6
    max_bond: int = 256
    magic_samples: int = 128

    def __post_init__(self):
        n = self.n_qubits
        if n < 2 or n % 2:
            raise ValueError("n_qubits must be even and >= 2")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must be in [0, 1]")
        if self.eta < 0:
            raise ValueError("eta must be >= 0")
        if self.beta < 0:
            raise ValueError("beta must be >= 0")
        if not 0.0 <= self.q <= 1.0:
            raise ValueError("q = eta/N^beta must be in [0, 1]")
        if self.engine not in ENGINES:
            raise ValueError(f"engine must be one of {ENGINES}")
        if self.engine == "tableau" and self.eta != 0:
            raise ValueError("tableau engine cannot apply T-gates (needs eta = 0)")
        if self.engine == "exact" and n > 8:
            raise ValueError("exact engine limited to 8 qubits (Pauli enumeration)")
        if self.total_steps is None:
            object.__setattr__(self, "total_steps", 4 * n)
        if self.total_steps < 1 or self.obs_period < 1:
            raise ValueError("total_steps and obs_period must be positive")
        if sorted(self.step_order) != sorted(STEP_PHASES):
            raise ValueError(f"step_order must be a permutation of {STEP_PHASES}")
        if self.magic_samples < 2:
            raise ValueError("magic_samples must be >= 2")

    @property
    def q(self) -> float:
        return self.eta / self.n_qubits**self.beta


@dataclass(frozen=True)
class ObservableSample:
    t: int
    entanglement: float
    magic: float | None
    magic_err: float | None


@dataclass(frozen=True)
class TrajectoryRecord:
    params: CircuitParams
    seed: int
    samples: tuple = field(default_factory=tuple)
    outcomes: tuple = ()  # (t, qubit, outcome) when recorded


class _MpsEngine:
    def __init__(self, params):
        self.params = params
        policy = TruncationPolicy(params.rel_threshold, params.max_bond)
        self.state = MPSState.basis_state(params.n_qubits, 0, policy)

    def clifford2(self, a, gate):
        self.state.apply_gate2(a, gate.unitary)

    def clifford1(self, q, gate):
        self.state.apply_gate1(q, gate.unitary)

    def tgate(self, q):
        self.state.apply_gate1(q, T_GATE)

    def measure(self, q, rng):
        return self.state.measure_z(q, rng)

    def observe(self, magic_rng):
        est = estimate_m2(self.state, magic_rng, self.params.magic_samples)
        return self.state.entanglement_entropy(), est.value, est.std_error


class _TableauEngine:
    def __init__(self, params):
        self.state = StabilizerTableau.zero_state(params.n_qubits)

    def clifford2(self, a, gate):
        self.state.apply_clifford(gate, (a, a + 1))

    def clifford1(self, q, gate):
        self.state.apply_clifford(gate, q)

    def tgate(self, q):
        raise RuntimeError("tableau engine cannot apply a T-gate")

    def measure(self, q, rng):
        return self.state.measure_z(q, rng)

    def observe(self, magic_rng):
        return float(self.state.entanglement_entropy()), None, None


class _ExactEngine:
    def __init__(self, params):
        self.state = StateVector.basis_state(params.n_qubits, 0)

    def clifford2(self, a, gate):
        self.state.evolve(gate.unitary, (a, a + 1))

    def clifford1(self, q, gate):
        self.state.evolve(gate.unitary, q)

    def tgate(self, q):
        self.state.evolve(T_GATE, q)

    def measure(self, q, rng):
        return self.state.measure_z(q, rng)

    def observe(self, magic_rng):
        return (
            exact_entanglement(self.state),
            exact_stabilizer_entropy(self.state, 2),
            0.0,
        )


_ENGINE_TYPES = {"mps": _MpsEngine, "tableau": _TableauEngine, "exact": _ExactEngine}


def trajectory_streams(seed: int):
    """The four substreams (gate, tgate, measure, magic) of a trajectory seed."""
    children = np.random.SeedSequence(seed).spawn(4)
    return tuple(np.random.Generator(np.random.PCG64(ss)) for ss in children)


def run_trajectory(
    params: CircuitParams,
    seed: int,
    record_outcomes: bool = False,
    step_callback=None,
) -> TrajectoryRecord:
    """Simulate one trajectory; fully deterministic given (params, seed).

    `step_callback(engine, t)` is invoked after every completed time step
    with the internal engine adapter (its `state` attribute exposes the
    evolving state); used by the cross-engine verification suites.
    """
    gate_rng, tgate_rng, meas_rng, magic_rng = trajectory_streams(seed)
    engine = _ENGINE_TYPES[params.engine](params)
    n = params.n_qubits
    q = params.q
    samples = []
    outcomes = []
    for t in range(1, params.total_steps + 1):
        for phase in params.step_order:
            if phase == "clifford":
                if params.brickwork:
                    offset = 0 if t % 2 else 1
                    for a in range(offset, n - 1, 2):
                        engine.clifford2(a, sample_clifford2(gate_rng))
                else:
                    for qubit in range(n):
                        engine.clifford1(qubit, sample_clifford1(gate_rng))
            elif phase == "tgate":
                coins = tgate_rng.random(n)
                for qubit in np.nonzero(coins < q)[0]:
                    engine.tgate(int(qubit))
            else:
                coins = meas_rng.random(n)
                for qubit in np.nonzero(coins < params.p)[0]:
                    out = engine.measure(int(qubit), meas_rng)
                    if record_outcomes:
                        outcomes.append((t, int(qubit), out))
        if step_callback is not None:
            step_callback(engine, t)
        if t % params.obs_period == 0:
            ent, magic, err = engine.observe(magic_rng)
            samples.append(ObservableSample(t, float(ent), magic, err))
    return TrajectoryRecord(
        params=params, seed=seed, samples=tuple(samples), outcomes=tuple(outcomes)
    )
