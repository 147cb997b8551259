"""Cross-engine oracle suites behind `miptkit verify` and the acceptance tests.

Every check returns a CheckResult; the checks compare independent routes to
the same physics: truncation-free MPS against dense state vectors, tableau
propagation against dense evolution, the Monte Carlo Pauli sampler against
full enumeration, and the stabilizer-entropy monotone properties against
the exact oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circuit import CircuitParams, run_trajectory
from .clifford import T_GATE, sample_clifford1, sample_clifford2
from .exact import (
    StateVector,
    exact_stabilizer_entropy,
    pauli_distribution,
    pauli_expectation,
    random_state,
)
from .mps import MPSState
from .sampler import draw_samples, estimate_m2, letters_to_index

M2_T_PLUS = math.log2(4.0 / 3.0)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _untruncated(n: int, **kw) -> CircuitParams:
    return CircuitParams(
        n_qubits=n, rel_threshold=0.0, max_bond=2 ** (n // 2), **kw
    )


def check_engine_equivalence(
    n_circuits: int = 20,
    n_qubits: int = 8,
    p: float = 0.2,
    eta: float = 2.0,
    beta: float = 1.0,
    seed0: int = 1000,
    fidelity_tol: float = 1e-10,
) -> CheckResult:
    """Untruncated MPS vs dense evolution: per-step fidelity and outcomes."""
    worst = 1.0
    for i in range(n_circuits):
        seed = seed0 + i
        vecs = {}

        def capture(tag):
            def cb(engine, t):
                state = engine.state
                vecs.setdefault(tag, []).append(
                    state.to_state_vector() if isinstance(state, MPSState)
                    else state.amplitudes.copy()
                )
            return cb

        rm = run_trajectory(
            _untruncated(n_qubits, p=p, eta=eta, beta=beta, engine="mps"),
            seed, record_outcomes=True, step_callback=capture("mps"),
        )
        re_ = run_trajectory(
            CircuitParams(n_qubits=n_qubits, p=p, eta=eta, beta=beta, engine="exact"),
            seed, record_outcomes=True, step_callback=capture("exact"),
        )
        if rm.outcomes != re_.outcomes:
            return CheckResult("engine-equivalence", False,
                               f"outcome sequences differ at seed {seed}")
        for vm, ve in zip(vecs["mps"], vecs["exact"]):
            worst = min(worst, abs(np.vdot(vm, ve)) ** 2)
    ok = worst >= 1.0 - fidelity_tol
    return CheckResult(
        "engine-equivalence", ok,
        f"{n_circuits} circuits (N={n_qubits}): min per-step fidelity {worst:.3e}",
    )


def check_tableau_equivalence(
    n_circuits: int = 10, n_qubits: int = 8, p: float = 0.15, seed0: int = 5000
) -> CheckResult:
    """Tableau vs dense evolution on Clifford-only circuits."""
    worst_ent = 0.0
    for i in range(n_circuits):
        seed = seed0 + i
        finals = {}

        def capture(tag, total):
            def cb(engine, t):
                if t == total:
                    finals[tag] = engine.state
            return cb

        pt = CircuitParams(n_qubits=n_qubits, p=p, eta=0.0, beta=1.0, engine="tableau")
        rt = run_trajectory(pt, seed, record_outcomes=True,
                            step_callback=capture("tab", pt.total_steps))
        pe = CircuitParams(n_qubits=n_qubits, p=p, eta=0.0, beta=1.0, engine="exact")
        re_ = run_trajectory(pe, seed, record_outcomes=True,
                             step_callback=capture("exact", pe.total_steps))
        if rt.outcomes != re_.outcomes:
            return CheckResult("tableau-equivalence", False,
                               f"outcome sequences differ at seed {seed}")
        for st, se in zip(rt.samples, re_.samples):
            worst_ent = max(worst_ent, abs(st.entanglement - se.entanglement))
        for gen in finals["tab"].stabilizer_generators():
            if abs(pauli_expectation(finals["exact"], gen) - 1.0) > 1e-9:
                return CheckResult("tableau-equivalence", False,
                                   f"stabilizer expectation != +1 at seed {seed}")
    ok = worst_ent <= 1e-9
    return CheckResult(
        "tableau-equivalence", ok,
        f"{n_circuits} circuits (N={n_qubits}): max entropy gap {worst_ent:.2e}",
    )


def trajectory_mps_state(
    n: int, seed: int, p: float, eta: float, beta: float = 1.0, steps: int | None = None
) -> MPSState:
    """Final untruncated MPS state of one hybrid trajectory (small N)."""
    holder = {}
    params = _untruncated(
        n, p=p, eta=eta, beta=beta, engine="mps",
        total_steps=steps if steps is not None else 4 * n,
    )

    def cb(engine, t):
        if t == params.total_steps:
            holder["state"] = engine.state

    run_trajectory(params, seed, step_callback=cb)
    return holder["state"]


# Frozen trajectory-state seeds for the sampler-exactness check: states from
# this artifact's own ensemble whose Pauli distribution is concentrated
# enough that the multinomial noise floor of 10k samples sits safely below
# the 0.05 TV bound (a Haar-random state would fail on noise alone).
SAMPLER_EXACTNESS_SEEDS = (6, 20, 22)


def check_sampler_exactness(
    seeds=SAMPLER_EXACTNESS_SEEDS,
    n_qubits: int = 6,
    p: float = 0.35,
    eta: float = 1.0,
    steps: int = 24,
    n_samples: int = 10000,
    tv_max: float = 0.05,
) -> CheckResult:
    """Empirical Xi frequencies vs exact enumeration, total-variation bound."""
    worst = 0.0
    for seed in seeds:
        mp = trajectory_mps_state(n_qubits, seed, p=p, eta=eta, steps=steps)
        sv = StateVector(n_qubits, mp.to_state_vector())
        xi = pauli_distribution(sv)
        letters, _ = draw_samples(mp, n_samples, np.random.default_rng(9999 + seed))
        emp = np.bincount(letters_to_index(letters), minlength=4**n_qubits) / n_samples
        worst = max(worst, 0.5 * float(np.abs(emp - xi).sum()))
    return CheckResult(
        "sampler-exactness", worst < tv_max,
        f"{len(seeds)} states (N={n_qubits}, {n_samples} samples): max TV {worst:.4f}",
    )


def random_stabilizer_state(n: int, rng: np.random.Generator, depth: int | None = None) -> StateVector:
    """Random Clifford-circuit state on a basis state (dense)."""
    sv = StateVector.basis_state(n, 0)
    for site in range(n):
        sv.evolve(sample_clifford1(rng).unitary, site)
    for layer in range(depth if depth is not None else 2 * n):
        if n >= 2:
            off = layer % 2
            for a in range(off, n - 1, 2):
                sv.evolve(sample_clifford2(rng).unitary, (a, a + 1))
    return sv


def random_clifford_t_state(
    n: int, rng: np.random.Generator, n_tgates: int, depth: int | None = None
) -> StateVector:
    """Random stabilizer circuit with `n_tgates` T-gates interleaved."""
    sv = StateVector.basis_state(n, 0)
    layers = depth if depth is not None else 2 * n
    t_at = sorted(int(r) for r in rng.integers(0, layers, size=n_tgates))
    for layer in range(layers):
        off = layer % 2
        for a in range(off, n - 1, 2):
            sv.evolve(sample_clifford2(rng).unitary, (a, a + 1))
        for _ in range(t_at.count(layer)):
            sv.evolve(T_GATE, int(rng.integers(n)))
    return sv


def check_magic_monotones(n_states: int = 100, seed: int = 77, tol: float = 1e-9) -> CheckResult:
    """SM properties (i)-(vi) of the stabilizer Renyi entropies."""
    rng = np.random.default_rng(seed)
    msgs = []

    # (i) faithfulness on random stabilizer states, every alpha
    worst = 0.0
    for _ in range(n_states):
        n = int(rng.integers(2, 9))
        sv = random_stabilizer_state(n, rng)
        for alpha in (0, 1, 2):
            worst = max(worst, abs(exact_stabilizer_entropy(sv, alpha)))
    if worst > tol:
        msgs.append(f"faithfulness violated: {worst:.2e}")

    # (ii) invariance under sampled Clifford gates (incl. magic states)
    worst = 0.0
    for _ in range(25):
        n = int(rng.integers(2, 7))
        sv = random_clifford_t_state(n, rng, n_tgates=int(rng.integers(0, 3)))
        before = [exact_stabilizer_entropy(sv, a) for a in (0, 1, 2)]
        sv2 = sv.copy()
        for a in range(0, n - 1, 2):
            sv2.evolve(sample_clifford2(rng).unitary, (a, a + 1))
        for site in range(n):
            sv2.evolve(sample_clifford1(rng).unitary, site)
        after = [exact_stabilizer_entropy(sv2, a) for a in (0, 1, 2)]
        worst = max(worst, max(abs(x - y) for x, y in zip(before, after)))
    if worst > tol:
        msgs.append(f"Clifford invariance violated: {worst:.2e}")

    # (iii) additivity under tensor products
    worst = 0.0
    for _ in range(25):
        n1, n2 = int(rng.integers(1, 5)), int(rng.integers(1, 5))
        s1 = random_clifford_t_state(max(n1, 1), rng, n_tgates=int(rng.integers(0, 3)))
        s2 = random_clifford_t_state(max(n2, 1), rng, n_tgates=int(rng.integers(0, 3)))
        prod = s1.tensor(s2)
        for alpha in (0, 1, 2):
            gap = abs(
                exact_stabilizer_entropy(prod, alpha)
                - exact_stabilizer_entropy(s1, alpha)
                - exact_stabilizer_entropy(s2, alpha)
            )
            worst = max(worst, gap)
    if worst > tol:
        msgs.append(f"additivity violated: {worst:.2e}")

    # (iv) bounds and (v) monotonicity in alpha on Haar-random states.
    # A generic state has full Pauli support, so M_0 = N exactly; the strict
    # upper bound applies to alpha >= 1.
    for _ in range(n_states):
        n = int(rng.integers(1, 7))
        sv = random_state(n, rng)
        m0, m1, m2 = (exact_stabilizer_entropy(sv, a) for a in (0, 1, 2))
        if not (-tol <= m2 and m1 < n and m2 < n and m0 <= n + tol):
            msgs.append(f"bound violated: n={n} m0={m0} m1={m1} m2={m2}")
            break
        if m2 > m1 + tol or m1 > m0 + tol:
            msgs.append(f"monotonicity violated: {m2} {m1} {m0}")
            break

    # (vi) T-count bound, k <= 4 T-gates on N <= 6
    worst = 0.0
    for _ in range(40):
        n = int(rng.integers(2, 7))
        k = int(rng.integers(1, 5))
        sv = random_clifford_t_state(n, rng, n_tgates=k)
        for alpha in (0, 1, 2):
            worst = max(worst, exact_stabilizer_entropy(sv, alpha) - k)
    if worst > tol:
        msgs.append(f"T-count bound violated by {worst:.2e}")

    return CheckResult(
        "magic-monotones", not msgs,
        "; ".join(msgs) if msgs else f"properties (i)-(vi) hold on {n_states} states",
    )


def check_m2_exact_value(reps: int = 50, n_samples: int = 128, seed: int = 31) -> CheckResult:
    """M2(T|+>) by enumeration and by sampling on (T|+>) x |0>."""
    from .clifford import H_GATE

    sv = StateVector.basis_state(1).evolve(H_GATE, 0).evolve(T_GATE, 0)
    enum_err = abs(exact_stabilizer_entropy(sv, 2) - M2_T_PLUS)
    if enum_err > 1e-12:
        return CheckResult("m2-exact-value", False, f"enumeration off by {enum_err:.2e}")
    mp = MPSState.basis_state(2, [0, 0])
    mp.apply_gate1(0, H_GATE)
    mp.apply_gate1(0, T_GATE)
    rng = np.random.default_rng(seed)
    vals = np.array([estimate_m2(mp, rng, n_samples).value for _ in range(reps)])
    sem = float(vals.std(ddof=1) / math.sqrt(reps))
    pull = abs(float(vals.mean()) - M2_T_PLUS) / sem
    return CheckResult(
        "m2-exact-value", pull < 3.0,
        f"enumeration exact; sampler pooled over {reps} reps: pull {pull:.2f} sigma",
    )


def run_checks(level: str = "fast"):
    """The named check battery; `fast` shrinks the repetition counts."""
    if level == "fast":
        return [
            check_engine_equivalence(n_circuits=4, n_qubits=6, seed0=1000),
            check_tableau_equivalence(n_circuits=4, seed0=5000),
            check_sampler_exactness(seeds=(6,), n_samples=4000, tv_max=0.08),
            check_magic_monotones(n_states=25),
            check_m2_exact_value(reps=15),
        ]
    if level == "full":
        return [
            check_engine_equivalence(),
            check_tableau_equivalence(),
            check_sampler_exactness(),
            check_magic_monotones(),
            check_m2_exact_value(),
        ]
    raise ValueError("level must be 'fast' or 'full'")
