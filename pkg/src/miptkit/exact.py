"""Dense state-vector evolution and enumeration-based entropy oracles.

Ground truth for every cross-check in the package: exact gate application,
Born-rule measurement, half-chain von Neumann entropy, and stabilizer Renyi
entropies computed by enumerating all 4^N Pauli expectations.

Conventions: site 0 is the leftmost qubit and the most significant bit of
the amplitude index.  Pauli enumeration results are reported in the
site-layout index ``(x_bits << N) | z_bits`` used by PauliString.index.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .pauli import PauliString

MAX_QUBITS = 14
MAX_ENUM_QUBITS = 8


@lru_cache(maxsize=8)
def _popcount_table(nbits: int) -> np.ndarray:
    v = np.arange(1 << nbits, dtype=np.int64)
    pc = np.zeros_like(v)
    while v.any():
        pc += v & 1
        v >>= 1
    return pc


@lru_cache(maxsize=8)
def _bitrev_table(n: int) -> np.ndarray:
    v = np.arange(1 << n, dtype=np.int64)
    out = np.zeros_like(v)
    for i in range(n):
        out |= ((v >> i) & 1) << (n - 1 - i)
    return out


def _check_unitary(gate: np.ndarray, tol: float = 1e-8) -> None:
    d = gate.shape[0]
    if gate.shape != (d, d) or np.abs(gate.conj().T @ gate - np.eye(d)).max() > tol:
        raise ValueError("gate is not unitary")


class StateVector:
    """A dense 2^N pure state on at most 14 qubits."""

    __slots__ = ("n_qubits", "amplitudes")

    def __init__(self, n_qubits: int, amplitudes: np.ndarray):
        if not 1 <= n_qubits <= MAX_QUBITS:
            raise ValueError(f"n_qubits must be in [1, {MAX_QUBITS}]")
        amplitudes = np.asarray(amplitudes, dtype=complex)
        if amplitudes.shape != (2**n_qubits,):
            raise ValueError("amplitude count mismatch")
        if abs(np.linalg.norm(amplitudes) - 1.0) > 1e-12:
            raise ValueError("state not normalized")
        self.n_qubits = n_qubits
        self.amplitudes = amplitudes

    @classmethod
    def basis_state(cls, n: int, bits=0) -> "StateVector":
        amps = np.zeros(2**n, dtype=complex)
        if not isinstance(bits, int):
            bits = sum(int(b) << (n - 1 - i) for i, b in enumerate(bits))
        amps[bits] = 1.0
        return cls(n, amps)

    def copy(self) -> "StateVector":
        return StateVector(self.n_qubits, self.amplitudes.copy())

    def evolve(self, gate: np.ndarray, sites) -> "StateVector":
        """Apply a unitary on one site or two adjacent sites, in place."""
        _check_unitary(gate)
        n = self.n_qubits
        if isinstance(sites, int):
            sites = (sites,)
        if len(sites) == 2 and sites[1] != sites[0] + 1:
            raise ValueError("two-site gates must act on adjacent sites")
        i = sites[0]
        width = len(sites)
        if not 0 <= i <= n - width:
            raise ValueError("site out of range")
        d = 2**width
        block = self.amplitudes.reshape(2**i, d, -1)
        self.amplitudes = np.einsum("ab,ibj->iaj", gate, block).reshape(-1)
        return self

    def measure_z(self, site: int, rng: np.random.Generator) -> int:
        """Born-rule Z measurement; projects and renormalizes in place."""
        block = self.amplitudes.reshape(2**site, 2, -1)
        p0 = float(np.sum(np.abs(block[:, 0, :]) ** 2))
        p0 = min(max(p0, 0.0), 1.0)
        u = float(rng.random())
        outcome = 0 if u < p0 else 1
        if (p0 if outcome == 0 else 1.0 - p0) < 1e-14:
            outcome ^= 1
        block[:, 1 - outcome, :] = 0.0
        self.amplitudes /= np.linalg.norm(self.amplitudes)
        return outcome

    def tensor(self, other: "StateVector") -> "StateVector":
        return StateVector(
            self.n_qubits + other.n_qubits, np.kron(self.amplitudes, other.amplitudes)
        )


def exact_entanglement(state: StateVector, cut: int | None = None) -> float:
    """Von Neumann entropy (bits) of the left block via the reduced density."""
    n = state.n_qubits
    cut = n // 2 if cut is None else cut
    m = state.amplitudes.reshape(2**cut, -1)
    rho = m @ m.conj().T
    w = np.linalg.eigvalsh(rho)
    w = w[w > 1e-15]
    return float(-np.sum(w * np.log2(w)))


def pauli_expectation(state: StateVector, p: PauliString) -> float:
    """<psi|P|psi> for a Hermitian Pauli string."""
    if p.n_qubits != state.n_qubits:
        raise ValueError("qubit counts differ")
    if not p.is_hermitian:
        raise ValueError("expectation defined for Hermitian Paulis only")
    n = state.n_qubits
    rev = _bitrev_table(n)
    x = int(rev[p.x_bits])
    z = int(rev[p.z_bits])
    pc = _popcount_table(n)
    b = np.arange(2**n)
    signs = 1.0 - 2.0 * (pc[b & z] & 1)
    psi = state.amplitudes
    val = np.sum(psi[b ^ x].conj() * signs * psi)
    val *= 1j ** ((p.x_bits & p.z_bits).bit_count() + p.phase_exp)
    if abs(val.imag) > 1e-10:
        raise ValueError("non-real expectation for a Hermitian Pauli")
    return float(val.real)


def all_pauli_expectations(state: StateVector) -> np.ndarray:
    """All 4^N Pauli expectations at once (N <= 8).

    Returns a (2^N, 2^N) real array indexed by amplitude-layout (x, z)
    integers.  Uses one Walsh-Hadamard contraction per x instead of 4^N
    separate operator applications.
    """
    n = state.n_qubits
    if n > MAX_ENUM_QUBITS:
        raise ValueError(f"enumeration limited to {MAX_ENUM_QUBITS} qubits")
    dim = 2**n
    psi = state.amplitudes
    b = np.arange(dim)
    idx = np.bitwise_xor.outer(b, b)
    v = psi.conj()[idx] * psi[None, :]
    pc = _popcount_table(n)
    pairs = pc[np.bitwise_and.outer(b, b)]
    had = 1.0 - 2.0 * (pairs & 1)
    raw = v @ had
    e = raw * (1j ** (pairs & 3))
    if np.abs(e.imag).max() > 1e-9:
        raise ValueError("non-real Pauli expectation; state corrupted")
    return e.real


def pauli_distribution(state: StateVector) -> np.ndarray:
    """Exact Xi_P = 2^-N <P>^2 over all Pauli strings (N <= 8).

    Indexed by the site-layout rank ``PauliString.index``; sums to 1.
    """
    n = state.n_qubits
    e = all_pauli_expectations(state)
    rev = _bitrev_table(n)
    target = (rev[:, None] << n) | rev[None, :]
    out = np.empty(4**n)
    out[target.ravel()] = (e.ravel() ** 2) / 2**n
    return out


def exact_stabilizer_entropy(state: StateVector, alpha: int) -> float:
    """Stabilizer alpha-Renyi entropy (bits) by full Pauli enumeration.

    alpha=2 is -log2(sum_P 2^-N <P>^4); alpha=1 is the Shannon form
    -sum_P 2^-N <P>^2 log2 <P>^2 with 0 log 0 := 0; alpha=0 counts the
    support, treating |<P>| < 1e-10 as zero.
    """
    if alpha not in (0, 1, 2):
        raise ValueError("alpha must be 0, 1, or 2")
    n = state.n_qubits
    e = all_pauli_expectations(state)
    if alpha == 2:
        return float(-np.log2(np.sum(e**4) / 2**n))
    if alpha == 1:
        p2 = e**2
        nz = p2 > 1e-300
        return float(-np.sum(p2[nz] * np.log2(p2[nz])) / 2**n)
    support = int(np.count_nonzero(np.abs(e) > 1e-10))
    return math.log2(support) - n


def random_state(n: int, rng: np.random.Generator) -> StateVector:
    """Haar-ish random state (Gaussian amplitudes, normalized)."""
    amps = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    return StateVector(n, amps / np.linalg.norm(amps))
