"""Stabilizer tableau simulator for the Clifford-only (q = 0) circuit.

Standard destabilizer/stabilizer tableau over bit-packed GF(2) rows with
exact sign tracking; gates act through the conjugation lookup tables carried
by CliffordGate1/CliffordGate2, measurements follow the usual
random/deterministic branch split, and the half-chain entanglement entropy
is the GF(2) rank of the left-restricted generator matrix minus N/2.

Hot loops live in miptkit.backend (compiled core or numpy fallback).
"""

from __future__ import annotations

import numpy as np

from . import backend
from .clifford import CliffordGate1, CliffordGate2
from .pauli import PauliString


class StabilizerTableau:
    """Pure stabilizer state of N qubits."""

    __slots__ = ("n_qubits", "x_words", "z_words", "signs")

    def __init__(self, n_qubits: int, x_words, z_words, signs):
        self.n_qubits = n_qubits
        self.x_words = x_words
        self.z_words = z_words
        self.signs = signs

    @classmethod
    def zero_state(cls, n: int) -> "StabilizerTableau":
        if n < 1:
            raise ValueError("n_qubits must be positive")
        w = (n + 63) // 64
        x = np.zeros((2 * n, w), dtype=np.uint64)
        z = np.zeros((2 * n, w), dtype=np.uint64)
        signs = np.zeros(2 * n, dtype=np.uint8)
        for i in range(n):
            x[i, i // 64] = np.uint64(1) << np.uint64(i % 64)       # destabilizer X_i
            z[n + i, i // 64] = np.uint64(1) << np.uint64(i % 64)   # stabilizer Z_i
        return cls(n, x, z, signs)

    def copy(self) -> "StabilizerTableau":
        return StabilizerTableau(
            self.n_qubits, self.x_words.copy(), self.z_words.copy(), self.signs.copy()
        )

    def apply_clifford(self, gate, sites) -> "StabilizerTableau":
        """Conjugate every generator by the gate via its lookup table."""
        if isinstance(sites, int):
            sites = (sites,)
        if any(not 0 <= s < self.n_qubits for s in sites):
            raise ValueError("site out of range")
        if isinstance(gate, CliffordGate1):
            if len(sites) != 1:
                raise ValueError("single-site gate needs one site")
            backend.apply_lookup1(
                self.x_words, self.z_words, self.signs, sites[0], gate.perm, gate.sign
            )
        elif isinstance(gate, CliffordGate2):
            if len(sites) != 2 or sites[0] == sites[1]:
                raise ValueError("two-site gate needs two distinct sites")
            backend.apply_lookup2(
                self.x_words, self.z_words, self.signs,
                sites[0], sites[1], gate.perm, gate.sign,
            )
        else:
            raise TypeError("expected CliffordGate1 or CliffordGate2")
        return self

    def measure_z(self, site: int, rng: np.random.Generator) -> int:
        """Z measurement; consumes exactly one uniform like the other engines."""
        pivot = backend.measure_prepare(self.x_words, self.z_words, self.n_qubits, site)
        if pivot < 0:
            det = backend.measure_deterministic(
                self.x_words, self.z_words, self.signs, self.n_qubits, site
            )
            p0 = 0.0 if det else 1.0
        else:
            p0 = 0.5
        u = float(rng.random())
        outcome = 0 if u < p0 else 1
        if pivot >= 0:
            backend.measure_update_random(
                self.x_words, self.z_words, self.signs,
                self.n_qubits, site, pivot, outcome,
            )
        return outcome

    def entanglement_entropy(self) -> int:
        """Half-chain entanglement in bits (integer for stabilizer states)."""
        if self.n_qubits % 2:
            raise ValueError("half-chain cut needs even n_qubits")
        return int(backend.rank_left_half(self.x_words, self.z_words, self.n_qubits))

    def _row_pauli(self, r: int) -> PauliString:
        x = z = 0
        for w in range(self.x_words.shape[1]):
            x |= int(self.x_words[r, w]) << (64 * w)
            z |= int(self.z_words[r, w]) << (64 * w)
        return PauliString(self.n_qubits, x, z, 2 * int(self.signs[r]))

    def stabilizer_generators(self) -> list:
        """The N signed stabilizer generators as PauliStrings."""
        n = self.n_qubits
        return [self._row_pauli(n + i) for i in range(n)]

    def destabilizer_generators(self) -> list:
        return [self._row_pauli(i) for i in range(self.n_qubits)]

    def check_valid(self) -> None:
        """Invariant check (tests): commutation, pairing, and full rank."""
        n = self.n_qubits
        stabs = self.stabilizer_generators()
        destabs = self.destabilizer_generators()
        for i in range(n):
            for j in range(i + 1, n):
                assert stabs[i].commutes_with(stabs[j]), "stabilizers must commute"
            for j in range(n):
                anti = not destabs[j].commutes_with(stabs[i])
                assert anti == (i == j), "destabilizer pairing broken"
        pivots: dict[int, int] = {}
        for p in stabs:
            r = (p.x_bits << n) | p.z_bits
            while r:
                bit = r.bit_length() - 1
                if bit in pivots:
                    r ^= pivots[bit]
                else:
                    pivots[bit] = r
                    break
        assert len(pivots) == n, "generators not independent"
