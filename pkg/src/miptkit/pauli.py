"""Bit-packed N-qubit Pauli strings with exact phase arithmetic.

A Pauli string is stored as two integer bitmasks (bit i = site i) plus a
phase exponent e, representing the operator

    i**e * L_0 (x) L_1 (x) ... (x) L_{N-1}

where the literal letter on site j is determined by the bit pair
(x_j, z_j): (0,0)=I, (1,0)=X, (1,1)=Y, (0,1)=Z.  Phases live in
{+1, -1, +i, -i} and are tracked exactly (mod-4 exponent arithmetic), so
products of Pauli strings never accumulate floating-point drift.

Single-site letters also get a 2-bit index k = x + 2z (I=0, X=1, Z=2, Y=3)
used throughout the package for Clifford lookup tables and for the Pauli
sampler's candidate ordering.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

# single-site letters, indexed by k = x + 2z
PAULI_MATRICES = (
    np.eye(2, dtype=complex),                      # I
    np.array([[0, 1], [1, 0]], dtype=complex),     # X
    np.array([[1, 0], [0, -1]], dtype=complex),    # Z
    np.array([[0, -1j], [1j, 0]], dtype=complex),  # Y
)
K_TO_CHAR = "IXZY"
CHAR_TO_K = {c: k for k, c in enumerate(K_TO_CHAR)}

_PHASES = (1, 1j, -1, -1j)  # i**e for e = 0..3


@dataclass(frozen=True)
class PauliString:
    """An N-qubit Pauli operator ``i**phase_exp * (tensor of letters)``."""

    n_qubits: int
    x_bits: int
    z_bits: int
    phase_exp: int = 0

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError("n_qubits must be positive")
        mask = (1 << self.n_qubits) - 1
        if self.x_bits & ~mask or self.z_bits & ~mask:
            raise ValueError("bit vectors longer than n_qubits")
        if not 0 <= self.phase_exp < 4:
            object.__setattr__(self, "phase_exp", self.phase_exp & 3)

    @classmethod
    def from_label(cls, label: str, phase: complex = 1) -> "PauliString":
        """Build from a letter string, site 0 first (e.g. ``"XIZ"``)."""
        x = z = 0
        for site, ch in enumerate(label):
            k = CHAR_TO_K[ch]
            x |= (k & 1) << site
            z |= (k >> 1) << site
        return cls(len(label), x, z, _PHASES.index(phase))

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls(n, 0, 0, 0)

    @property
    def phase(self) -> complex:
        """The phase as an element of {+1, -1, +i, -i}."""
        return _PHASES[self.phase_exp]

    @property
    def is_hermitian(self) -> bool:
        return self.phase_exp in (0, 2)

    def letter(self, site: int) -> int:
        """k-index of the letter on `site` (I=0, X=1, Z=2, Y=3)."""
        return ((self.x_bits >> site) & 1) | (((self.z_bits >> site) & 1) << 1)

    @property
    def weight(self) -> int:
        """Number of non-identity sites."""
        return (self.x_bits | self.z_bits).bit_count()

    @property
    def index(self) -> int:
        """Lexicographic rank in (x_bits, z_bits): ``(x << N) | z``."""
        return (self.x_bits << self.n_qubits) | self.z_bits

    def __mul__(self, other: "PauliString") -> "PauliString":
        if self.n_qubits != other.n_qubits:
            raise ValueError("qubit counts differ")
        x3 = self.x_bits ^ other.x_bits
        z3 = self.z_bits ^ other.z_bits
        # literal-letter product phase: i^(y1 + y2 + 2*(z1&x2) - y3)
        c = (
            (self.x_bits & self.z_bits).bit_count()
            + (other.x_bits & other.z_bits).bit_count()
            + 2 * (self.z_bits & other.x_bits).bit_count()
            - (x3 & z3).bit_count()
        )
        return PauliString(
            self.n_qubits, x3, z3, (self.phase_exp + other.phase_exp + c) & 3
        )

    def adjoint(self) -> "PauliString":
        return PauliString(self.n_qubits, self.x_bits, self.z_bits, (-self.phase_exp) & 3)

    def commutes_with(self, other: "PauliString") -> bool:
        s = (self.x_bits & other.z_bits).bit_count() + (self.z_bits & other.x_bits).bit_count()
        return s % 2 == 0

    def to_matrix(self) -> np.ndarray:
        """Dense 2^N x 2^N matrix (meant for small N in tests/oracles)."""
        if self.n_qubits > 12:
            raise ValueError("dense matrix only for n_qubits <= 12")
        mats = [PAULI_MATRICES[self.letter(s)] for s in range(self.n_qubits)]
        return self.phase * reduce(np.kron, mats)

    def __str__(self) -> str:
        pre = {0: "+", 1: "+i", 2: "-", 3: "-i"}[self.phase_exp]
        return pre + "".join(K_TO_CHAR[self.letter(s)] for s in range(self.n_qubits))
