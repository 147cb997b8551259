"""Single- and two-site Clifford gates as unitaries plus conjugation tables.

Every gate carries, besides its dense unitary, a lookup table describing its
action by conjugation on the Hermitian Pauli basis of its support:
``perm[k]`` is the image letter index and ``sign[k]`` its sign bit, with the
single-site letter index k = x + 2z and the two-site index k = k_left +
4 * k_right.  The tables are what the stabilizer tableau engine consumes;
the unitaries feed the MPS and state-vector engines.

The 24 single-site Cliffords are tabulated once from the <H, S> closure
(index 0 is the identity).  Two-site gates are built the way the circuit
needs them: 30 layers, each an independent uniform choice among a pair of
random single-site Cliffords, SWAP, CNOT(control=left), CNOT(control=right).
"""

from __future__ import annotations

import math
from functools import reduce

import numpy as np

from . import backend
from .pauli import PAULI_MATRICES, PauliString

H_GATE = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
S_GATE = np.array([[1, 0], [0, 1j]], dtype=complex)
T_GATE = np.array([[1, 0], [0, np.exp(1j * math.pi / 4)]], dtype=complex)
SWAP_GATE = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
)
# basis order |s_left s_right>; CNOT_L has the left qubit as control
CNOT_L_GATE = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)
CNOT_R_GATE = np.array(
    [[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0]], dtype=complex
)

N_CLIFFORD1 = 24
N_LAYERS = 30


class NotCliffordError(ValueError):
    """Conjugation of a Pauli did not yield a signed Pauli."""


def _pauli_matrix(k: int, n_sites: int) -> np.ndarray:
    if n_sites == 1:
        return PAULI_MATRICES[k]
    return np.kron(PAULI_MATRICES[k & 3], PAULI_MATRICES[k >> 2])


def lookup_from_unitary(u: np.ndarray, n_sites: int, tol: float = 1e-10):
    """Conjugation table of a (presumed Clifford) unitary on 1 or 2 sites.

    Returns ``(perm, sign)`` uint8 arrays over the 4**n_sites Hermitian basis
    Paulis.  Raises NotCliffordError if any image fails to be +-1 times a
    single Pauli within `tol`.
    """
    dim = 2**n_sites
    n_paulis = 4**n_sites
    basis = np.stack([_pauli_matrix(k, n_sites) for k in range(n_paulis)])
    perm = np.zeros(n_paulis, dtype=np.uint8)
    sign = np.zeros(n_paulis, dtype=np.uint8)
    udg = u.conj().T
    for k in range(1, n_paulis):
        image = u @ basis[k] @ udg
        coeffs = np.einsum("kij,ji->k", basis, image) / dim
        idx = int(np.argmax(np.abs(coeffs)))
        c = coeffs[idx]
        rest = np.abs(coeffs) ** 2
        rest[idx] = 0.0
        if rest.sum() > tol or abs(abs(c) - 1.0) > tol or abs(c.imag) > tol:
            raise NotCliffordError(f"image of Pauli {k} is not a signed Pauli")
        perm[k] = idx
        sign[k] = 1 if c.real < 0 else 0
    return perm, sign


def _canonical_key(u: np.ndarray) -> tuple:
    """Dedup key for a unitary modulo global phase."""
    flat = u.ravel()
    pivot = flat[np.argmax(np.abs(flat) > 1e-9)]
    v = flat * (pivot.conjugate() / abs(pivot))
    return tuple(np.round(v, 9).tolist())


class CliffordGate1:
    """One of the 24 single-qubit Clifford gates (modulo global phase)."""

    __slots__ = ("index", "unitary", "perm", "sign")

    def __init__(self, index: int, unitary: np.ndarray):
        self.index = index
        self.unitary = unitary
        self.unitary.setflags(write=False)
        self.perm, self.sign = lookup_from_unitary(unitary, 1)
        self.perm.setflags(write=False)
        self.sign.setflags(write=False)

    @property
    def tableau_action(self):
        """Images of X and Z under conjugation, as signed PauliStrings."""
        return {
            "X": self.conjugate_pauli(PauliString.from_label("X")),
            "Z": self.conjugate_pauli(PauliString.from_label("Z")),
        }

    def conjugate_pauli(self, p: PauliString) -> PauliString:
        if p.n_qubits != 1:
            raise ValueError("expected a single-site Pauli")
        k = self.perm[p.letter(0)]
        e = (p.phase_exp + 2 * self.sign[p.letter(0)]) & 3
        return PauliString(1, int(k) & 1, int(k) >> 1, e)

    def __repr__(self):
        return f"CliffordGate1({self.index})"


def _build_clifford1_table() -> tuple:
    seen = {}
    order = []
    queue = [np.eye(2, dtype=complex)]
    seen[_canonical_key(queue[0])] = 0
    order.append(queue[0])
    while queue:
        g = queue.pop(0)
        for gen in (H_GATE, S_GATE):
            h = gen @ g
            key = _canonical_key(h)
            if key not in seen:
                seen[key] = len(order)
                order.append(h)
                queue.append(h)
    assert len(order) == N_CLIFFORD1
    return tuple(CliffordGate1(i, u) for i, u in enumerate(order))

CLIFFORD1_TABLE = _build_clifford1_table()

_SWAP_LOOKUP = lookup_from_unitary(SWAP_GATE, 2)
_CNOT_L_LOOKUP = lookup_from_unitary(CNOT_L_GATE, 2)
_CNOT_R_LOOKUP = lookup_from_unitary(CNOT_R_GATE, 2)

_KA = np.arange(16, dtype=np.uint8) & 3
_KB = np.arange(16, dtype=np.uint8) >> 2


def _build_pair_lookups():
    perms = np.zeros((N_CLIFFORD1, N_CLIFFORD1, 16), dtype=np.uint8)
    signs = np.zeros((N_CLIFFORD1, N_CLIFFORD1, 16), dtype=np.uint8)
    p1 = np.stack([g.perm for g in CLIFFORD1_TABLE])
    s1 = np.stack([g.sign for g in CLIFFORD1_TABLE])
    for i in range(N_CLIFFORD1):
        perms[i] = p1[i][_KA][None, :] + 4 * p1[:, _KB]
        signs[i] = s1[i][_KA][None, :] ^ s1[:, _KB]
    return perms, signs

_PAIR_PERM, _PAIR_SIGN = _build_pair_lookups()
_LAYER_PERM = {1: _SWAP_LOOKUP[0], 2: _CNOT_L_LOOKUP[0], 3: _CNOT_R_LOOKUP[0]}
_LAYER_SIGN = {1: _SWAP_LOOKUP[1], 2: _CNOT_L_LOOKUP[1], 3: _CNOT_R_LOOKUP[1]}

# flat layer-id tables: ids 0..575 are single-site pairs i*24+j, 576..578 are
# SWAP / CNOT_L / CNOT_R; lets gate sampling gather all 30 layers in one shot
_FLAT_PERM = np.concatenate(
    [_PAIR_PERM.reshape(-1, 16), _SWAP_LOOKUP[0][None], _CNOT_L_LOOKUP[0][None],
     _CNOT_R_LOOKUP[0][None]]
).copy()
_FLAT_SIGN = np.concatenate(
    [_PAIR_SIGN.reshape(-1, 16), _SWAP_LOOKUP[1][None], _CNOT_L_LOOKUP[1][None],
     _CNOT_R_LOOKUP[1][None]]
).copy()


class CliffordGate2:
    """A two-site Clifford composed from 30 random layers.

    The conjugation table is composed exactly (integer arithmetic) layer by
    layer; the 4x4 unitary is assembled lazily since the tableau engine never
    needs it.
    """

    __slots__ = ("layers", "perm", "sign", "_unitary")

    def __init__(self, layers, perm, sign):
        self.layers = layers
        self.perm = perm
        self.sign = sign
        self._unitary = None

    @property
    def unitary(self) -> np.ndarray:
        if self._unitary is None:
            u = np.eye(4, dtype=complex)
            for layer in self.layers:
                if layer[0] == 0:
                    lu = np.kron(
                        CLIFFORD1_TABLE[layer[1]].unitary,
                        CLIFFORD1_TABLE[layer[2]].unitary,
                    )
                elif layer[0] == 1:
                    lu = SWAP_GATE
                elif layer[0] == 2:
                    lu = CNOT_L_GATE
                else:
                    lu = CNOT_R_GATE
                u = lu @ u
            self._unitary = u
        return self._unitary

    @property
    def tableau_action(self):
        """Images of XI, ZI, IX, IZ as signed two-site PauliStrings."""
        return {
            lbl: self.conjugate_pauli(PauliString.from_label(lbl))
            for lbl in ("XI", "ZI", "IX", "IZ")
        }

    @property
    def tableau_key(self) -> tuple:
        """Hashable canonical key of the conjugation table."""
        return (self.perm.tobytes(), self.sign.tobytes())

    def conjugate_pauli(self, p: PauliString) -> PauliString:
        if p.n_qubits != 2:
            raise ValueError("expected a two-site Pauli")
        k = p.letter(0) + 4 * p.letter(1)
        kk = int(self.perm[k])
        e = (p.phase_exp + 2 * int(self.sign[k])) & 3
        return PauliString(2, (kk & 1) | ((kk >> 2 & 1) << 1), (kk >> 1 & 1) | ((kk >> 3) << 1), e)

    @classmethod
    def from_layers(cls, layers) -> "CliffordGate2":
        perm = np.arange(16, dtype=np.uint8)
        sign = np.zeros(16, dtype=np.uint8)
        for layer in layers:
            if layer[0] == 0:
                lperm = _PAIR_PERM[layer[1], layer[2]]
                lsign = _PAIR_SIGN[layer[1], layer[2]]
            else:
                lperm = _LAYER_PERM[layer[0]]
                lsign = _LAYER_SIGN[layer[0]]
            sign ^= lsign[perm]
            perm = lperm[perm]
        return cls(tuple(layers), perm, sign)


def sample_clifford1(rng: np.random.Generator) -> CliffordGate1:
    """Uniform draw from the 24-element single-qubit Clifford group."""
    return CLIFFORD1_TABLE[int(rng.integers(N_CLIFFORD1))]


def sample_clifford2(rng: np.random.Generator) -> CliffordGate2:
    """Random two-site Clifford from 30 alternating layers.

    Each layer is an independent uniform choice among (0) two independent
    random single-site Cliffords, (1) SWAP, (2) CNOT with the left qubit as
    control, (3) CNOT with the right qubit as control.  Consumes exactly one
    ``integers(0, 4, size=30)`` draw plus, when any pair layers occur, one
    ``integers(0, 24, size=2*n_pairs)`` draw.
    """
    choices = rng.integers(0, 4, size=N_LAYERS)
    pair_slots = np.nonzero(choices == 0)[0]
    ids = 575 + choices
    layers = [(int(c),) for c in choices]
    if pair_slots.size:
        idx = rng.integers(0, N_CLIFFORD1, size=2 * pair_slots.size)
        ids[pair_slots] = idx[0::2] * N_CLIFFORD1 + idx[1::2]
        for j, slot in enumerate(pair_slots):
            layers[slot] = (0, int(idx[2 * j]), int(idx[2 * j + 1]))
    perm, sign = backend.compose_layers(_FLAT_PERM[ids], _FLAT_SIGN[ids])
    return CliffordGate2(tuple(layers), perm, sign)


def conjugate(gate, p: PauliString) -> PauliString:
    """U P U^dagger for a table-driven gate, as a signed Pauli."""
    return gate.conjugate_pauli(p)


def random_pauli(n: int, rng: np.random.Generator) -> PauliString:
    """Uniform phase-free Pauli string (the Xi sample space)."""
    bits = rng.integers(0, 2, size=2 * n)
    x = int(sum(int(b) << i for i, b in enumerate(bits[:n])))
    z = int(sum(int(b) << i for i, b in enumerate(bits[n:])))
    return PauliString(n, x, z, 0)
