"""Truncated matrix-product-state evolution for open qubit chains.

Mixed-canonical MPS with an explicit orthogonality center: tensors left of
the center are left-orthonormal, tensors right of it right-orthonormal, and
the center tensor carries the full state weight.  Two-site gates contract,
split by SVD, drop singular values below ``rel_threshold`` times the largest
one, cap the bond at ``max_bond``, and renormalize, so the global norm stays
exactly 1 for Born sampling.

Tensor index order is (left bond, physical, right bond); site 0 is the
leftmost qubit and the most significant bit of ``to_state_vector``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MAX_DENSE_QUBITS = 14


@dataclass(frozen=True)
class TruncationPolicy:
    """SVD truncation: relative cutoff plus a hard bond cap."""

    rel_threshold: float = 1e-6
    max_bond: int = 256

    def __post_init__(self):
        if self.rel_threshold < 0:
            raise ValueError("rel_threshold must be >= 0")
        if self.max_bond < 1:
            raise ValueError("max_bond must be >= 1")


# the SM's alternate thresholds used for convergence checks
CONVERGENCE_POLICY = TruncationPolicy(rel_threshold=1e-5, max_bond=128)


def exact_policy(n: int) -> TruncationPolicy:
    """Policy under which evolution is exact (no weight is ever cut)."""
    return TruncationPolicy(rel_threshold=0.0, max_bond=2 ** (n // 2))


def _check_unitary(gate: np.ndarray, dim: int, tol: float = 1e-8) -> None:
    if gate.shape != (dim, dim) or np.abs(gate.conj().T @ gate - np.eye(dim)).max() > tol:
        raise ValueError("gate is not unitary")


class MPSState:
    """Pure state of an even-length qubit chain as a truncated MPS."""

    __slots__ = ("n_qubits", "tensors", "ortho_center", "policy")

    def __init__(self, tensors, ortho_center: int, policy: TruncationPolicy):
        self.n_qubits = len(tensors)
        self.tensors = tensors
        self.ortho_center = ortho_center
        self.policy = policy

    @classmethod
    def basis_state(cls, n: int, bits, policy: TruncationPolicy | None = None) -> "MPSState":
        if n < 2 or n % 2:
            raise ValueError("n_qubits must be even and >= 2 (half-chain cut)")
        if isinstance(bits, int):
            bits = [(bits >> (n - 1 - i)) & 1 for i in range(n)]
        if len(bits) != n:
            raise ValueError("bit pattern length mismatch")
        tensors = []
        for b in bits:
            t = np.zeros((1, 2, 1), dtype=complex)
            t[0, int(b), 0] = 1.0
            tensors.append(t)
        return cls(tensors, 0, policy or TruncationPolicy())

    def copy(self) -> "MPSState":
        return MPSState([t.copy() for t in self.tensors], self.ortho_center, self.policy)

    def bond_dimensions(self):
        return [t.shape[2] for t in self.tensors[:-1]]

    def norm(self) -> float:
        return float(np.linalg.norm(self.tensors[self.ortho_center]))

    def move_center(self, target: int) -> None:
        if not 0 <= target < self.n_qubits:
            raise ValueError("target out of range")
        while self.ortho_center < target:
            c = self.ortho_center
            a = self.tensors[c]
            dl, _, dr = a.shape
            q, r = np.linalg.qr(a.reshape(dl * 2, dr))
            self.tensors[c] = q.reshape(dl, 2, -1)
            self.tensors[c + 1] = np.tensordot(r, self.tensors[c + 1], axes=(1, 0))
            self.ortho_center = c + 1
        while self.ortho_center > target:
            c = self.ortho_center
            a = self.tensors[c]
            dl, _, dr = a.shape
            q1, r1 = np.linalg.qr(a.reshape(dl, 2 * dr).conj().T)
            self.tensors[c] = q1.conj().T.reshape(-1, 2, dr)
            self.tensors[c - 1] = np.tensordot(self.tensors[c - 1], r1.conj().T, axes=(2, 0))
            self.ortho_center = c - 1

    def apply_gate1(self, site: int, gate: np.ndarray) -> "MPSState":
        """Single-site unitary; bond dimensions and canonical form unchanged."""
        _check_unitary(gate, 2)
        a = self.tensors[site]
        self.tensors[site] = np.tensordot(gate, a, axes=(1, 1)).transpose(1, 0, 2)
        return self

    def apply_gate2(self, left_site: int, gate: np.ndarray) -> "MPSState":
        """Two-site unitary on (left_site, left_site+1) with SVD truncation."""
        _check_unitary(gate, 4)
        n = self.n_qubits
        if not 0 <= left_site <= n - 2:
            raise ValueError("left_site out of range")
        if self.ortho_center < left_site:
            self.move_center(left_site)
        elif self.ortho_center > left_site + 1:
            self.move_center(left_site + 1)
        al, ar = self.tensors[left_site], self.tensors[left_site + 1]
        dl, dr = al.shape[0], ar.shape[2]
        theta = np.tensordot(al, ar, axes=(2, 0))
        g = gate.reshape(2, 2, 2, 2)
        theta = np.tensordot(g, theta, axes=((2, 3), (1, 2))).transpose(2, 0, 1, 3)
        u, s, vh = np.linalg.svd(theta.reshape(dl * 2, 2 * dr), full_matrices=False)
        keep = int(np.count_nonzero(s >= self.policy.rel_threshold * s[0]))
        keep = max(1, min(keep, self.policy.max_bond))
        s = s[:keep] / np.linalg.norm(s[:keep])
        self.tensors[left_site] = u[:, :keep].reshape(dl, 2, keep)
        self.tensors[left_site + 1] = (s[:, None] * vh[:keep]).reshape(keep, 2, dr)
        self.ortho_center = left_site + 1
        return self

    def measure_z(self, site: int, rng: np.random.Generator) -> int:
        """Born-rule Z measurement: projects, renormalizes, returns 0/1."""
        self.move_center(site)
        a = self.tensors[site]
        p0 = float(np.sum(np.abs(a[:, 0, :]) ** 2))
        p0 = min(max(p0, 0.0), 1.0)
        u = float(rng.random())
        outcome = 0 if u < p0 else 1
        if (p0 if outcome == 0 else 1.0 - p0) < 1e-14:
            outcome ^= 1
        b = a.copy()
        b[:, 1 - outcome, :] = 0.0
        self.tensors[site] = b / np.linalg.norm(b)
        return outcome

    def schmidt_coefficients(self) -> np.ndarray:
        """Schmidt coefficients across the half-chain cut, non-increasing."""
        cut = self.n_qubits // 2 - 1
        self.move_center(cut)
        a = self.tensors[cut]
        dl, _, dr = a.shape
        return np.linalg.svd(a.reshape(dl * 2, dr), compute_uv=False)

    def entanglement_entropy(self) -> float:
        """Half-chain von Neumann entropy in bits."""
        lam2 = self.schmidt_coefficients() ** 2
        lam2 = lam2[lam2 > 1e-15]
        return float(-np.sum(lam2 * np.log2(lam2)))

    def to_state_vector(self) -> np.ndarray:
        """Dense amplitude vector (site 0 = most significant bit)."""
        if self.n_qubits > MAX_DENSE_QUBITS:
            raise ValueError(f"dense conversion limited to {MAX_DENSE_QUBITS} qubits")
        v = self.tensors[0].reshape(2, -1)
        for a in self.tensors[1:]:
            v = np.tensordot(v, a, axes=(1, 0)).reshape(v.shape[0] * 2, -1)
        return v.reshape(-1)

    def check_canonical(self, tol: float = 1e-8) -> None:
        """Verify the claimed orthonormality conditions (test helper)."""
        for i, a in enumerate(self.tensors):
            dl, _, dr = a.shape
            if i < self.ortho_center:
                m = a.reshape(dl * 2, dr)
                err = np.abs(m.conj().T @ m - np.eye(dr)).max()
            elif i > self.ortho_center:
                m = a.reshape(dl, 2 * dr)
                err = np.abs(m @ m.conj().T - np.eye(dl)).max()
            else:
                err = abs(np.linalg.norm(a) - 1.0)
            if err > tol:
                raise AssertionError(f"canonical form violated at site {i}: {err}")
