"""Perfect sampling of the Pauli-string distribution Xi on MPS states.

Xi_P = 2^-N <P>^2 is a probability distribution over the 4^N phase-free
Pauli strings.  A string is drawn exactly by a left-to-right sweep: with the
state right-canonical, the left environment E_k (the doubled ket/bra
transfer matrix with the chosen prefix letters inserted) has the property
that the prefix marginal is 2^-k ||E_k||_F^2, so the four conditional letter
weights at site k are ||E_k(sigma)||^2 / (2 ||E_{k-1}||^2).  The final
1x1 environment is <P> itself.

Estimators (paper's choice, kept as-is including the Jensen bias of the
outer log at finite sample size):

    M2 ~ -log2( mean of <P>^2 ),     M1 ~ mean of -log2 <P>^2

with leave-one-out jackknife standard errors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .mps import MPSState
from .pauli import PauliString

_NEG_TOL = -1e-12


class EstimatorBlowupError(RuntimeError):
    """Mean sampled <P>^2 vanished; state is beyond sampling reach."""


@dataclass(frozen=True)
class PauliSample:
    string: PauliString
    expectation: float
    weight: float


@dataclass(frozen=True)
class MagicEstimate:
    value: float
    std_error: float
    n_samples: int
    alpha: int


def _right_canonical_tensors(state: MPSState):
    work = state.copy()
    work.move_center(0)
    return work.tensors


def _conditional_envs(e: np.ndarray, a: np.ndarray):
    """The four candidate environments at one site, letter order I,X,Z,Y.

    e: (..., D, D) current environments with (ket, bra) index order;
    a: (D, 2, Dr) site tensor.  Returns (..., 4, Dr, Dr), again (ket, bra):

        E'(sigma)[r, r'] = sum E[l, l'] A[l, s, r] A*[l', s', r'] sigma[s', s]
    """
    et = np.swapaxes(e, -1, -2)
    m0 = np.swapaxes(et @ a[:, 0, :], -1, -2)
    m1 = np.swapaxes(et @ a[:, 1, :], -1, -2)
    a0c = a[:, 0, :].conj()
    a1c = a[:, 1, :].conj()
    g00 = m0 @ a0c
    g01 = m0 @ a1c
    g10 = m1 @ a0c
    g11 = m1 @ a1c
    return np.stack(
        [g00 + g11, g01 + g10, g00 - g11, 1j * (g01 - g10)], axis=-3
    )


def _letter_weights(cands: np.ndarray, nrm2: np.ndarray) -> np.ndarray:
    w = np.sum(np.abs(cands) ** 2, axis=(-1, -2)) / (2.0 * nrm2[..., None])
    if w.min() < _NEG_TOL:
        raise RuntimeError("negative conditional weight; canonical form broken")
    w = np.maximum(w, 0.0)
    return w / np.sum(w, axis=-1, keepdims=True)


def sample_pauli(state: MPSState, rng: np.random.Generator) -> PauliSample:
    """Draw one Pauli string exactly from Xi (reference single-sample path)."""
    tensors = _right_canonical_tensors(state)
    n = state.n_qubits
    e = np.ones((1, 1), dtype=complex)
    nrm2 = 1.0
    x = z = 0
    for site, a in enumerate(tensors):
        cands = _conditional_envs(e, a)
        w = _letter_weights(cands, np.asarray(nrm2))
        u = float(rng.random())
        k = int(np.minimum(np.searchsorted(np.cumsum(w), u, side="right"), 3))
        e = cands[k]
        nrm2 = float(np.sum(np.abs(e) ** 2))
        x |= (k & 1) << site
        z |= (k >> 1) << site
    expectation = complex(e[0, 0])
    if abs(expectation.imag) > 1e-8:
        raise RuntimeError("sampled expectation not real")
    expectation = float(expectation.real)
    return PauliSample(
        string=PauliString(n, x, z, 0),
        expectation=expectation,
        weight=expectation**2 / 2**n,
    )


def draw_samples(state: MPSState, n_samples: int, rng: np.random.Generator):
    """Batched sweep drawing `n_samples` strings in one pass.

    Returns (letters, expectations): letters is (n_samples, N) uint8 in the
    k-index I=0, X=1, Z=2, Y=3; expectations are the exact <P> per sample.
    Distribution-identical to n_samples calls of sample_pauli (each sample's
    chain is independent); only the rng draw order differs.
    """
    tensors = _right_canonical_tensors(state)
    n = state.n_qubits
    s = n_samples
    e = np.ones((s, 1, 1), dtype=complex)
    nrm2 = np.ones(s)
    letters = np.zeros((s, n), dtype=np.uint8)
    for site, a in enumerate(tensors):
        cands = _conditional_envs(e, a)
        w = _letter_weights(cands, nrm2)
        u = rng.random(s)
        cs = np.cumsum(w, axis=1)
        k = np.minimum(np.sum(u[:, None] >= cs, axis=1), 3)
        letters[:, site] = k
        e = cands[np.arange(s), k]
        nrm2 = np.sum(np.abs(e) ** 2, axis=(1, 2))
    exps = e[:, 0, 0]
    if np.abs(exps.imag).max() > 1e-8:
        raise RuntimeError("sampled expectation not real")
    return letters, exps.real


def letters_to_pauli(letters: np.ndarray) -> PauliString:
    x = z = 0
    for site, k in enumerate(letters):
        x |= (int(k) & 1) << site
        z |= (int(k) >> 1) << site
    return PauliString(len(letters), x, z, 0)


def letters_to_index(letters: np.ndarray) -> np.ndarray:
    """PauliString.index ((x << N) | z) for a (samples, N) letter matrix."""
    n = letters.shape[1]
    idx = np.zeros(letters.shape[0], dtype=np.int64)
    for site in range(n):
        k = letters[:, site].astype(np.int64)
        idx |= ((k & 1) << (site + n)) | (((k >> 1) & 1) << site)
    return idx


def _jackknife_se(values: np.ndarray) -> float:
    n = len(values)
    return float(np.sqrt((n - 1) / n * np.sum((values - values.mean()) ** 2)))


def estimate_m2(
    state: MPSState, rng: np.random.Generator, n_samples: int = 128
) -> MagicEstimate:
    """Stabilizer 2-Renyi entropy estimate: -log2 of the mean <P>^2."""
    if n_samples < 2:
        raise ValueError("n_samples must be >= 2")
    _, exps = draw_samples(state, n_samples, rng)
    x = exps**2
    mean = x.mean()
    if mean < 1e-12:
        raise EstimatorBlowupError("mean <P>^2 below 1e-12")
    loo = (mean * n_samples - x) / (n_samples - 1)
    return MagicEstimate(
        value=float(-np.log2(mean)),
        std_error=_jackknife_se(-np.log2(loo)),
        n_samples=n_samples,
        alpha=2,
    )


def estimate_m1(
    state: MPSState, rng: np.random.Generator, n_samples: int = 128
) -> MagicEstimate:
    """Stabilizer Shannon-entropy estimate: mean of -log2 <P>^2."""
    if n_samples < 2:
        raise ValueError("n_samples must be >= 2")
    _, exps = draw_samples(state, n_samples, rng)
    x = exps**2
    if x.min() < 1e-300:
        raise EstimatorBlowupError("sampled <P>^2 underflowed")
    vals = -np.log2(x)
    mean = vals.mean()
    loo = (mean * n_samples - vals) / (n_samples - 1)
    return MagicEstimate(
        value=float(mean),
        std_error=_jackknife_se(loo),
        n_samples=n_samples,
        alpha=1,
    )
