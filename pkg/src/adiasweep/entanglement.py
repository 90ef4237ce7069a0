"""Bipartite entanglement of pure n-qubit states.

The amplitude vector is reshaped into a 2^|A| x 2^|B| matrix M (rows indexed
by the block qubits' bits, columns by the complement, matching the package
bit convention).  Reduced density matrices are M M^T, the entropy comes from
the squared singular values of M, and the Schmidt rank counts singular
values above a cutoff.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import ceil

import numpy as np

BLOCK_CAP = 13  # reduced density matrices up to 8192 x 8192
SCHMIDT_CUTOFF = 1e-8
EIG_FLOOR = 1e-12  # eigenvalues below this contribute 0 * log 0 := 0
NEG_TOL = 1e-10  # eigenvalues in [-NEG_TOL, 0) are clamped, beyond is an error
NORM_TOL = 1e-10


@dataclass(frozen=True)
class Bipartition:
    """A block of qubit indices; the complement is implied."""

    block: tuple[int, ...]

    def __post_init__(self):
        block = tuple(int(q) for q in self.block)
        object.__setattr__(self, "block", block)
        if len(block) == 0:
            raise ValueError("block must be non-empty")
        if len(set(block)) != len(block):
            raise ValueError(f"duplicate qubits in block {block}")
        if min(block) < 0:
            raise ValueError(f"negative qubit index in block {block}")


@dataclass(frozen=True)
class EntanglementRecord:
    """Entropy in bits, Schmidt rank, and the raw singular values behind both."""

    entropy_bits: float
    schmidt_rank: int
    log2_chi: float
    singular_values: np.ndarray


def default_bipartition(n: int) -> Bipartition:
    """First ceil(n/2) qubits versus the rest."""
    if n < 2:
        raise ValueError(f"need at least 2 qubits to bipartition, got n={n}")
    return Bipartition(block=tuple(range(ceil(n / 2))))


def _infer_n(state: np.ndarray) -> int:
    dim = state.shape[0]
    n = dim.bit_length() - 1
    if state.ndim != 1 or dim != (1 << n):
        raise ValueError(f"state vector length must be a power of two, got shape {state.shape}")
    return n


def _complement(part: Bipartition, n: int) -> tuple[int, ...]:
    if max(part.block) >= n:
        raise ValueError(f"block {part.block} references qubit >= n={n}")
    if len(part.block) >= n:
        raise ValueError(f"block must be a proper subset of the {n} qubits")
    return tuple(q for q in range(n) if q not in part.block)


def amplitude_matrix(state: np.ndarray, part: Bipartition) -> np.ndarray:
    """Reshape amplitudes into the 2^|A| x 2^|B| bipartition matrix."""
    state = np.asarray(state, dtype=np.float64)
    n = _infer_n(state)
    comp = _complement(part, n)
    x = np.arange(state.shape[0])
    rows = np.zeros_like(x)
    for t, q in enumerate(part.block):
        rows |= ((x >> q) & 1) << t
    cols = np.zeros_like(x)
    for t, q in enumerate(comp):
        cols |= ((x >> q) & 1) << t
    m = np.zeros((1 << len(part.block), 1 << len(comp)))
    m[rows, cols] = state
    return m


def reduced_density(state: np.ndarray, part: Bipartition) -> np.ndarray:
    """rho_A = Tr_B |psi><psi| for a normalized pure state."""
    state = np.asarray(state, dtype=np.float64)
    if abs(np.linalg.norm(state) - 1.0) > NORM_TOL:
        raise ValueError(f"state norm {np.linalg.norm(state)} deviates from 1 beyond {NORM_TOL}")
    if len(part.block) > BLOCK_CAP:
        raise ValueError(f"block size {len(part.block)} exceeds cap {BLOCK_CAP}")
    m = amplitude_matrix(state, part)
    return m @ m.T


def _entropy_from_eigenvalues(lams: np.ndarray) -> float:
    lams = np.where((lams < 0.0) & (lams > -NEG_TOL), 0.0, lams)
    if np.any(lams < 0.0):
        raise ValueError(f"eigenvalue {lams.min()} below -{NEG_TOL}: not positive semidefinite")
    keep = lams > EIG_FLOOR
    if not np.any(keep):
        return 0.0
    lams = lams[keep]
    return float(-np.sum(lams * np.log2(lams)))


def von_neumann_entropy(rho: np.ndarray) -> float:
    """Entropy in bits of a symmetric PSD density matrix with unit trace."""
    rho = np.asarray(rho, dtype=np.float64)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"density matrix must be square, got shape {rho.shape}")
    if np.max(np.abs(rho - rho.T)) > 1e-8:
        raise ValueError("density matrix is not symmetric")
    if abs(np.trace(rho) - 1.0) > 1e-8:
        raise ValueError(f"density matrix trace {np.trace(rho)} deviates from 1")
    return _entropy_from_eigenvalues(np.linalg.eigvalsh(rho))


def schmidt_rank(state: np.ndarray, part: Bipartition, cutoff: float = SCHMIDT_CUTOFF) -> int:
    """Number of singular values of the bipartition matrix above ``cutoff``."""
    state = np.asarray(state, dtype=np.float64)
    if abs(np.linalg.norm(state) - 1.0) > NORM_TOL:
        raise ValueError(f"state norm {np.linalg.norm(state)} deviates from 1 beyond {NORM_TOL}")
    sing = np.linalg.svd(amplitude_matrix(state, part), compute_uv=False)
    return int(np.count_nonzero(sing > cutoff))


def bipartition_entropy(state: np.ndarray, part: Bipartition) -> EntanglementRecord:
    """Entropy, Schmidt rank, and singular values for one bipartition."""
    state = np.asarray(state, dtype=np.float64)
    if abs(np.linalg.norm(state) - 1.0) > NORM_TOL:
        raise ValueError(f"state norm {np.linalg.norm(state)} deviates from 1 beyond {NORM_TOL}")
    sing = np.linalg.svd(amplitude_matrix(state, part), compute_uv=False)
    chi = int(np.count_nonzero(sing > SCHMIDT_CUTOFF))
    entropy = _entropy_from_eigenvalues(sing**2)
    return EntanglementRecord(
        entropy_bits=entropy,
        schmidt_rank=chi,
        log2_chi=float(np.log2(chi)) if chi > 0 else 0.0,
        singular_values=sing,
    )
