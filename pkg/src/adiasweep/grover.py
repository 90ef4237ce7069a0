"""Analytic treatment of the adiabatic search (Grover) Hamiltonian.

H(s) = (1-s)(I - |u><u|) + s(I - |m><m|), where |u> is the uniform
superposition over all 2^n basis states and |m> the marked state.  The
dynamics lives in the two-dimensional span of {|m>, |u>}; on the orthogonal
complement H(s) is the identity.  All quantities here are computed in that
2-d subspace from the exact overlap <m|u> = 2^(-n/2), so they stay cheap and
precise for large n.  The full 2^n-dimensional operator is materialized only
by the dense oracle used for cross-checks.
"""

from __future__ import annotations

from math import log, sqrt

import numpy as np

from .entanglement import EIG_FLOOR, SCHMIDT_CUTOFF
from .hamiltonian import DENSE_CAP, STATE_VECTOR_CAP


def _check_sn(s: float, n: int) -> None:
    if not 0.0 <= s <= 1.0:
        raise ValueError(f"s must lie in [0, 1], got {s}")
    if n < 2:
        raise ValueError(f"need at least 2 qubits, got n={n}")


def grover_effective(s: float, n: int) -> np.ndarray:
    """H(s) restricted to the orthonormal basis {|m>, |r>}.

    |r> is the unit vector along |u> - <m|u>|m>.  With a = <m|u> = 2^(-n/2)
    and b = sqrt(1 - a^2) the restriction is

        [[ (1-s) b^2,      -(1-s) a b ],
         [ -(1-s) a b,  1 - (1-s) b^2 ]].
    """
    _check_sn(s, n)
    a2 = 2.0 ** (-n)
    b2 = 1.0 - a2
    ab = sqrt(a2 * b2)
    return np.array(
        [
            [(1.0 - s) * b2, -(1.0 - s) * ab],
            [-(1.0 - s) * ab, 1.0 - (1.0 - s) * b2],
        ]
    )


def grover_gap(s: float, n: int) -> float:
    """Gap between the two in-subspace levels: sqrt(1 - 4s(1-s)(1 - 2^-n)).

    Follows from the 2x2 restriction, whose trace is 1 and whose determinant
    is s(1-s)(1 - 2^-n).  Symmetric under s <-> 1-s with minimum 2^(-n/2)
    at s = 0.5.
    """
    _check_sn(s, n)
    return sqrt(1.0 - 4.0 * s * (1.0 - s) * (1.0 - 2.0 ** (-n)))


def _ground_coefficients(s: float, n: int) -> tuple[float, float]:
    """Ground-state coefficients (c_m, c_r) in the {|m>, |r>} basis, c_m >= 0."""
    _, vecs = np.linalg.eigh(grover_effective(s, n))
    c = vecs[:, 0]
    if c[0] < 0.0:
        c = -c
    return float(c[0]), float(c[1])


def grover_ground_state(s: float, n: int, x0: int = 0) -> np.ndarray:
    """Explicit 2^n ground vector with marked state ``x0``.

    Amplitude on the marked state is kept non-negative.  Only needed for
    brute-force cross-checks; prefer the closed forms otherwise.
    """
    _check_sn(s, n)
    if n > STATE_VECTOR_CAP:
        raise ValueError(f"n={n} exceeds state-vector cap {STATE_VECTOR_CAP}")
    dim = 1 << n
    if not 0 <= x0 < dim:
        raise ValueError(f"marked state {x0} out of range for n={n}")
    c_m, c_r = _ground_coefficients(s, n)
    # |r> has amplitude 0 on x0 and 1/sqrt(2^n - 1) elsewhere
    state = np.full(dim, c_r / sqrt(dim - 1.0))
    state[x0] = c_m
    return state


def grover_entropy(s: float, n: int, block_size: int) -> float:
    """Closed-form block entropy (bits) of the ground state.

    The ground state is gamma |m> + delta |u>; both |m> and |u> factor over
    any bipartition, so the state is a two-term product decomposition with
    block overlaps 2^(-block_size/2) and 2^(-(n-block_size)/2).  The reduced
    spectrum is {(1 +- sqrt(1 - 4 det^2)) / 2} with
    det = gamma * delta * sqrt(1 - 2^-block_size) * sqrt(1 - 2^-(n-block_size)).
    Independent of which qubits form the block and of which state is marked.
    """
    _check_sn(s, n)
    if not 1 <= block_size <= n - 1:
        raise ValueError(f"block size must lie in [1, {n - 1}], got {block_size}")
    c_m, c_r = _ground_coefficients(s, n)
    a = 2.0 ** (-n / 2.0)
    b = sqrt(1.0 - a * a)
    gamma = c_m - c_r * a / b
    delta = c_r / b
    det = gamma * delta * sqrt(1.0 - 2.0 ** (-block_size)) * sqrt(1.0 - 2.0 ** (-(n - block_size)))
    disc = sqrt(max(0.0, 1.0 - 4.0 * det * det))
    lams = np.array([(1.0 + disc) / 2.0, (1.0 - disc) / 2.0])
    keep = lams > EIG_FLOOR
    return float(-np.sum(lams[keep] * np.log2(lams[keep])))


def grover_schmidt_rank(s: float, n: int, block_size: int, cutoff: float = SCHMIDT_CUTOFF) -> int:
    """Closed-form Schmidt rank for a block: 1 at the endpoints, else 2."""
    _check_sn(s, n)
    if not 1 <= block_size <= n - 1:
        raise ValueError(f"block size must lie in [1, {n - 1}], got {block_size}")
    c_m, c_r = _ground_coefficients(s, n)
    a = 2.0 ** (-n / 2.0)
    b = sqrt(1.0 - a * a)
    gamma = c_m - c_r * a / b
    delta = c_r / b
    det = gamma * delta * sqrt(1.0 - 2.0 ** (-block_size)) * sqrt(1.0 - 2.0 ** (-(n - block_size)))
    disc = sqrt(max(0.0, 1.0 - 4.0 * det * det))
    sing = np.sqrt(np.array([(1.0 + disc) / 2.0, max(0.0, (1.0 - disc) / 2.0)]))
    return int(np.count_nonzero(sing > cutoff))


def entropy_asymptote(n: int) -> float:
    """Large-n limit of the equal-bipartition entropy at s = 0.5."""
    return 1.0 - (4.0 / log(2.0)) * 2.0 ** (-n / 2.0)


def grover_dense_oracle(s: float, n: int, x0: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """Full 2^n spectrum and ground vector by explicit diagonalization.

    Test oracle only; refuses n above the dense cap.  For 0 < s < 1 the
    eigenvalue 1 appears with multiplicity 2^n - 2; the other two eigenvalues
    match :func:`grover_effective`.
    """
    _check_sn(s, n)
    if n > DENSE_CAP:
        raise ValueError(f"n={n} exceeds dense cap {DENSE_CAP}")
    dim = 1 << n
    if not 0 <= x0 < dim:
        raise ValueError(f"marked state {x0} out of range for n={n}")
    m = np.full((dim, dim), -(1.0 - s) / dim)
    np.fill_diagonal(m, 1.0 - (1.0 - s) / dim)
    m[x0, x0] -= s
    evals, evecs = np.linalg.eigh(m)
    ground = evecs[:, 0]
    if ground[x0] < 0.0:
        ground = -ground
    return evals, ground
