"""Interpolated operator H(s) = (1-s) H0 + s HP, applied matrix-free.

HP is diagonal in the computational basis and counts violated clauses per
basis state.  H0 is a transverse field whose coefficient on qubit i is half
the number of clauses containing i, so its action on a state vector v is

    (H0 v)[x] = sum_i (d_i / 2) * (v[x] - v[x XOR 2^i]).

Both pieces are real symmetric, so the whole package works with real
amplitude vectors of length 2^n.  No 2^n x 2^n matrix is ever materialized
on the fast path; :func:`dense_matrix` exists as a small-n test oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .instances import Instance, clause_degrees

# 2^20 doubles is ~8 MB per state vector; larger n is out of range
STATE_VECTOR_CAP = 20
# explicit 2^n x 2^n matrices only below this
DENSE_CAP = 12


@dataclass(frozen=True)
class ProblemDiagonal:
    """Eigenvalues of HP in the computational basis: clause-violation counts."""

    n: int
    energies: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.energies, dtype=np.float64)
        object.__setattr__(self, "energies", e)
        if e.shape != (1 << self.n,):
            raise ValueError(f"energies must have length 2^{self.n}, got {e.shape}")
        if np.any(e < 0):
            raise ValueError("negative clause-violation count")
        if np.count_nonzero(e == 0) != 1:
            raise ValueError("problem diagonal must have exactly one zero entry (unique solution)")


@dataclass(frozen=True)
class DriverDegrees:
    """Per-qubit clause counts d_i, the transverse-field coefficients (x2)."""

    d: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.d, dtype=np.float64)
        object.__setattr__(self, "d", d)
        if d.ndim != 1 or d.size < 1:
            raise ValueError("degree vector must be a non-empty 1-d array")
        if np.any(d < 1):
            raise ValueError("every qubit must appear in at least one clause (d_i >= 1)")

    @property
    def n(self) -> int:
        return self.d.size


def clause_energy(c, x: int) -> int:
    """0 if clause satisfied by bit string x, else 1 (the penalty energy)."""
    ones = ((x >> c.i) & 1) + ((x >> c.j) & 1) + ((x >> c.k) & 1)
    return 0 if ones == 1 else 1


def build_problem_diagonal(inst: Instance) -> ProblemDiagonal:
    """Vector of violation counts over all 2^n basis states.

    Vectorized over the basis; O(num_clauses * 2^n).
    """
    if inst.n > STATE_VECTOR_CAP:
        raise ValueError(f"n={inst.n} exceeds state-vector cap {STATE_VECTOR_CAP}")
    x = np.arange(1 << inst.n, dtype=np.int64)
    energies = np.zeros(x.size, dtype=np.float64)
    for c in inst.clauses:
        ones = ((x >> c.i) & 1) + ((x >> c.j) & 1) + ((x >> c.k) & 1)
        energies += ones != 1
    return ProblemDiagonal(n=inst.n, energies=energies)


def driver_degrees(inst: Instance) -> DriverDegrees:
    return DriverDegrees(d=clause_degrees(inst))


@dataclass(frozen=True)
class InterpolatedOperator:
    """H(s) = (1-s) H0 + s HP for one fixed s in [0, 1].

    Immutable; safe to share across concurrent solver runs.  The combined
    diagonal (driver constant plus scaled violation counts) is precomputed
    once, so each application costs n axis flips plus one elementwise product.
    """

    s: float
    diag: ProblemDiagonal
    degrees: DriverDegrees

    def __post_init__(self):
        if not 0.0 <= self.s <= 1.0:
            raise ValueError(f"s must lie in [0, 1], got {self.s}")
        if self.degrees.n != self.diag.n:
            raise ValueError(f"degree vector length {self.degrees.n} != n={self.diag.n}")
        half_d = 0.5 * self.degrees.d
        diagonal = (1.0 - self.s) * half_d.sum() + self.s * self.diag.energies
        object.__setattr__(self, "_half_d", half_d)
        object.__setattr__(self, "_diagonal", diagonal)

    @property
    def n(self) -> int:
        return self.diag.n

    @property
    def dim(self) -> int:
        return 1 << self.diag.n


def operator_from_instance(inst: Instance, s: float) -> InterpolatedOperator:
    """Convenience constructor building both pieces from an instance."""
    return InterpolatedOperator(s=s, diag=build_problem_diagonal(inst), degrees=driver_degrees(inst))


def _flip_axis(v: np.ndarray, n: int, qubit: int) -> np.ndarray:
    """v with basis index relabeled x -> x XOR 2^qubit."""
    shape = (1 << (n - 1 - qubit), 2, 1 << qubit)
    return v.reshape(shape)[:, ::-1, :].reshape(-1)


def apply_hamiltonian(op: InterpolatedOperator, v: np.ndarray) -> np.ndarray:
    """H(s) v, matrix-free in O(n 2^n) time.

    The bit-flip terms are applied as in-place updates on the two half-slabs
    of each qubit axis, so no full-length temporary is allocated per qubit.
    """
    v = np.asarray(v, dtype=np.float64)
    if v.shape != (op.dim,):
        raise ValueError(f"state vector must have shape ({op.dim},), got {v.shape}")
    out = op._diagonal * v
    coef = 1.0 - op.s
    if coef != 0.0:
        half_d = op._half_d
        n = op.n
        scratch = np.empty(op.dim >> 1)
        for i in range(n):
            lo, hi = 1 << (n - 1 - i), 1 << i
            v3 = v.reshape(lo, 2, hi)
            out3 = out.reshape(lo, 2, hi)
            t = scratch.reshape(lo, hi)
            c = coef * half_d[i]
            np.multiply(v3[:, 1, :], c, out=t)
            out3[:, 0, :] -= t
            np.multiply(v3[:, 0, :], c, out=t)
            out3[:, 1, :] -= t
    return out


def dense_matrix(op: InterpolatedOperator) -> np.ndarray:
    """Explicit 2^n x 2^n matrix of H(s); small-n oracle for tests.

    Exactly symmetric by construction: entry (x, x XOR 2^i) is -(1-s) d_i / 2
    and the diagonal carries the combined field/violation terms.
    """
    if op.n > DENSE_CAP:
        raise ValueError(f"n={op.n} exceeds dense cap {DENSE_CAP}")
    m = np.diag(op._diagonal.copy())
    rows = np.arange(op.dim)
    coef = 1.0 - op.s
    for i in range(op.n):
        m[rows, rows ^ (1 << i)] = -coef * op._half_d[i]
    return m
