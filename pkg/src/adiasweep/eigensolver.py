"""Two lowest eigenpairs of H(s): matrix-free Krylov solver plus dense oracle.

The iterative path builds an orthonormal Krylov basis with full
reorthogonalization (classical Gram-Schmidt with a second pass) and runs
Rayleigh-Ritz on the explicitly accumulated projected matrix.  Cheap Lanczos
residual estimates decide when to pay for exact residual norms, which are
computed from the stored images H*v of the basis vectors; convergence is
declared only when both lowest Ritz pairs are resolved exactly.  When the
Krylov budget runs out the solver thick-restarts from the two current Ritz
vectors and continues along the ground residual.  Everything is
deterministic given the inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hamiltonian import InterpolatedOperator, apply_hamiltonian, dense_matrix

MAX_KRYLOV = 300
MAX_RESTARTS = 10
DEFAULT_TOL = 1e-10
# warm starts get this much deterministic noise (relative to the unit state)
# to regain a component on the excited state
WARM_PERTURBATION = 1e-3
_CHECK_EVERY = 2
_FORCE_EXACT_EVERY = 16
_BREAKDOWN = 1e-12


class NonConvergenceError(RuntimeError):
    """Solver ran out of Krylov budget; carries the best residuals seen."""

    def __init__(self, message: str, e0: float, e1: float, residual0: float, residual1: float, iterations: int):
        super().__init__(message)
        self.e0 = e0
        self.e1 = e1
        self.residual0 = residual0
        self.residual1 = residual1
        self.iterations = iterations


@dataclass(frozen=True)
class EigenResult:
    """Two lowest eigenvalues, the ground vector, and solve diagnostics."""

    e0: float
    e1: float
    ground: np.ndarray
    residual0: float
    residual1: float
    iterations: int


def _start_vector(dim: int, warm_start, rng: np.random.Generator) -> np.ndarray:
    if warm_start is not None:
        v = np.asarray(warm_start, dtype=np.float64)
        if v.shape != (dim,):
            raise ValueError(f"warm start must have shape ({dim},), got {v.shape}")
        noise = rng.standard_normal(dim)
        v = v + (WARM_PERTURBATION / np.linalg.norm(noise)) * noise
    else:
        v = rng.standard_normal(dim)
    norm = np.linalg.norm(v)
    if norm == 0.0:
        raise ValueError("degenerate zero starting vector")
    return v / norm


def _orthonormal_to(v: np.ndarray, basis: np.ndarray) -> tuple[np.ndarray, float]:
    """Project v off the rows of ``basis`` (two passes) and normalize."""
    w = v - (basis @ v) @ basis
    w -= (basis @ w) @ basis
    beta = float(np.linalg.norm(w))
    return w, beta


def lowest_two_iterative(
    op: InterpolatedOperator,
    tol: float = DEFAULT_TOL,
    warm_start: np.ndarray | None = None,
    seed=0,
    max_krylov: int = MAX_KRYLOV,
    max_restarts: int = MAX_RESTARTS,
) -> EigenResult:
    """Converge the two lowest eigenpairs of H(s), matrix-free.

    Both Ritz pairs must reach exact residual norm <= tol * max(1, |e|).
    ``warm_start`` is typically the previous sweep point's ground vector; it
    is perturbed deterministically (``seed``) so the excited state keeps a
    nonzero component.  Raises :class:`NonConvergenceError` after
    ``max_restarts`` thick restarts of a ``max_krylov``-dimensional basis.

    Full reorthogonalization stores the basis and its images, costing
    2 * max_krylov * 2^n doubles of memory; lower ``max_krylov`` for n
    approaching the state-vector cap if memory is tight.
    """
    dim = op.dim
    if dim < 2:
        raise ValueError("operator dimension must be at least 2")
    if tol <= 0.0:
        raise ValueError(f"tolerance must be positive, got {tol}")
    rng = np.random.default_rng(seed)
    kmax = min(max_krylov, dim)

    basis = np.empty((kmax, dim))
    images = np.empty((kmax, dim))  # images[j] = H @ basis[j]
    proj = np.zeros((kmax, kmax))  # projected operator, exact on the filled block
    basis[0] = _start_vector(dim, warm_start, rng)
    nv = 1
    iterations = 0
    restarts = 0
    since_exact = 0
    best = (np.inf, np.nan, np.nan, np.inf, np.inf)  # (max scaled residual, e0, e1, r0, r1)

    while True:
        j = nv - 1
        y = apply_hamiltonian(op, basis[j])
        iterations += 1
        images[j] = y
        col = basis[:nv] @ y
        proj[:nv, j] = col
        proj[j, :nv] = col

        # expand first so the remainder norm feeds the residual estimates
        w = y - col @ basis[:nv]
        w -= (basis[:nv] @ w) @ basis[:nv]
        beta = float(np.linalg.norm(w))

        saturated = nv == kmax or nv == dim
        if nv >= 2 and (nv % _CHECK_EVERY == 0 or saturated):
            theta, ritz = np.linalg.eigh(proj[:nv, :nv])
            scale0 = max(1.0, abs(theta[0]))
            scale1 = max(1.0, abs(theta[1]))
            since_exact += 1
            # Lanczos estimate: the new remainder is the only unexplored
            # direction, so |beta * y[last]| approximates the residual
            est0 = beta * abs(ritz[nv - 1, 0])
            est1 = beta * abs(ritz[nv - 1, 1])
            plausible = est0 <= tol * scale0 and est1 <= tol * scale1
            if plausible or saturated or since_exact >= _FORCE_EXACT_EVERY:
                since_exact = 0
                u0 = ritz[:, 0] @ basis[:nv]
                u1 = ritz[:, 1] @ basis[:nv]
                r0 = float(np.linalg.norm(ritz[:, 0] @ images[:nv] - theta[0] * u0))
                r1 = float(np.linalg.norm(ritz[:, 1] @ images[:nv] - theta[1] * u1))
                scaled = max(r0 / scale0, r1 / scale1)
                if scaled < best[0]:
                    best = (scaled, float(theta[0]), float(theta[1]), r0, r1)
                if r0 <= tol * scale0 and r1 <= tol * scale1:
                    return EigenResult(
                        e0=float(theta[0]),
                        e1=float(theta[1]),
                        ground=u0 / np.linalg.norm(u0),
                        residual0=r0,
                        residual1=r1,
                        iterations=iterations,
                    )

        if nv < kmax:
            if beta <= _BREAKDOWN * max(1.0, float(np.linalg.norm(y))):
                # invariant subspace reached early; inject a fresh direction
                beta = 0.0
                while beta <= 1e-8:
                    w, beta = _orthonormal_to(rng.standard_normal(dim), basis[:nv])
            basis[nv] = w / beta
            nv += 1
            continue

        # Krylov budget exhausted without convergence
        if nv == dim or restarts >= max_restarts:
            break
        restarts += 1
        theta, ritz = np.linalg.eigh(proj[:nv, :nv])
        u0 = ritz[:, 0] @ basis[:nv]
        u1 = ritz[:, 1] @ basis[:nv]
        u0 /= np.linalg.norm(u0)
        u1 -= (u0 @ u1) * u0
        u1 /= np.linalg.norm(u1)
        basis[0] = u0
        basis[1] = u1
        images[0] = apply_hamiltonian(op, u0)
        images[1] = apply_hamiltonian(op, u1)
        iterations += 2
        proj[0, 0] = u0 @ images[0]
        proj[1, 1] = u1 @ images[1]
        off = 0.5 * (u0 @ images[1] + u1 @ images[0])
        proj[0, 1] = off
        proj[1, 0] = off
        # continue the Krylov sequence along the ground residual
        w, beta = _orthonormal_to(images[0] - proj[0, 0] * basis[0], basis[:2])
        if beta <= _BREAKDOWN:
            w, beta = _orthonormal_to(images[1] - proj[1, 1] * basis[1], basis[:2])
        while beta <= 1e-8:
            w, beta = _orthonormal_to(rng.standard_normal(dim), basis[:2])
        basis[2] = w / beta
        nv = 3
        since_exact = 0

    raise NonConvergenceError(
        f"eigensolver did not reach tol={tol} after {restarts} restarts "
        f"({iterations} matvecs); best residuals ({best[3]:.3e}, {best[4]:.3e})",
        e0=best[1],
        e1=best[2],
        residual0=best[3],
        residual1=best[4],
        iterations=iterations,
    )


def dense_lowest_two(op: InterpolatedOperator) -> EigenResult:
    """Full dense diagonalization; the small-n oracle for the iterative path."""
    m = dense_matrix(op)
    evals, evecs = np.linalg.eigh(m)
    ground = evecs[:, 0]
    excited = evecs[:, 1]
    r0 = float(np.linalg.norm(m @ ground - evals[0] * ground))
    r1 = float(np.linalg.norm(m @ excited - evals[1] * excited))
    return EigenResult(
        e0=float(evals[0]),
        e1=float(evals[1]),
        ground=ground,
        residual0=r0,
        residual1=r1,
        iterations=0,
    )
