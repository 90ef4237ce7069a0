"""Random Exact Cover instances with a unique satisfying assignment.

A clause over three distinct qubits (i, j, k) is satisfied by a bit string x
iff exactly one of the bits x_i, x_j, x_k equals 1.  Bit convention used by
the whole package: bit b of the integer value (``value >> b & 1``) holds
variable x_b, so qubit 0 is the least-significant bit.

Instances are grown by adding uniformly random clauses (no duplicates) until
exactly one satisfying assignment survives; if the count drops to zero the
clause list is discarded and generation starts over.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import comb

import numpy as np

# satisfying_set refuses above this qubit count (2^24 filtering is desk-scale)
BRUTE_FORCE_CAP = 24
# generation restarts per instance before giving up
RESTART_CAP = 10_000


class GenerationError(RuntimeError):
    """Instance generation exhausted its restart budget."""


@dataclass(frozen=True, order=True)
class Clause:
    """Three pairwise-distinct qubit indices, stored sorted i < j < k.

    Any input order is canonicalized, so clause equality is set equality:
    ``Clause(2, 0, 1) == Clause(0, 1, 2)``.
    """

    i: int
    j: int
    k: int

    def __post_init__(self):
        i, j, k = sorted((int(self.i), int(self.j), int(self.k)))
        if i < 0:
            raise ValueError(f"negative qubit index in clause ({self.i}, {self.j}, {self.k})")
        if i == j or j == k:
            raise ValueError(f"clause indices must be pairwise distinct, got ({self.i}, {self.j}, {self.k})")
        object.__setattr__(self, "i", i)
        object.__setattr__(self, "j", j)
        object.__setattr__(self, "k", k)

    @property
    def indices(self) -> tuple[int, int, int]:
        return (self.i, self.j, self.k)


@dataclass(frozen=True)
class Instance:
    """An Exact Cover instance with a planted unique solution.

    ``clauses`` is kept in generation order.  Construction checks the cheap
    invariants (index ranges, no duplicate clauses, solution satisfies every
    clause); uniqueness of the solution is exponential to verify and is
    guaranteed by the generator -- call :func:`validate_instance` to recheck
    it by brute force.
    """

    n: int
    clauses: tuple[Clause, ...]
    solution: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"need at least one qubit, got n={self.n}")
        if not 0 <= self.solution < (1 << self.n):
            raise ValueError(f"solution {self.solution} out of range for n={self.n}")
        object.__setattr__(self, "clauses", tuple(self.clauses))
        for c in self.clauses:
            if c.k >= self.n:
                raise ValueError(f"clause {c.indices} references qubit >= n={self.n}")
        if len(set(self.clauses)) != len(self.clauses):
            raise ValueError("duplicate clauses in instance")
        for c in self.clauses:
            if not clause_satisfied(c, self.solution):
                raise ValueError(f"stated solution {self.solution:#b} violates clause {c.indices}")

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)


def clause_satisfied(c: Clause, x: int) -> bool:
    """True iff exactly one of bits i, j, k of x equals 1."""
    ones = ((x >> c.i) & 1) + ((x >> c.j) & 1) + ((x >> c.k) & 1)
    return ones == 1


def satisfying_set(clauses, n: int) -> np.ndarray:
    """All bit strings in [0, 2^n) satisfying every clause, ascending.

    Brute force: start from the full set of 2^n strings and filter clause by
    clause.  Refuses n above ``BRUTE_FORCE_CAP``.
    """
    if n < 1:
        raise ValueError(f"need at least one qubit, got n={n}")
    if n > BRUTE_FORCE_CAP:
        raise ValueError(f"n={n} exceeds brute-force cap {BRUTE_FORCE_CAP}")
    survivors = np.arange(1 << n, dtype=np.int64)
    for c in clauses:
        ones = ((survivors >> c.i) & 1) + ((survivors >> c.j) & 1) + ((survivors >> c.k) & 1)
        survivors = survivors[ones == 1]
        if survivors.size == 0:
            break
    return survivors


def violation_count(inst: Instance, x: int) -> int:
    """Number of clauses of ``inst`` violated by bit string x.

    This equals the problem-Hamiltonian eigenvalue of basis state x.
    """
    if not 0 <= x < (1 << inst.n):
        raise ValueError(f"bit string {x} out of range for n={inst.n}")
    return sum(1 for c in inst.clauses if not clause_satisfied(c, x))


def generate_instance(n: int, seed) -> Instance:
    """Generate a random instance with exactly one satisfying assignment.

    Clauses are sampled uniformly over all C(n, 3) index triples; duplicates
    of already-present clauses are skipped and resampled.  After each added
    clause the satisfying assignments are recounted incrementally; generation
    stops when exactly one survives and starts over (same RNG stream) when
    none do.  Deterministic for fixed (n, seed).

    ``seed`` is anything ``numpy.random.default_rng`` accepts.
    """
    if n < 3:
        raise ValueError(f"need at least 3 qubits for a clause, got n={n}")
    if n > BRUTE_FORCE_CAP:
        raise ValueError(f"n={n} exceeds brute-force cap {BRUTE_FORCE_CAP}")
    rng = np.random.default_rng(seed)
    full = np.arange(1 << n, dtype=np.int64)
    max_clauses = comb(n, 3)

    restarts = 0
    clauses: list[Clause] = []
    seen: set[Clause] = set()
    survivors = full
    while True:
        if len(clauses) == max_clauses:
            # all triples used without reaching uniqueness; start over
            restarts += 1
            if restarts > RESTART_CAP:
                raise GenerationError(
                    f"no unique-solution instance found for n={n} after {RESTART_CAP} restarts"
                )
            clauses, seen, survivors = [], set(), full
            continue
        c = Clause(*rng.choice(n, size=3, replace=False))
        if c in seen:
            continue
        clauses.append(c)
        seen.add(c)
        ones = ((survivors >> c.i) & 1) + ((survivors >> c.j) & 1) + ((survivors >> c.k) & 1)
        survivors = survivors[ones == 1]
        if survivors.size == 1:
            inst = Instance(n=n, clauses=tuple(clauses), solution=int(survivors[0]))
            # uniqueness forces every qubit into at least one clause
            assert all(d > 0 for d in clause_degrees(inst)), "uncovered qubit in unique instance"
            return inst
        if survivors.size == 0:
            restarts += 1
            if restarts > RESTART_CAP:
                raise GenerationError(
                    f"no unique-solution instance found for n={n} after {RESTART_CAP} restarts"
                )
            clauses, seen, survivors = [], set(), full


def clause_degrees(inst: Instance) -> np.ndarray:
    """d[i] = number of clauses in which qubit i appears."""
    d = np.zeros(inst.n, dtype=np.int64)
    for c in inst.clauses:
        d[c.i] += 1
        d[c.j] += 1
        d[c.k] += 1
    return d


def validate_instance(inst: Instance) -> None:
    """Recheck every instance invariant, including brute-force uniqueness.

    Raises ValueError on any violation.  Exponential in n (capped at
    ``BRUTE_FORCE_CAP``).
    """
    sats = satisfying_set(inst.clauses, inst.n)
    if sats.size != 1:
        raise ValueError(f"instance has {sats.size} satisfying assignments, expected exactly 1")
    if int(sats[0]) != inst.solution:
        raise ValueError(f"stated solution {inst.solution} != actual {int(sats[0])}")
    if np.any(clause_degrees(inst) == 0):
        raise ValueError("some qubit appears in no clause")


def instance_to_json(inst: Instance) -> str:
    """Canonical JSON form: sorted triples, clauses in generation order."""
    doc = {
        "n": inst.n,
        "clauses": [list(c.indices) for c in inst.clauses],
        "solution": inst.solution,
    }
    return json.dumps(doc, indent=2) + "\n"


def instance_from_json(text: str) -> Instance:
    """Parse the canonical JSON form; structural invariants are rechecked."""
    doc = json.loads(text)
    clauses = tuple(Clause(*triple) for triple in doc["clauses"])
    return Instance(n=int(doc["n"]), clauses=clauses, solution=int(doc["solution"]))
