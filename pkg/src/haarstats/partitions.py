"""Subsystem partitions, marginalization, and conditional slicing.

Bit convention (used everywhere, including file formats): a full bit-string
index ``j`` has qubit 0 as its most significant bit, matching the order the
string is written on a circuit diagram.  A :class:`Partition` names the
measured subsystem A by its qubit positions; the complement B defaults to
the trailing (least significant) qubits, so "conditioning on the final bit"
means ``Partition.leading(n, n - 1)`` with outcome ``b`` in {0, 1}.

Marginalizing a flat-Dirichlet probability vector over B aggregates its
components in groups of ``dim_b``, which yields a Dirichlet vector with all
parameters equal to ``dim_b``.  Conditioning on a fixed B outcome instead
divides one branch by its own sum, which cancels the global normalization
and restores a flat Dirichlet on the slice: the conditional law of a random
state is the full-system law at reduced dimension.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateSliceError
from .states import DepolarizedProbVector, ProbVector

# Below this, a conditioning outcome is treated as measure-zero.
WEIGHT_FLOOR = 1e-300


@dataclass(frozen=True)
class Partition:
    """Split of ``n_qubits`` into subsystem A (``a_bits``) and complement B."""

    n_qubits: int
    a_bits: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "a_bits", tuple(int(q) for q in self.a_bits))
        if self.n_qubits < 1:
            raise ValueError(f"n_qubits must be >= 1, got {self.n_qubits}")
        if not self.a_bits:
            raise ValueError("subsystem A must contain at least one qubit")
        if len(set(self.a_bits)) != len(self.a_bits):
            raise ValueError(f"a_bits contains duplicates: {self.a_bits}")
        if any(q < 0 or q >= self.n_qubits for q in self.a_bits):
            raise ValueError(f"a_bits {self.a_bits} out of range [0, {self.n_qubits})")

    @classmethod
    def leading(cls, n_qubits: int, n_a: int) -> "Partition":
        """A = the first ``n_a`` qubits; B = the trailing qubits."""
        return cls(n_qubits, tuple(range(n_a)))

    @property
    def n_a(self) -> int:
        return len(self.a_bits)

    @property
    def n_b(self) -> int:
        return self.n_qubits - self.n_a

    @property
    def dim_a(self) -> int:
        return 2**self.n_a

    @property
    def dim_b(self) -> int:
        return 2**self.n_b

    @property
    def b_bits(self) -> tuple[int, ...]:
        """Complement positions in ascending order (first = MSB of b)."""
        in_a = set(self.a_bits)
        return tuple(q for q in range(self.n_qubits) if q not in in_a)

    def project_a(self, indices) -> np.ndarray:
        """Gather the A-substring value of each full bit-string index."""
        return self._gather(indices, self.a_bits)

    def project_b(self, indices) -> np.ndarray:
        """Gather the B-substring value of each full bit-string index."""
        return self._gather(indices, self.b_bits)

    def _gather(self, indices, bits) -> np.ndarray:
        idx = np.asarray(indices, dtype=np.int64)
        out = np.zeros_like(idx)
        for q in bits:
            out = (out << 1) | ((idx >> (self.n_qubits - 1 - q)) & 1)
        return out

    def _a_axis_order(self):
        """Permutation taking ascending-position A axes to a_bits order."""
        ranks = {q: r for r, q in enumerate(sorted(self.a_bits))}
        return tuple(ranks[q] for q in self.a_bits)


def _check_partition(vec_qubits: int, part: Partition) -> None:
    if part.n_qubits != vec_qubits:
        raise ValueError(f"partition is over {part.n_qubits} qubits but the "
                         f"vector has {vec_qubits}")


def _as_a_vector(sub: np.ndarray, part: Partition) -> np.ndarray:
    """Flatten a (2,)*n_a block into an A-index array in a_bits order."""
    order = part._a_axis_order()
    if order != tuple(range(part.n_a)):
        sub = sub.transpose(order)
    return sub.ravel()


def marginalize(p: ProbVector | DepolarizedProbVector, part: Partition) -> np.ndarray:
    """Sum out subsystem B: returns the length-``dim_a`` marginal of A.

    Implemented as a strided reduction over a (2,)*n view; no full-size
    temporary is allocated.
    """
    _check_partition(p.n_qubits, part)
    view = p.probs.reshape((2,) * part.n_qubits)
    marg = view.sum(axis=part.b_bits)
    return _as_a_vector(np.asarray(marg), part)


@dataclass(frozen=True, eq=False)
class ConditionalSlice:
    """Conditional distribution of A given a fixed B outcome ``b_outcome``."""

    partition: Partition
    b_outcome: int
    cond_probs: np.ndarray
    weight: float = field(repr=False, default=0.0)

    def __post_init__(self):
        if self.cond_probs.shape != (self.partition.dim_a,):
            raise ValueError("cond_probs length must equal dim_a")
        total = float(np.sum(self.cond_probs))
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"conditional probabilities sum to {total!r}, not 1")


def _slice_branch(probs: np.ndarray, part: Partition, b: int) -> np.ndarray:
    """Extract the joint probabilities p(., b) as an A-indexed array."""
    if not 0 <= b < part.dim_b:
        raise ValueError(f"b={b} outside [0, {part.dim_b})")
    view = probs.reshape((2,) * part.n_qubits)
    indexer: list = [slice(None)] * part.n_qubits
    for i, q in enumerate(part.b_bits):
        indexer[q] = (b >> (part.n_b - 1 - i)) & 1
    return _as_a_vector(np.asarray(view[tuple(indexer)]), part)


def _conditional(probs, part, b) -> ConditionalSlice:
    branch = _slice_branch(probs, part, b)
    weight = float(np.sum(branch))
    if weight < WEIGHT_FLOOR:
        raise DegenerateSliceError(
            f"outcome b={b} has probability {weight!r}; cannot condition on it")
    return ConditionalSlice(partition=part, b_outcome=b,
                            cond_probs=branch / weight, weight=weight)


def conditional_slice(p: ProbVector, part: Partition, b: int) -> ConditionalSlice:
    """Condition on B = b: returns p(y|b) over A outcomes plus the weight p(b)."""
    _check_partition(p.n_qubits, part)
    return _conditional(p.probs, part, b)


def noisy_conditional_exact(p_noisy: DepolarizedProbVector, part: Partition,
                            b: int) -> ConditionalSlice:
    """Exact conditioning of a depolarized vector (no approximation)."""
    _check_partition(p_noisy.n_qubits, part)
    return _conditional(p_noisy.probs, part, b)


def noisy_conditional_affine(cond: ConditionalSlice | np.ndarray, lam: float) -> np.ndarray:
    """Approximate noisy conditional: ``(1-lam)*p(y|b) + lam/dim_a``.

    Replaces the branch weight by its typical value, so it is exact only in
    the limit where the B outcome carries no information; compare against
    :func:`noisy_conditional_exact` to measure the gap.
    """
    if not 0.0 <= lam < 1.0:
        raise ValueError(f"lam must lie in [0, 1), got {lam}")
    probs = cond.cond_probs if isinstance(cond, ConditionalSlice) else np.asarray(cond, float)
    return (1.0 - lam) * probs + lam / probs.shape[0]
