"""Bit-string sampling and linear cross-entropy benchmarking (XEB).

The full-system linear XEB correlates observed bit-strings with their ideal
probabilities: ``F = dim * mean(p_ideal(x_i)) - 1``.  The subsystem variant
projects each sample to its A-substring and scores it against the exact
marginal; the conditional variant post-selects samples whose B-substring
equals a fixed outcome and scores the A-substring against the exact
conditional slice, which for a random state is statistically a fresh
full-system problem at dimension ``dim_a``.

Reported ``std_error`` is the plug-in standard deviation of the per-shot
statistic divided by sqrt(shots); it quantifies shot noise only, not the
state-to-state spread of the estimator's expectation.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import InsufficientSamplesError
from .partitions import Partition, conditional_slice, marginalize
from .rng import RngSpec
from .states import DepolarizedProbVector, ProbVector


class XebKind(enum.Enum):
    FULL = "full"
    SUBSYSTEM = "subsystem"
    CONDITIONAL = "conditional"


@dataclass(frozen=True)
class SampleMeta:
    """Provenance carried with a sample multiset."""

    seed: RngSpec | None = None
    lambda_claim: float | None = None
    partition: Partition | None = None


@dataclass(frozen=True, eq=False)
class SampleSet:
    """Multiset of observed bit-strings, stored as index -> count."""

    n: int
    counts: dict[int, int]
    total: int
    meta: SampleMeta = field(default_factory=SampleMeta)

    def __post_init__(self):
        if self.total != sum(self.counts.values()):
            raise ValueError("total must equal the sum of counts")
        if any(c < 1 for c in self.counts.values()):
            raise ValueError("stored counts must be >= 1")
        dim = 2**self.n
        if any(not 0 <= k < dim for k in self.counts):
            raise ValueError(f"bit-string index out of range for n={self.n}")

    def keys_array(self) -> tuple[np.ndarray, np.ndarray]:
        """Counts as parallel (indices, counts) arrays, sorted by index."""
        keys = np.fromiter(self.counts.keys(), dtype=np.int64, count=len(self.counts))
        vals = np.fromiter(self.counts.values(), dtype=np.int64, count=len(self.counts))
        order = np.argsort(keys)
        return keys[order], vals[order]


@dataclass(frozen=True)
class XebResult:
    """Linear XEB fidelity estimate with its shot-noise standard error."""

    fidelity: float
    std_error: float
    kind: XebKind
    m_eff: int
    shots_used: int


def draw_samples(p: ProbVector | DepolarizedProbVector, shots: int,
                 rng: RngSpec) -> SampleSet:
    """Draw i.i.d. bit-strings from a probability vector.

    Inverse-CDF sampling: one cumulative array, one binary search per shot.
    """
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    cum = np.cumsum(p.probs)
    u = rng.generator().random(shots) * cum[-1]
    draws = np.searchsorted(cum, u, side="right")
    np.clip(draws, 0, p.dim - 1, out=draws)
    keys, counts = np.unique(draws, return_counts=True)
    lam_claim = p.lam if isinstance(p, DepolarizedProbVector) else None
    return SampleSet(n=p.n_qubits, counts=dict(zip(keys.tolist(), counts.tolist())),
                     total=shots, meta=SampleMeta(seed=rng, lambda_claim=lam_claim))


def shot_statistics(values: np.ndarray, counts: np.ndarray) -> tuple[float, float, int]:
    """Count-weighted (mean, variance, total) of a per-shot statistic."""
    total = int(counts.sum())
    mean = float(np.dot(counts, values)) / total
    var = float(np.dot(counts, (values - mean) ** 2)) / total
    return mean, var, total


def _result(mean, var, total, dim_eff, kind) -> XebResult:
    return XebResult(fidelity=dim_eff * mean - 1.0,
                     std_error=dim_eff * float(np.sqrt(var / total)),
                     kind=kind, m_eff=int(np.log2(dim_eff)), shots_used=total)


def xeb_full(samples: SampleSet, ideal: ProbVector) -> XebResult:
    """Full-system linear XEB of samples against an ideal vector."""
    if samples.n != ideal.n_qubits:
        raise ValueError(f"samples are over {samples.n} qubits, ideal over {ideal.n_qubits}")
    keys, counts = samples.keys_array()
    mean, var, total = shot_statistics(ideal.probs[keys], counts)
    return _result(mean, var, total, ideal.dim, XebKind.FULL)


def xeb_subsystem(samples: SampleSet, ideal: ProbVector, part: Partition) -> XebResult:
    """Subsystem XEB: project samples to A and score against the exact marginal."""
    if samples.n != ideal.n_qubits or part.n_qubits != ideal.n_qubits:
        raise ValueError("samples, ideal, and partition must agree on qubit count")
    marginal = marginalize(ideal, part)
    keys, counts = samples.keys_array()
    mean, var, total = shot_statistics(marginal[part.project_a(keys)], counts)
    return _result(mean, var, total, part.dim_a, XebKind.SUBSYSTEM)


def xeb_conditional(samples: SampleSet, ideal: ProbVector, part: Partition,
                    b: int, min_samples: int = 10) -> XebResult:
    """Conditional XEB over samples whose B-substring equals ``b``."""
    if samples.n != ideal.n_qubits or part.n_qubits != ideal.n_qubits:
        raise ValueError("samples, ideal, and partition must agree on qubit count")
    cond = conditional_slice(ideal, part, b)
    keys, counts = samples.keys_array()
    selected = part.project_b(keys) == b
    n_selected = int(counts[selected].sum())
    if n_selected < min_samples:
        raise InsufficientSamplesError(
            f"only {n_selected} of {samples.total} samples have B-outcome {b}; "
            f"need at least {min_samples}", n_selected, samples.total)
    y = part.project_a(keys[selected])
    mean, var, total = shot_statistics(cond.cond_probs[y], counts[selected])
    return _result(mean, var, total, part.dim_a, XebKind.CONDITIONAL)


def conditional_yields(samples: SampleSet, part: Partition) -> dict[int, int]:
    """Post-selection yield for every B outcome; values sum to ``samples.total``."""
    keys, counts = samples.keys_array()
    z = part.project_b(keys)
    yields = {b: 0 for b in range(part.dim_b)}
    for outcome, count in zip(z.tolist(), counts.tolist()):
        yields[outcome] += count
    return yields


def xeb_conditional_all(samples: SampleSet, ideal: ProbVector, part: Partition,
                        min_samples: int = 10):
    """Conditional XEB for every B outcome plus the yield-weighted fidelity.

    Returns ``(per_b, weighted_fidelity, skipped)`` where ``per_b`` maps each
    B outcome with sufficient yield to its XebResult and ``skipped`` maps the
    rest to their yields.
    """
    yields = conditional_yields(samples, part)
    per_b: dict[int, XebResult] = {}
    skipped: dict[int, int] = {}
    for b, n_b in yields.items():
        if n_b >= min_samples:
            per_b[b] = xeb_conditional(samples, ideal, part, b, min_samples)
        else:
            skipped[b] = n_b
    used = sum(r.shots_used for r in per_b.values())
    weighted = sum(r.shots_used * r.fidelity for r in per_b.values()) / used if used else float("nan")
    return per_b, weighted, skipped
