"""Haar-random states, their probability vectors, and depolarizing noise.

A Haar-random pure state on ``n`` qubits has amplitudes ``c_i = z_i / ||z||``
with ``z_i`` independent standard complex normals, so each ``|z_i|^2`` is a
unit-mean exponential and the bit-string probability vector
``p_i = |c_i|^2`` is uniform on the probability simplex (flat Dirichlet).
``sample_flat_dirichlet`` draws the same law directly from exponential
variates without storing amplitudes, which is the memory-light oracle path
used throughout the tests.

Global depolarizing noise with strength ``lam`` acts on probability vectors
as the exact affine map ``(1 - lam) * p + lam / N``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CapacityError
from .rng import RngSpec

# 2^24 complex doubles is ~256 MB; anything larger is no longer desk-scale.
HAAR_N_QUBITS_MAX = 24
# The Dirichlet path needs a single real array, so it can go further.
DIRICHLET_DIM_MAX = 2**28

NORM_ATOL = 1e-12


def _check_prob_vector(probs: np.ndarray, n_qubits: int) -> None:
    if probs.ndim != 1 or probs.shape[0] != 2**n_qubits:
        raise ValueError(f"expected 2**{n_qubits} probabilities, got shape {probs.shape}")
    if np.min(probs) < 0.0:
        raise ValueError("probabilities must be nonnegative")
    total = float(np.sum(probs))
    if abs(total - 1.0) > NORM_ATOL:
        raise ValueError(f"probabilities sum to {total!r}, not 1 within {NORM_ATOL}")


@dataclass(frozen=True, eq=False)
class StateVector:
    """Pure n-qubit state as a dense array of 2^n complex amplitudes."""

    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = self.amplitudes
        if amps.ndim != 1 or amps.shape[0] != 2**self.n_qubits:
            raise ValueError(f"expected 2**{self.n_qubits} amplitudes, got shape {amps.shape}")
        norm_sq = float(np.sum(np.abs(amps) ** 2))
        if abs(norm_sq - 1.0) > NORM_ATOL:
            raise ValueError(f"state norm^2 is {norm_sq!r}, not 1 within {NORM_ATOL}")

    @property
    def dim(self) -> int:
        return 2**self.n_qubits


@dataclass(frozen=True, eq=False)
class ProbVector:
    """Normalized bit-string probability vector of an n-qubit system."""

    n_qubits: int
    probs: np.ndarray

    def __post_init__(self):
        _check_prob_vector(self.probs, self.n_qubits)

    @property
    def dim(self) -> int:
        return 2**self.n_qubits


@dataclass(frozen=True, eq=False)
class DepolarizedProbVector:
    """Probability vector after global depolarization of strength ``lam``.

    ``probs`` holds ``(1 - lam) * base.probs + lam / N`` computed
    componentwise, so ``min(probs) >= lam / N`` holds exactly in floating
    point (a nonnegative term is added to the representable floor).
    """

    base: ProbVector
    lam: float
    probs: np.ndarray

    def __post_init__(self):
        if not 0.0 <= self.lam <= 1.0:
            raise ValueError(f"lam must lie in [0, 1], got {self.lam}")
        _check_prob_vector(self.probs, self.base.n_qubits)
        floor = self.lam / self.base.dim
        if float(np.min(self.probs)) < floor:
            raise ValueError("depolarized vector violates the lam/N floor")

    @property
    def n_qubits(self) -> int:
        return self.base.n_qubits

    @property
    def dim(self) -> int:
        return self.base.dim


def sample_haar_state(n: int, rng: RngSpec, n_max: int = HAAR_N_QUBITS_MAX) -> StateVector:
    """Draw a Haar-random pure state on ``n`` qubits.

    Real and imaginary parts are sampled as N(0, 1/2) so each un-normalized
    intensity ``|z_i|^2`` is Exp(1); normalizing by the total intensity makes
    the probability vector flat-Dirichlet.
    """
    if not 1 <= n <= n_max:
        raise CapacityError(f"n={n} outside supported range [1, {n_max}]")
    gen = rng.generator()
    dim = 2**n
    z = gen.standard_normal(dim) + 1j * gen.standard_normal(dim)
    z *= np.sqrt(0.5)
    z /= np.linalg.norm(z)
    return StateVector(n_qubits=n, amplitudes=z)


def probabilities(state: StateVector) -> ProbVector:
    """Bit-string probabilities ``p_i = |c_i|^2`` of a pure state."""
    return ProbVector(n_qubits=state.n_qubits, probs=np.abs(state.amplitudes) ** 2)


def sample_flat_dirichlet(dim: int, rng: RngSpec) -> ProbVector:
    """Draw a uniform point on the probability simplex of size ``dim``.

    Statistically identical to ``probabilities(sample_haar_state(n))`` for
    ``dim = 2**n``, but needs only one real array: normalized i.i.d.
    unit exponentials (Gamma(1,1) variates).
    """
    if dim < 2 or dim & (dim - 1):
        raise ValueError(f"dim must be a power of two >= 2, got {dim}")
    if dim > DIRICHLET_DIM_MAX:
        raise CapacityError(f"dim={dim} exceeds limit {DIRICHLET_DIM_MAX}")
    gen = rng.generator()
    x = gen.standard_exponential(dim)
    x /= np.sum(x)
    return ProbVector(n_qubits=dim.bit_length() - 1, probs=x)


def depolarize(p: ProbVector, lam: float) -> DepolarizedProbVector:
    """Apply global depolarizing noise: ``(1 - lam) * p + lam / N``."""
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lam must lie in [0, 1], got {lam}")
    mixed = (1.0 - lam) * p.probs + lam / p.dim
    return DepolarizedProbVector(base=p, lam=lam, probs=mixed)
