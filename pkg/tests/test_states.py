"""Tests for Haar-state generation, Dirichlet draws, and depolarization."""
import numpy as np
import pytest

from haarstats import (CapacityError, ProbVector, RngSpec, depolarize,
                       probabilities, sample_flat_dirichlet, sample_haar_state)


def test_single_qubit_normalized():
    state = sample_haar_state(1, RngSpec(11))
    assert abs(np.sum(np.abs(state.amplitudes) ** 2) - 1.0) < 1e-12


def test_haar_state_deterministic():
    a = sample_haar_state(12, RngSpec(99, 3))
    b = sample_haar_state(12, RngSpec(99, 3))
    assert np.array_equal(a.amplitudes, b.amplitudes)


def test_distinct_streams_differ():
    a = sample_haar_state(6, RngSpec(99, 0))
    b = sample_haar_state(6, RngSpec(99, 1))
    assert not np.array_equal(a.amplitudes, b.amplitudes)


def test_haar_capacity_errors():
    with pytest.raises(CapacityError):
        sample_haar_state(0, RngSpec(1))
    with pytest.raises(CapacityError):
        sample_haar_state(25, RngSpec(1))
    # the ceiling is configurable
    with pytest.raises(CapacityError):
        sample_haar_state(5, RngSpec(1), n_max=4)
    sample_haar_state(5, RngSpec(1), n_max=5)


def test_scaled_component_mean_is_one():
    # flat-Dirichlet components have mean 1/N, so N*p averages to 1
    rng = RngSpec(2024)
    dim = 2**12
    pooled = np.concatenate([
        probabilities(sample_haar_state(12, rng.substream(t))).probs
        for t in range(25)
    ])
    assert pooled.size > 100_000
    assert abs(dim * pooled.mean() - 1.0) < 0.01


def test_probabilities_uniform_and_basis_states():
    from haarstats import StateVector
    dim = 16
    uniform = probabilities(StateVector(4, np.full(dim, dim**-0.5, complex)))
    assert np.allclose(uniform.probs, 1 / dim, atol=1e-15)
    basis = np.zeros(dim, complex)
    basis[0] = 1.0
    p = probabilities(StateVector(4, basis))
    assert p.probs[0] == 1.0 and np.all(p.probs[1:] == 0.0)


def test_probabilities_sum_to_one():
    p = probabilities(sample_haar_state(10, RngSpec(5)))
    assert abs(np.sum(p.probs) - 1.0) < 1e-12


def test_flat_dirichlet_normalization_and_validation():
    p = sample_flat_dirichlet(2**16, RngSpec(7))
    assert abs(np.sum(p.probs) - 1.0) < 1e-12
    assert p.n_qubits == 16
    with pytest.raises(ValueError):
        sample_flat_dirichlet(3, RngSpec(7))
    with pytest.raises(CapacityError):
        sample_flat_dirichlet(2**29, RngSpec(7))


def test_flat_dirichlet_two_component_marginal_is_uniform():
    # Beta(1,1) marginal: mean 1/2
    rng = RngSpec(3)
    first = np.array([sample_flat_dirichlet(2, rng.substream(i)).probs[0]
                      for i in range(100_000)])
    assert abs(first.mean() - 0.5) < 0.01


def test_haar_and_dirichlet_components_agree():
    # the two construction paths sample the same simplex law
    from haarstats import ks_two_sample
    rng = RngSpec(31)
    dim = 2**12
    haar = np.concatenate([
        probabilities(sample_haar_state(12, rng.substream(t))).probs
        for t in range(25)
    ])
    direct = np.concatenate([
        sample_flat_dirichlet(dim, rng.substream(100 + t)).probs
        for t in range(25)
    ])
    report = ks_two_sample(haar, direct)
    assert report.passed, f"KS D={report.ks_statistic} >= {report.ks_critical_1pct}"


@pytest.mark.parametrize("lam", [0.0, 0.3, 0.52, 1.0])
def test_depolarize_floor_exact(lam):
    p = probabilities(sample_haar_state(8, RngSpec(17)))
    noisy = depolarize(p, lam)
    assert noisy.probs.min() >= lam / p.dim
    assert abs(np.sum(noisy.probs) - 1.0) < 1e-12


def test_depolarize_identity_and_fully_mixed():
    p = probabilities(sample_haar_state(6, RngSpec(23)))
    assert np.array_equal(depolarize(p, 0.0).probs, p.probs)
    assert np.allclose(depolarize(p, 1.0).probs, 1 / p.dim, atol=1e-18)


def test_depolarize_arithmetic_example():
    p = ProbVector(2, np.array([1.0, 0.0, 0.0, 0.0]))
    noisy = depolarize(p, 0.5)
    assert np.allclose(noisy.probs, [0.625, 0.125, 0.125, 0.125], atol=1e-15)


def test_depolarize_rejects_bad_lambda():
    p = ProbVector(1, np.array([0.5, 0.5]))
    for lam in (-0.1, 1.5):
        with pytest.raises(ValueError):
            depolarize(p, lam)


def test_prob_vector_validation():
    with pytest.raises(ValueError):
        ProbVector(2, np.array([0.5, 0.5, 0.5, 0.5]))
    with pytest.raises(ValueError):
        ProbVector(2, np.array([1.5, -0.5, 0.0, 0.0]))
