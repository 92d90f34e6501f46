"""Tests for marginalization, conditioning, and noisy-conditional transforms."""
import numpy as np
import pytest

from haarstats import (AnalyticLaw, DegenerateSliceError, Partition, ProbVector,
                       RngSpec, conditional_slice, depolarize, ks_one_sample,
                       ks_two_sample, marginalize, noisy_conditional_affine,
                       noisy_conditional_exact, probabilities,
                       sample_flat_dirichlet, sample_haar_state)
from haarstats.experiments import (conditional_ensemble,
                                   pooled_conditional_scaled,
                                   pooled_subsystem_scaled)

P4 = ProbVector(2, np.array([0.1, 0.2, 0.3, 0.4]))


def test_partition_derived_quantities():
    part = Partition(5, (0, 2, 4))
    assert part.n_a == 3 and part.n_b == 2
    assert part.dim_a == 8 and part.dim_b == 4
    assert part.b_bits == (1, 3)
    lead = Partition.leading(5, 3)
    assert lead.a_bits == (0, 1, 2) and lead.b_bits == (3, 4)


def test_partition_validation():
    with pytest.raises(ValueError):
        Partition(4, ())
    with pytest.raises(ValueError):
        Partition(4, (0, 0))
    with pytest.raises(ValueError):
        Partition(4, (0, 4))


def test_marginalize_uniform_any_partition():
    p = ProbVector(4, np.full(16, 1 / 16))
    for a_bits in [(0,), (3,), (1, 2), (0, 1, 2, 3), (2, 0)]:
        marg = marginalize(p, Partition(4, a_bits))
        assert np.allclose(marg, 1 / len(marg), atol=1e-15)


def test_marginalize_two_qubit_arithmetic():
    # index is (y z) with z the trailing bit; A = high bit
    marg = marginalize(P4, Partition.leading(2, 1))
    np.testing.assert_allclose(marg, [0.3, 0.7], atol=1e-15)
    # A = low bit instead
    marg = marginalize(P4, Partition(2, (1,)))
    np.testing.assert_allclose(marg, [0.4, 0.6], atol=1e-15)


def test_marginalize_matches_bruteforce_on_scrambled_partition():
    gen = RngSpec(5).generator()
    probs = gen.dirichlet(np.ones(32))
    p = ProbVector(5, probs)
    part = Partition(5, (3, 0))
    marg = marginalize(p, part)
    brute = np.zeros(4)
    for j in range(32):
        bit3 = (j >> (5 - 1 - 3)) & 1
        bit0 = (j >> (5 - 1 - 0)) & 1
        brute[(bit3 << 1) | bit0] += probs[j]
    np.testing.assert_allclose(marg, brute, atol=1e-15)
    assert abs(marg.sum() - 1.0) < 1e-12


def test_projection_consistent_with_marginalize():
    part = Partition(6, (1, 4, 5))
    idx = np.arange(64)
    y = part.project_a(idx)
    z = part.project_b(idx)
    assert y.min() == 0 and y.max() == part.dim_a - 1
    assert z.min() == 0 and z.max() == part.dim_b - 1
    gen = RngSpec(6).generator()
    probs = gen.dirichlet(np.ones(64))
    marg = marginalize(ProbVector(6, probs), part)
    np.testing.assert_allclose(marg, np.bincount(y, weights=probs, minlength=8), atol=1e-15)
    # every (y, z) pair is hit exactly once
    assert len({(a, b) for a, b in zip(y, z)}) == 64


def test_conditional_two_qubit_arithmetic():
    s = conditional_slice(P4, Partition.leading(2, 1), 0)
    np.testing.assert_allclose(s.cond_probs, [0.25, 0.75], atol=1e-15)
    assert s.weight == pytest.approx(0.4, abs=1e-15)


def test_conditional_uniform():
    p = ProbVector(3, np.full(8, 1 / 8))
    part = Partition.leading(3, 1)
    s = conditional_slice(p, part, 2)
    assert np.allclose(s.cond_probs, 0.5, atol=1e-15)
    assert s.weight == pytest.approx(1 / 4, abs=1e-15)


def test_conditional_on_zero_mass_outcome():
    p = ProbVector(2, np.array([0.5, 0.5, 0.0, 0.0]))
    with pytest.raises(DegenerateSliceError):
        conditional_slice(p, Partition.leading(2, 1), 1)


def test_conditional_out_of_range_and_mismatch():
    with pytest.raises(ValueError):
        conditional_slice(P4, Partition.leading(2, 1), 2)
    with pytest.raises(ValueError):
        marginalize(P4, Partition.leading(3, 1))


def test_conditioning_then_mixing_recovers_marginal():
    # sum_b p(b) p(y|b) = p_A(y)
    p = probabilities(sample_haar_state(8, RngSpec(12)))
    part = Partition(8, (0, 2, 5))
    marg = marginalize(p, part)
    mix = np.zeros(part.dim_a)
    total_weight = 0.0
    for b in range(part.dim_b):
        s = conditional_slice(p, part, b)
        mix += s.weight * s.cond_probs
        total_weight += s.weight
    np.testing.assert_allclose(mix, marg, atol=1e-12)
    assert total_weight == pytest.approx(1.0, abs=1e-12)


def test_aggregation_oracle_small():
    # marginal pool vs direct Dirichlet(dim_b * ones) pool built from
    # Gamma(dim_b, 1) variates
    rng = RngSpec(81)
    part = Partition.leading(12, 4)
    pool = pooled_subsystem_scaled(12, part, 1250, rng)
    gen = RngSpec(82).generator()
    gammas = gen.gamma(part.dim_b, size=(1250, part.dim_a))
    direct = part.dim_a * gammas / gammas.sum(axis=1, keepdims=True)
    report = ks_two_sample(pool, direct.ravel())
    assert report.passed, f"D={report.ks_statistic} >= {report.ks_critical_1pct}"


def test_conditional_self_similarity_small():
    # conditioned slice components follow the full-system law at dim_a
    rng = RngSpec(83)
    part = Partition.leading(12, 6)
    pool = pooled_conditional_scaled(12, part, 0, 320, rng)
    report = ks_one_sample(pool, AnalyticLaw.conditional_beta(part.dim_a))
    assert report.passed, f"D={report.ks_statistic} >= {report.ks_critical_1pct}"


def test_noisy_conditional_exact_limits():
    p = probabilities(sample_haar_state(8, RngSpec(9)))
    part = Partition.leading(8, 5)
    ideal = conditional_slice(p, part, 3)
    lam0 = noisy_conditional_exact(depolarize(p, 0.0), part, 3)
    np.testing.assert_allclose(lam0.cond_probs, ideal.cond_probs, atol=1e-15)
    assert lam0.weight == pytest.approx(ideal.weight, abs=1e-15)
    lam1 = noisy_conditional_exact(depolarize(p, 1.0), part, 3)
    assert np.allclose(lam1.cond_probs, 1 / part.dim_a, atol=1e-12)


def test_noisy_conditional_matches_shifted_law():
    # exact noisy conditioning vs the affine-approximation law; the spec's
    # tolerance is loose because the law itself is approximate
    rng = RngSpec(84)
    part = Partition.leading(12, 6)
    pool = pooled_conditional_scaled(12, part, 0, 320, rng, lam=0.3)
    report = ks_one_sample(pool, AnalyticLaw.conditional_beta(part.dim_a, lam=0.3))
    assert report.ks_statistic < 0.02


def test_noisy_conditional_affine_forms():
    p = probabilities(sample_haar_state(8, RngSpec(10)))
    part = Partition.leading(8, 4)
    s = conditional_slice(p, part, 1)
    assert np.array_equal(noisy_conditional_affine(s, 0.0), s.cond_probs)
    uniform = np.full(16, 1 / 16)
    np.testing.assert_allclose(noisy_conditional_affine(uniform, 0.4), uniform, atol=1e-15)
    mapped = noisy_conditional_affine(s, 0.3)
    np.testing.assert_allclose(mapped, 0.7 * s.cond_probs + 0.3 / 16, atol=1e-15)
    with pytest.raises(ValueError):
        noisy_conditional_affine(s, 1.0)


def test_exact_vs_affine_gap_reported():
    # no error bound exists; just report the measured mean absolute gap
    from haarstats import conditional_affine_gap
    gap = conditional_affine_gap(12, Partition.leading(12, 6), 0, 16, RngSpec(85), 0.3)
    assert np.isfinite(gap) and gap >= 0.0
    print(f"mean |exact - affine| conditional gap (n=12, m=6, lam=0.3): {gap:.3e}")


def test_lukacs_independence_small():
    # branch weight and conditional components are uncorrelated
    weights, cond = conditional_ensemble(10, Partition.leading(10, 5), 0, 2000, RngSpec(86))
    w = weights - weights.mean()
    c = cond - cond.mean(axis=0)
    corr = (w @ c) / (np.sqrt((w**2).sum()) * np.sqrt((c**2).sum(axis=0)))
    assert np.abs(corr).max() < 4 / np.sqrt(2000) * 1.5


def test_dirichlet_vector_conditional_matches_direct_dirichlet():
    # slicing a flat Dirichlet and renormalizing gives a flat Dirichlet
    rng = RngSpec(87)
    part = Partition.leading(10, 5)
    pool = np.concatenate([
        conditional_slice(sample_flat_dirichlet(1024, rng.substream(t)), part, 5).cond_probs
        for t in range(400)
    ])
    direct = np.concatenate([
        sample_flat_dirichlet(32, rng.substream(1000 + t)).probs for t in range(400)
    ])
    report = ks_two_sample(pool, direct)
    assert report.passed
