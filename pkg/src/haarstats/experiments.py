"""Monte Carlo experiment drivers connecting simulation, laws, and tests.

Trials are independent: trial ``t`` of an experiment seeded with master
seed ``s`` uses the substreams ``RngSpec(s, 2*t)`` (state) and
``RngSpec(s, 2*t + 1)`` (shots), so any execution order, or a parallel
schedule, reproduces the same pooled results.

Scaled values are computed floor-exactly: the ideal scaled variable is
multiplied by a power-of-two dimension (exact in floating point) and noise
is applied as ``(1-lam)*x + lam``, so every depolarized value is ``>= lam``
and every subsystem value stays within ``[lam, (1-lam)*dim_a + lam]``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .laws import AnalyticLaw
from .partitions import (Partition, conditional_slice, marginalize,
                         noisy_conditional_affine, noisy_conditional_exact)
from .rng import RngSpec
from .states import depolarize, probabilities, sample_haar_state
from .stats import (default_hist_range, estimate_gap, estimate_lambda_mean,
                    histogram, ks_one_sample)
from .xeb import XebKind, XebResult, draw_samples

ANALYSES = ("full", "subsystem", "conditional", "xeb", "gap")


def _trial_states(n: int, trials: int, rng: RngSpec):
    for t in range(trials):
        yield t, probabilities(sample_haar_state(n, rng.substream(2 * t)))


def _noisy_scale(x: np.ndarray, lam: float) -> np.ndarray:
    return (1.0 - lam) * x + lam if lam else x


def pooled_full_scaled(n: int, trials: int, rng: RngSpec, lam: float = 0.0) -> np.ndarray:
    """Pool scaled full-system probabilities ``dim * p`` over Haar trials."""
    dim = 2**n
    out = np.empty(trials * dim)
    for t, p in _trial_states(n, trials, rng):
        out[t * dim:(t + 1) * dim] = _noisy_scale(dim * p.probs, lam)
    return out


def pooled_subsystem_scaled(n: int, part: Partition, trials: int, rng: RngSpec,
                            lam: float = 0.0) -> np.ndarray:
    """Pool scaled subsystem marginals ``dim_a * p_A`` over Haar trials."""
    dim_a = part.dim_a
    out = np.empty(trials * dim_a)
    for t, p in _trial_states(n, trials, rng):
        out[t * dim_a:(t + 1) * dim_a] = _noisy_scale(dim_a * marginalize(p, part), lam)
    return out


def conditional_ensemble(n: int, part: Partition, b: int, trials: int, rng: RngSpec,
                         lam: float = 0.0) -> tuple[np.ndarray, np.ndarray]:
    """Per-trial branch weights and conditional distributions given B = b.

    Returns ``(weights, cond)`` with shapes (trials,) and (trials, dim_a).
    For ``lam > 0`` the conditioning is exact (no typicality approximation).
    """
    weights = np.empty(trials)
    cond = np.empty((trials, part.dim_a))
    for t, p in _trial_states(n, trials, rng):
        if lam:
            s = noisy_conditional_exact(depolarize(p, lam), part, b)
        else:
            s = conditional_slice(p, part, b)
        weights[t] = s.weight
        cond[t] = s.cond_probs
    return weights, cond


def pooled_conditional_scaled(n: int, part: Partition, b: int, trials: int,
                              rng: RngSpec, lam: float = 0.0) -> np.ndarray:
    """Pool scaled conditional probabilities ``dim_a * p(y|b)`` over trials."""
    _, cond = conditional_ensemble(n, part, b, trials, rng, lam)
    return (part.dim_a * cond).ravel()


def conditional_affine_gap(n: int, part: Partition, b: int, trials: int,
                           rng: RngSpec, lam: float) -> float:
    """Mean absolute gap between exact noisy conditioning and its affine form.

    The affine form replaces the branch weight by its typical value; the gap
    shrinks as the complement grows.  Reported, never asserted.
    """
    total = 0.0
    for t, p in _trial_states(n, trials, rng):
        exact = noisy_conditional_exact(depolarize(p, lam), part, b).cond_probs
        approx = noisy_conditional_affine(conditional_slice(p, part, b), lam)
        total += float(np.abs(exact - approx).mean())
    return total / trials


class _ShotPool:
    """Accumulates count-weighted per-shot statistics across trials."""

    def __init__(self, dim_eff: int, kind: XebKind):
        self.dim_eff = dim_eff
        self.kind = kind
        self.sum = 0.0
        self.sumsq = 0.0
        self.count = 0

    def add(self, values: np.ndarray, counts: np.ndarray) -> None:
        self.sum += float(np.dot(counts, values))
        self.sumsq += float(np.dot(counts, values**2))
        self.count += int(counts.sum())

    def result(self) -> XebResult:
        mean = self.sum / self.count
        var = max(self.sumsq / self.count - mean**2, 0.0)
        return XebResult(fidelity=self.dim_eff * mean - 1.0,
                         std_error=self.dim_eff * math.sqrt(var / self.count),
                         kind=self.kind, m_eff=int(math.log2(self.dim_eff)),
                         shots_used=self.count)


def xeb_ensemble(n: int, trials: int, shots: int, rng: RngSpec, lam: float = 0.0,
                 part: Partition | None = None, b: int | None = None,
                 min_samples: int = 10) -> dict[str, XebResult]:
    """Ensemble-averaged XEB: fresh Haar state per trial, ``shots`` draws each.

    Samples are drawn from the state depolarized by ``lam`` (``lam = 1`` is
    the uniform sampler baseline) and always scored against the ideal state.
    Returns the full-system result, plus the subsystem result when ``part``
    is given and the pooled post-selected conditional result when ``b`` is
    also given.
    """
    dim = 2**n
    pools = {"full": _ShotPool(dim, XebKind.FULL)}
    if part is not None:
        pools["subsystem"] = _ShotPool(part.dim_a, XebKind.SUBSYSTEM)
        if b is not None:
            pools["conditional"] = _ShotPool(part.dim_a, XebKind.CONDITIONAL)
    for t, p in _trial_states(n, trials, rng):
        sampler = depolarize(p, lam) if lam else p
        samples = draw_samples(sampler, shots, rng.substream(2 * t + 1))
        keys, counts = samples.keys_array()
        pools["full"].add(p.probs[keys], counts)
        if part is not None:
            marginal = marginalize(p, part)
            y = part.project_a(keys)
            pools["subsystem"].add(marginal[y], counts)
            if b is not None:
                selected = part.project_b(keys) == b
                if np.any(selected):
                    cond = conditional_slice(p, part, b)
                    pools["conditional"].add(cond.cond_probs[y[selected]],
                                             counts[selected])
    if "conditional" in pools and pools["conditional"].count < min_samples:
        raise ValueError(f"only {pools['conditional'].count} post-selected shots "
                         f"for b={b}; need at least {min_samples}")
    return {name: pool.result() for name, pool in pools.items()}


# ----------------------------------------------------------------------
# experiment configuration and orchestration


@dataclass
class ExperimentConfig:
    """One reproducible experiment: what to simulate and how to analyze it."""

    n: int = 12
    partition_a_bits: tuple[int, ...] | None = None
    lam: float = 0.0
    trials: int = 100
    shots: int = 100_000
    seed: int = 1
    analysis: str = "full"
    condition_b: int | None = None
    bins: int = 50
    out_dir: str = "."

    def __post_init__(self):
        if self.analysis not in ANALYSES:
            raise ValueError(f"analysis must be one of {ANALYSES}, got {self.analysis!r}")
        if not 0.0 <= self.lam <= 1.0:
            raise ValueError(f"lambda must lie in [0, 1], got {self.lam}")
        if self.trials < 1 or self.shots < 1 or self.bins < 1:
            raise ValueError("trials, shots, and bins must all be >= 1")
        if self.partition_a_bits is not None:
            self.partition_a_bits = tuple(int(q) for q in self.partition_a_bits)
            Partition(self.n, self.partition_a_bits)  # validates positions
        if self.condition_b is not None and self.partition_a_bits is None:
            raise ValueError("condition_b requires partition_a_bits")

    @property
    def partition(self) -> Partition | None:
        if self.partition_a_bits is None:
            return None
        return Partition(self.n, self.partition_a_bits)

    @property
    def rng(self) -> RngSpec:
        return RngSpec(self.seed)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "partition_a_bits": list(self.partition_a_bits) if self.partition_a_bits else None,
            "lambda": self.lam,
            "trials": self.trials,
            "shots": self.shots,
            "seed": self.seed,
            "analysis": self.analysis,
            "condition_b": self.condition_b,
            "bins": self.bins,
        }

    @classmethod
    def from_dict(cls, doc: dict, out_dir: str = ".") -> "ExperimentConfig":
        known = {"n", "partition_a_bits", "lambda", "trials", "shots", "seed",
                 "analysis", "condition_b", "bins"}
        unknown = set(doc) - known
        if unknown:
            raise ValueError(f"unknown config fields: {sorted(unknown)}")
        kwargs = {k: v for k, v in doc.items() if k != "lambda"}
        if "lambda" in doc:
            kwargs["lam"] = doc["lambda"]
        if kwargs.get("partition_a_bits") is not None:
            kwargs["partition_a_bits"] = tuple(kwargs["partition_a_bits"])
        return cls(out_dir=out_dir, **kwargs)


def _law_for(cfg: ExperimentConfig) -> AnalyticLaw:
    dim = 2**cfg.n
    if cfg.analysis in ("full", "gap"):
        return AnalyticLaw.full_beta(dim, lam=cfg.lam)
    part = cfg.partition
    if cfg.analysis == "subsystem":
        return AnalyticLaw.subsystem_beta(dim, part.dim_b, lam=cfg.lam)
    return AnalyticLaw.conditional_beta(part.dim_a, lam=cfg.lam)


def _gof_dict(report) -> dict:
    return {"ks_statistic": report.ks_statistic,
            "ks_critical_1pct": report.ks_critical_1pct,
            "n_samples": report.n_samples,
            "passed": report.passed,
            "sup_location": report.sup_location}


def _xeb_dict(result: XebResult) -> dict:
    return {"fidelity": result.fidelity, "std_error": result.std_error,
            "kind": result.kind.value, "m_eff": result.m_eff,
            "shots_used": result.shots_used}


def run_experiment(cfg: ExperimentConfig) -> dict:
    """Run one configured experiment; write artifacts; return the summary.

    The summary (also written to ``out_dir/summary.json``) is a plain dict
    with a stable schema; reruns with an identical config are byte-identical.
    ``summary["passed"]`` is False iff an asserted invariant failed.
    """
    from . import io  # deferred: io imports stats/xeb only

    out_dir = Path(cfg.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rng = cfg.rng
    part = cfg.partition
    results: dict = {}
    passed = True

    if cfg.analysis == "xeb":
        xeb_results = xeb_ensemble(cfg.n, cfg.trials, cfg.shots, rng, lam=cfg.lam,
                                   part=part, b=cfg.condition_b)
        results["xeb"] = {name: _xeb_dict(r) for name, r in xeb_results.items()}
    else:
        if cfg.lam >= 1.0:
            raise ValueError("analysis of densities requires lambda < 1 "
                             "(lambda = 1 is a point mass)")
        if cfg.analysis in ("full", "gap"):
            values = pooled_full_scaled(cfg.n, cfg.trials, rng, cfg.lam)
            shape = (2**cfg.n, 2**cfg.n, 1)
        elif cfg.analysis == "subsystem":
            values = pooled_subsystem_scaled(cfg.n, part, cfg.trials, rng, cfg.lam)
            shape = (2**cfg.n, part.dim_a, part.dim_b)
        else:  # conditional
            values = pooled_conditional_scaled(cfg.n, part, cfg.condition_b,
                                               cfg.trials, rng, cfg.lam)
            shape = (part.dim_a, part.dim_a, 1)

        law = _law_for(cfg)
        lo, hi = law.support()
        support_ok = bool(values.min() >= lo and (not math.isfinite(hi) or values.max() <= hi))
        report = ks_one_sample(values, law)
        # the conditional law under noise is the affine approximation, so its
        # KS distance is reported but not allowed to fail the run
        ks_asserted = not (cfg.analysis == "conditional" and cfg.lam > 0)
        passed = support_ok and (report.passed or not ks_asserted)

        hist = histogram(values, cfg.bins, default_hist_range(cfg.lam))
        hist_name = f"histogram_{cfg.analysis}.csv"
        io.write_histogram_csv(hist, out_dir / hist_name)

        results["ks"] = _gof_dict(report)
        results["ks_asserted"] = ks_asserted
        results["law_family"] = law.family.value
        results["support"] = {"lo": lo, "hi": hi if math.isfinite(hi) else None,
                              "ok": support_ok}
        results["gap_estimate"] = estimate_gap(values)
        results["lambda_mean_estimate"] = (
            estimate_lambda_mean(values, shape) if values.size >= 100 else None)
        results["histogram_csv"] = hist_name
        results["n_pooled"] = int(values.size)
        if cfg.analysis == "conditional" and cfg.lam > 0:
            results["affine_gap_mean_abs"] = conditional_affine_gap(
                cfg.n, part, cfg.condition_b, min(cfg.trials, 32), rng, cfg.lam)

    summary = {
        "schema_version": 1,
        "analysis": cfg.analysis,
        "config": cfg.to_dict(),
        "results": results,
        "passed": bool(passed),
    }
    io.write_summary(summary, out_dir / "summary.json")
    return summary


def analyze_sample_set(samples, a_bits=None, condition_b=None, bins: int = 50,
                       out_dir: str = ".", lambda_claim: float | None = None) -> dict:
    """Empirical distribution analysis of an ingested sample multiset.

    Bit-string probabilities are estimated as relative frequencies, then
    marginalized or conditioned exactly like simulated vectors.  The KS
    report compares against the analytic law at the claimed noise strength
    but is never asserted: count estimates are quantized at 1/total, so the
    fit quality is for the caller to judge.
    """
    from . import io  # deferred: io imports stats/xeb only

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    p_hat = io.empirical_prob_vector(samples)
    dim = p_hat.dim
    lam = lambda_claim if lambda_claim is not None else (samples.meta.lambda_claim or 0.0)
    if not 0.0 <= lam < 1.0:
        raise ValueError(f"lambda claim must lie in [0, 1), got {lam}")
    part = Partition(samples.n, tuple(a_bits)) if a_bits is not None else None
    if condition_b is not None:
        if part is None:
            raise ValueError("conditioning requires a partition (a_bits)")
        values = part.dim_a * conditional_slice(p_hat, part, condition_b).cond_probs
        analysis = "conditional"
        law = AnalyticLaw.conditional_beta(part.dim_a, lam=lam)
        shape = (part.dim_a, part.dim_a, 1)
    elif part is not None:
        values = part.dim_a * marginalize(p_hat, part)
        analysis = "subsystem"
        law = AnalyticLaw.subsystem_beta(dim, part.dim_b, lam=lam)
        shape = (dim, part.dim_a, part.dim_b)
    else:
        values = dim * p_hat.probs
        analysis = "full"
        law = AnalyticLaw.full_beta(dim, lam=lam)
        shape = (dim, dim, 1)

    hist = histogram(values, bins, default_hist_range(lam))
    hist_name = f"histogram_{analysis}.csv"
    io.write_histogram_csv(hist, out_dir / hist_name)
    results = {
        "source": "file",
        "ks": _gof_dict(ks_one_sample(values, law)) if values.size >= 10 else None,
        "ks_asserted": False,
        "law_family": law.family.value,
        "gap_estimate": estimate_gap(values),
        "lambda_mean_estimate": (estimate_lambda_mean(values, shape)
                                 if values.size >= 100 else None),
        "histogram_csv": hist_name,
        "n_pooled": int(values.size),
        "total_samples": samples.total,
    }
    summary = {
        "schema_version": 1,
        "analysis": analysis,
        "config": {
            "n": samples.n,
            "partition_a_bits": list(a_bits) if a_bits is not None else None,
            "lambda": lam,
            "condition_b": condition_b,
            "bins": bins,
        },
        "results": results,
        "passed": True,
    }
    io.write_summary(summary, out_dir / "summary.json")
    return summary
