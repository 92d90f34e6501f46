"""Statistics of random quantum states: exact bit-string probability laws,
depolarizing-noise transforms, conditional self-similarity, and linear
cross-entropy benchmarking, with Monte Carlo drivers to verify each law.
"""

__version__ = "0.1.0"

from .errors import (CapacityError, DegenerateSliceError,
                     InsufficientSamplesError, SampleFormatError)
from .experiments import (ExperimentConfig, analyze_sample_set,
                          conditional_affine_gap, conditional_ensemble,
                          pooled_conditional_scaled, pooled_full_scaled,
                          pooled_subsystem_scaled, run_experiment, xeb_ensemble)
from .laws import AnalyticLaw, LawFamily
from .partitions import (ConditionalSlice, Partition, conditional_slice,
                         marginalize, noisy_conditional_affine,
                         noisy_conditional_exact)
from .rng import RngSpec
from .states import (DepolarizedProbVector, ProbVector, StateVector, depolarize,
                     probabilities, sample_flat_dirichlet, sample_haar_state)
from .stats import (GofReport, Histogram, default_hist_range, estimate_gap,
                    estimate_lambda_mean, histogram, ks_one_sample,
                    ks_two_sample)
from .xeb import (SampleMeta, SampleSet, XebKind, XebResult, draw_samples,
                  xeb_conditional, xeb_conditional_all, xeb_full,
                  xeb_subsystem)

__all__ = [
    "AnalyticLaw", "CapacityError", "ConditionalSlice", "DegenerateSliceError",
    "DepolarizedProbVector", "ExperimentConfig", "GofReport", "Histogram",
    "InsufficientSamplesError", "LawFamily", "Partition", "ProbVector",
    "RngSpec", "SampleFormatError", "SampleMeta", "SampleSet", "StateVector",
    "XebKind", "XebResult", "analyze_sample_set", "conditional_affine_gap",
    "conditional_ensemble", "conditional_slice", "default_hist_range",
    "depolarize", "draw_samples", "estimate_gap", "estimate_lambda_mean",
    "histogram", "ks_one_sample", "ks_two_sample", "marginalize",
    "noisy_conditional_affine", "noisy_conditional_exact",
    "pooled_conditional_scaled", "pooled_full_scaled", "pooled_subsystem_scaled",
    "probabilities", "run_experiment", "sample_flat_dirichlet",
    "sample_haar_state", "xeb_conditional", "xeb_conditional_all",
    "xeb_ensemble", "xeb_full", "xeb_subsystem",
]
