"""Holographic vector-symbolic memory with rotation-product codebooks.

Binding and unbinding are circular convolution and correlation over
power-of-two-dimension hypervectors. The krop codebook (a Kronecker
product of 2x2 rotation-reflection factors) is defined by log2(N)
angles, materializes any row in O(N), and supports clean-up in
O(N log N) via a Walsh-Hadamard-style butterfly, while keeping memory
capacity comparable to dense random codebooks.
"""

__version__ = "0.1.0"

from .cleanup import (
    NEAR_TIE_MARGIN,
    CleanupResult,
    direct_cleanup,
    krop_cleanup,
    krop_transform,
    sign_cleanup,
)
from .codebook import (
    ExplicitCodebook,
    KropParams,
    krop_materialize,
    krop_params,
    krop_row,
    load_params,
    sample_binary_codebook,
    sample_normal_codebook,
    save_params,
    sylvester_codebook,
)
from .experiments import (
    ExperimentConfig,
    ExperimentReport,
    load_report,
    run_capacity,
    run_mutable,
    run_timing,
    write_report,
)
from .hrr import (
    HyperVector,
    as_hypervector,
    circular_convolve,
    circular_correlate,
    fft,
    superpose,
)
from .memory import AssociativeStore, ReferenceMemory, retrieval_rate
from .rng import rng_from_seed, substream

__all__ = [
    "AssociativeStore",
    "CleanupResult",
    "ExperimentConfig",
    "ExperimentReport",
    "ExplicitCodebook",
    "HyperVector",
    "KropParams",
    "NEAR_TIE_MARGIN",
    "ReferenceMemory",
    "as_hypervector",
    "circular_convolve",
    "circular_correlate",
    "direct_cleanup",
    "fft",
    "krop_cleanup",
    "krop_materialize",
    "krop_params",
    "krop_row",
    "krop_transform",
    "load_params",
    "load_report",
    "retrieval_rate",
    "rng_from_seed",
    "run_capacity",
    "run_mutable",
    "run_timing",
    "sample_binary_codebook",
    "sample_normal_codebook",
    "save_params",
    "sign_cleanup",
    "substream",
    "superpose",
    "sylvester_codebook",
    "write_report",
]
