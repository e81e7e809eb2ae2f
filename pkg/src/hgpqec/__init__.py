"""Hypergraph product quantum LDPC codes: construction, decoding, simulation."""

__version__ = "0.1.0"

from .gf2 import BitVector, SparseBitMatrix
from .graphs import (
    BiregularBipartiteGraph,
    CorrectionBound,
    ExpansionReport,
    expansion_audit,
    generate_configuration_model,
    guaranteed_correction_bound,
)
from .classical import (
    ClassicalCode,
    FlipOutcome,
    code_from_graph,
    flip_benchmark,
    flip_decode,
    select_best_graph,
)
from .product import (
    CssCode,
    LogicalBasis,
    brute_force_distance,
    code_parameters,
    hypergraph_product,
    logical_basis,
)
from .ssf import (
    CssDecodeResult,
    DecodeOutcome,
    SmallSetCatalog,
    build_catalog,
    decode_css,
    small_set_flip,
)
from .toric import ToricCode, build_toric, match_defects, mwpm_decode, toric_logical_failure
from .noise import NoiseSample, TrialStream, sample_noise
from .harness import (
    EstimateWithCI,
    SweepResult,
    ThresholdEstimate,
    ToricComparison,
    compare_with_toric,
    estimate,
    estimate_toric,
    judge_trial,
    run_trial,
    sweep,
    threshold_estimate,
)

__all__ = [
    "__version__",
    "BitVector",
    "SparseBitMatrix",
    "BiregularBipartiteGraph",
    "ExpansionReport",
    "CorrectionBound",
    "generate_configuration_model",
    "expansion_audit",
    "guaranteed_correction_bound",
    "ClassicalCode",
    "FlipOutcome",
    "code_from_graph",
    "flip_decode",
    "flip_benchmark",
    "select_best_graph",
    "CssCode",
    "LogicalBasis",
    "hypergraph_product",
    "code_parameters",
    "logical_basis",
    "brute_force_distance",
    "SmallSetCatalog",
    "DecodeOutcome",
    "CssDecodeResult",
    "build_catalog",
    "small_set_flip",
    "decode_css",
    "ToricCode",
    "build_toric",
    "match_defects",
    "mwpm_decode",
    "toric_logical_failure",
    "NoiseSample",
    "TrialStream",
    "sample_noise",
    "EstimateWithCI",
    "SweepResult",
    "ThresholdEstimate",
    "ToricComparison",
    "estimate",
    "estimate_toric",
    "run_trial",
    "judge_trial",
    "sweep",
    "threshold_estimate",
    "compare_with_toric",
]
