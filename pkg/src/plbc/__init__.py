"""Partitioned linear block codes for memories with stuck-at defects.

The package builds partitioned BCH codes that split their redundancy
between defect masking (l cells) and random-error correction (r cells),
simulates them over the (epsilon, p) defect/error channel, evaluates
closed-form decoding-failure bounds, and optimizes the (l, r) split.
"""

from .allocate import (
    AllocationCandidate,
    AllocationReport,
    CandidateResult,
    allocate,
    enumerate_candidates,
)
from .bch import (
    BchSpec,
    bch_generator,
    bch_parity_check,
    cyclotomic_coset,
    cyclotomic_cosets,
    design_bch,
    field_for_length,
    minimal_polynomial,
)
from .bounds import (
    BoundResult,
    WeightDistribution,
    binary_entropy,
    capacity_max,
    capacity_min,
    decoding_failure_bound,
    log_binom,
    log_binom_tail,
    macwilliams_transform,
    masking_failure_bound,
    prob_defects,
    weight_distribution,
)
from .channel import (
    ChannelParams,
    DefectVector,
    sample_defects,
    sample_errors,
    transmit,
)
from .codec import (
    DecodeOutcome,
    MaskResult,
    PbchCode,
    PlbcParams,
    construct_pbch,
    decode,
    encode,
    mask_defects,
    mask_defects_one_step,
    message_inverse,
    params_for,
    verify_distances,
)
from .errors import ConstructionError, NumericError
from .gf2 import GF2m, BitMatrix, BitVector, rank, rref, solve_row_system
from .simulate import SimResult, run_trials, trial_rng, wilson_interval

__version__ = "0.1.0"

__all__ = [
    "AllocationCandidate",
    "AllocationReport",
    "BchSpec",
    "BitMatrix",
    "BitVector",
    "BoundResult",
    "CandidateResult",
    "ChannelParams",
    "ConstructionError",
    "DecodeOutcome",
    "DefectVector",
    "GF2m",
    "MaskResult",
    "NumericError",
    "PbchCode",
    "PlbcParams",
    "SimResult",
    "WeightDistribution",
    "allocate",
    "bch_generator",
    "bch_parity_check",
    "binary_entropy",
    "capacity_max",
    "capacity_min",
    "construct_pbch",
    "cyclotomic_coset",
    "cyclotomic_cosets",
    "decode",
    "decoding_failure_bound",
    "design_bch",
    "encode",
    "enumerate_candidates",
    "field_for_length",
    "log_binom",
    "log_binom_tail",
    "macwilliams_transform",
    "mask_defects",
    "mask_defects_one_step",
    "masking_failure_bound",
    "message_inverse",
    "minimal_polynomial",
    "params_for",
    "prob_defects",
    "rank",
    "rref",
    "run_trials",
    "sample_defects",
    "sample_errors",
    "solve_row_system",
    "transmit",
    "trial_rng",
    "verify_distances",
    "weight_distribution",
    "wilson_interval",
]
