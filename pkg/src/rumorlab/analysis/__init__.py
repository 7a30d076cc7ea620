from .bounds import (
    ChernoffVariant,
    DerandParams,
    RuntimeBound,
    chernoff_bounds,
    derand_params,
    geometric_sum_bound,
    rgp_runtime_bound,
    wu_runtime_bound,
)
from .montecarlo import FAILURE_GENERATORS, MCProtocol, failure_set, TailReport, montecarlo_tail, sample_rounds, trial_seed
from .oracle import OracleReport, exhaustive_oracle
from .safety import SafetyReport, safety_estimate, violation_fraction

__all__ = [
    "FAILURE_GENERATORS",
    "ChernoffVariant",
    "DerandParams",
    "MCProtocol",
    "OracleReport",
    "RuntimeBound",
    "SafetyReport",
    "TailReport",
    "chernoff_bounds",
    "derand_params",
    "exhaustive_oracle",
    "failure_set",
    "geometric_sum_bound",
    "montecarlo_tail",
    "rgp_runtime_bound",
    "safety_estimate",
    "sample_rounds",
    "trial_seed",
    "violation_fraction",
    "wu_runtime_bound",
]
