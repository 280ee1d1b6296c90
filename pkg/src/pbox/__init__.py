"""Exact extreme-point and expectation-bound analysis for p-boxes on finite domains."""

from .cones import (
    GapCase,
    GeneratorSet,
    MescReport,
    NEG,
    POS,
    Region,
    adjacency_sign_test,
    cone_contains,
    enumerate_mescs,
    mesc_validate,
)
from .core import (
    ChainCoefficients,
    Domain,
    DomainMismatchError,
    Gamble,
    InvariantViolation,
    MassFunction,
    PBox,
    StepCDF,
    as_rational,
    chain_decompose,
    expectation,
    rationals,
    validate_pbox,
)
from .extremes import (
    ExtremePoint,
    FanEdge,
    FanGraph,
    Infeasible,
    adjacent_mesc,
    argmin_walk,
    build_fan,
    enumerate_extremes,
    extreme_from_mesc,
    lower_expectation,
    upper_expectation,
)
from .oracle import (
    CheckReport,
    DomainTooLargeError,
    cross_check,
    oracle_extremes,
    oracle_lower_expectation,
)

__version__ = "0.1.0"

__all__ = [
    "ChainCoefficients",
    "CheckReport",
    "Domain",
    "DomainMismatchError",
    "DomainTooLargeError",
    "ExtremePoint",
    "FanEdge",
    "FanGraph",
    "Gamble",
    "GapCase",
    "GeneratorSet",
    "Infeasible",
    "InvariantViolation",
    "MassFunction",
    "MescReport",
    "NEG",
    "PBox",
    "POS",
    "Region",
    "StepCDF",
    "adjacency_sign_test",
    "adjacent_mesc",
    "argmin_walk",
    "as_rational",
    "build_fan",
    "chain_decompose",
    "cone_contains",
    "cross_check",
    "enumerate_extremes",
    "enumerate_mescs",
    "expectation",
    "extreme_from_mesc",
    "lower_expectation",
    "mesc_validate",
    "oracle_extremes",
    "oracle_lower_expectation",
    "rationals",
    "upper_expectation",
    "validate_pbox",
]
