"""Splitting covers into disjoint subcovers.

The data model lives in :mod:`coversplit.core`; :mod:`coversplit.oracle`
holds the exact search used as ground truth, and the remaining modules cover
graphs, interval covers of linear orders, and the tree/rectangle constructions.
"""
from .core import (
    ContractError,
    CoverError,
    CoverInstance,
    CoverSet,
    ParseError,
    SetInstance,
    ShapeError,
    ValidationError,
    VerifyReport,
    coverage_profile,
    decompose_components,
    emit_coloring,
    emit_instance,
    expand_multiplicity,
    instance_from_members,
    load_coloring,
    load_instance,
    restrict,
    verify_all_k,
    verify_coloring,
)
from .oracle import (
    IndecomposabilityCertificate,
    SplitResult,
    Status,
    enumerate_partitions_check,
    exact_split,
)

__version__ = "0.1.0"

__all__ = [
    "ContractError",
    "CoverError",
    "CoverInstance",
    "CoverSet",
    "IndecomposabilityCertificate",
    "ParseError",
    "SetInstance",
    "ShapeError",
    "SplitResult",
    "Status",
    "ValidationError",
    "VerifyReport",
    "coverage_profile",
    "decompose_components",
    "emit_coloring",
    "emit_instance",
    "enumerate_partitions_check",
    "exact_split",
    "expand_multiplicity",
    "instance_from_members",
    "load_coloring",
    "load_instance",
    "restrict",
    "verify_all_k",
    "verify_coloring",
]
