"""Exact genus-0 curve counts on the quadric surface via marked floor
diagrams, reduced to the Gromov-Witten-Welschinger invariants of projective
3-space with mixed real and conjugate point constraints."""

from .bidegree import Bidegree
from .diagrams import FloorDiagram, automorphism_count, canonical_encoding, enumerate_diagrams
from .errors import (
    ContractViolation,
    FixtureIntegrityError,
    InputError,
    PencilcountError,
    ResourceCapError,
    VerificationError,
)
from .invariants import (
    ENGINE_VERSION,
    InvariantRecord,
    ResultCache,
    congruence_check,
    conjecture_report,
    cp3_congruence_check,
    gw_cp3,
    gw_quadric,
    sign_pattern_report,
    w_quadric,
    w_rp3,
)
from .markings import (
    CONVENTION_VARIANTS,
    DEFAULT_CONVENTION,
    LEGACY_VARIANTS,
    LabelLayout,
    Marking,
    SignConvention,
    complex_multiplicity,
    count_complex_markings,
    real_contribution,
    real_multiplicity,
)
from .scan import ScanStats, scan_count, state_space_report
from .verify import cross_engine_check, fit_sign_convention, load_fixtures, pair_placement_invariance, run_suite

__version__ = ENGINE_VERSION

__all__ = [
    "Bidegree",
    "FloorDiagram",
    "LabelLayout",
    "Marking",
    "SignConvention",
    "ScanStats",
    "InvariantRecord",
    "ResultCache",
    "ENGINE_VERSION",
    "CONVENTION_VARIANTS",
    "LEGACY_VARIANTS",
    "DEFAULT_CONVENTION",
    "enumerate_diagrams",
    "automorphism_count",
    "canonical_encoding",
    "count_complex_markings",
    "complex_multiplicity",
    "real_multiplicity",
    "real_contribution",
    "scan_count",
    "state_space_report",
    "gw_quadric",
    "w_quadric",
    "gw_cp3",
    "w_rp3",
    "congruence_check",
    "cp3_congruence_check",
    "sign_pattern_report",
    "conjecture_report",
    "load_fixtures",
    "fit_sign_convention",
    "cross_engine_check",
    "pair_placement_invariance",
    "run_suite",
    "PencilcountError",
    "InputError",
    "ContractViolation",
    "VerificationError",
    "FixtureIntegrityError",
    "ResourceCapError",
]
