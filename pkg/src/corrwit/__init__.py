"""Representability of classes in products of projective spaces, with checkable witnesses."""

from .construct import (
    DJVector,
    FourSquares,
    Move,
    WitnessCertificate,
    check_certificate,
    four_squares,
    is_dj_type,
    linear_system_description,
    reduce_step,
    replay,
    represent_general,
    represent_linear_dj,
    represent_linear_nat7,
    sum_of_squares_representations,
)
from .decide import (
    ClassP2P2,
    ClassP3P3,
    Decision,
    MultiDegreeSequence,
    Verdict,
    check_spatial,
    decide_multiple,
    decide_p1p1,
    decide_p2p1,
    decide_p2p2,
    log_concave,
    no_internal_zeros,
)
from .lattice import FormKind, LatticeVector, Triple, WitnessPair, inner, is_time_like, verify_witness
from .oracle import LatticeKind, LatticeSpec, brute_search, completeness_scan, cross_validate

__version__ = "0.1.0"
