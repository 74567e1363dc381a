"""Demand-private coded caching over GF(2) with exact privacy verification."""

from .constructions import (
    RatePoint,
    build_mn,
    build_partial_private,
    build_table1,
    build_trivial,
    dualize,
    extend_demand,
    find_realizations,
    private_rate_formula,
    privatize,
    subpack_comparison,
    time_share,
    tradeoff_curve,
    tradeoff_schemes,
)
from .gf2 import BitMatrix, enumerate_row_spaces, in_row_span, rank, rref, stack
from .pda import EXAMPLE_PDA, Pda, build_from_pda, format_pda, parse_pda, validate_pda
from .scheme import (
    PrivacyReport,
    Scheme,
    SchemeParams,
    Violation,
    decodes,
    deserialize_scheme,
    privacy_report,
    rate_and_memory,
    serialize_scheme,
    verify_correctness,
    weak_privacy_check,
)
from .search import SearchReport, enumerate_reduced_caches, search_sub2, search_sub3_uncoded

__version__ = "0.1.0"
