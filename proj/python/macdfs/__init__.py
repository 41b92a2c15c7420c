"""Product decoherence-free subspaces for two-access random-unitary channels.

The heavy lifting lives in the compiled extension; this package re-exports
its operations and the two exception types.
"""

from macdfs._core import (
    ContractViolation,
    NumericalFailure,
    analyze,
    analyze_json,
    analyze_states,
    analyze_unitary,
    decompose_space,
    examples,
    format_ket,
    oracle_json,
    parse_ket,
    schmidt_matrix,
    search_zero_block,
    verify,
)

__all__ = [
    "ContractViolation",
    "NumericalFailure",
    "analyze",
    "analyze_json",
    "analyze_states",
    "analyze_unitary",
    "decompose_space",
    "examples",
    "format_ket",
    "oracle_json",
    "parse_ket",
    "schmidt_matrix",
    "search_zero_block",
    "verify",
]
