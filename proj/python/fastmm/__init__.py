"""Bilinear matrix multiplication algorithms, trilinear aggregation,
APA lifting and binary segmentation, backed by the C++ library."""

from ._fastmm import (  # noqa: F401
    DimensionError,
    ParseError,
    VerificationError,
    aggregate,
    apa_exponent,
    apa_lift,
    binseg_inner,
    binseg_poly_mult,
    binseg_sum,
    builtins,
    export_builtin,
    exponent_from_rank,
    history,
    multiply,
    verify_builtin,
    verify_text,
)

__all__ = [
    "DimensionError",
    "ParseError",
    "VerificationError",
    "aggregate",
    "apa_exponent",
    "apa_lift",
    "binseg_inner",
    "binseg_poly_mult",
    "binseg_sum",
    "builtins",
    "export_builtin",
    "exponent_from_rank",
    "history",
    "multiply",
    "verify_builtin",
    "verify_text",
]
