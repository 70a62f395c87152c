from ._core import (
    DegenerateGeometry,
    InvalidInput,
    UsageError,
    __version__,
    approx_optimal,
    approximate,
    decode_chain_code,
    dp_min_eps,
    encode_chain_code,
    metrics,
    rosin,
    rotate,
    scale,
)

__all__ = [
    "DegenerateGeometry",
    "InvalidInput",
    "UsageError",
    "__version__",
    "approx_optimal",
    "approximate",
    "decode_chain_code",
    "dp_min_eps",
    "encode_chain_code",
    "metrics",
    "rosin",
    "rotate",
    "scale",
]
