"""Semi-classical optical Shor factoring simulator."""

from ._core import (
    AmbiguousReadoutError,
    ConsistencyError,
    DecodeAnchorError,
    DegradedFrameError,
    NoSurvivorsError,
    NotCoprimeError,
    OrderOutOfRangeError,
    UnclassifiableFrameError,
    classify_frame,
    ext_gcd,
    factor,
    gcd,
    mod_exp,
    mont_mul,
    mont_setup,
    multiplicative_order,
    prepared_network,
    register_state,
    render_frame,
    schmidt_number,
    survivors,
    write_pgm16,
)

EXIT_CODES = {
    "success": 0,
    "lucky_factor": 0,
    "invalid_input": 2,
    "retry_exhausted": 3,
    "internal_error": 4,
}

__all__ = [name for name in dir() if not name.startswith("_")]
