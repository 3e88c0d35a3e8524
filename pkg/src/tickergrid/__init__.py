"""Intraday mean-reversion signals on a heat-grid wire protocol."""

from .engine import (
    ScaleEstimator,
    compute_signals,
    descramble,
    minutes_stamp,
    scramble,
)
from .model import (
    MarketStamp,
    MarketStatus,
    SessionConfig,
    SignalState,
    TickerRecord,
    Universe,
    validate_record,
)

__version__ = "0.1.0"

__all__ = [
    "MarketStamp",
    "MarketStatus",
    "ScaleEstimator",
    "SessionConfig",
    "SignalState",
    "TickerRecord",
    "Universe",
    "compute_signals",
    "descramble",
    "minutes_stamp",
    "scramble",
    "validate_record",
    "__version__",
]
