"""Core domain types for the intraday signal grid.

Everything downstream (signal math, file codecs, the view pipeline and the
HTTP service) speaks in terms of these types.  Records are immutable;
"missing" is represented by ``None`` for optional numbers, by ``0`` for
market data amounts, and by the empty string for industry names.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field


class RecordError(ValueError):
    """A raw market data record failed validation."""


class BadSymbol(RecordError):
    """Ticker symbol is empty, too long, or has characters outside A-Z and '.'."""


class InvalidCluster(RecordError):
    """Sector code is not one of the ten known cluster codes."""


class InvalidExchange(RecordError):
    """Exchange is not one of the three known venues (by code or letter)."""


class NegativeValue(RecordError):
    """A market data amount that must be non-negative was negative."""


class DuplicateSymbol(ValueError):
    """Two records in one universe share a ticker symbol."""


# Cluster (sector) display names, indexed by numeric code.
CLUSTER_NAMES = (
    "Cyclicals",
    "Energy",
    "Financials",
    "Healthcare",
    "Industrials",
    "Materials",
    "Non-Cyclicals",
    "Technology",
    "Telecom",
    "Utilities",
)

# Exchange display names, indexed by numeric code.
EXCHANGE_NAMES = ("AMEX", "NYSE", "NASDAQ")

# Single-letter venue codes accepted in input files.
EXCHANGE_LETTERS = {"A": 0, "N": 1, "Q": 2}

# Symbols are 1..6 characters drawn from this set.
SYMBOL_CHARS = frozenset("ABCDEFGHIJKLMNOPQRSTUVWXYZ.")
SYMBOL_MAX_LEN = 6

# Column names of a market snapshot file, in wire order.
SNAPSHOT_COLUMNS = (
    "Ticker",
    "Sector",
    "Exchange",
    "MktCap",
    "Liquidity",
    "Close",
    "Last",
    "High",
    "Low",
    "Weight",
    "IndNames",
    "Signal",
)

_NUMERIC_COLUMNS = ("MktCap", "Liquidity", "Close", "Last", "High", "Low")


class MarketStatus(enum.Enum):
    PRE_OPEN = "pre-open"
    OPEN = "open"
    CLOSED = "closed"


@dataclass(frozen=True)
class MarketStamp:
    """Minutes-since-open stamp plus the session status it encodes.

    ``value`` is -1 once the session has closed, 0 before the open, and the
    1-based minute count (rounded up) while the market is open.
    """

    value: int
    status: MarketStatus

    def __post_init__(self) -> None:
        if self.status is not _status_for(self.value):
            raise ValueError(f"stamp value {self.value} does not encode {self.status}")

    @classmethod
    def from_value(cls, value: int) -> "MarketStamp":
        return cls(value, _status_for(value))


def _status_for(value: int) -> MarketStatus:
    if value == -1:
        return MarketStatus.CLOSED
    if value == 0:
        return MarketStatus.PRE_OPEN
    if value > 0:
        return MarketStatus.OPEN
    raise ValueError(f"stamp value must be >= -1, got {value}")


@dataclass(frozen=True)
class SessionConfig:
    """Trading session boundaries in seconds since midnight."""

    open_ssm: int = 34200  # 9:30 AM
    close_ssm: int = 57600  # 4:00 PM

    def __post_init__(self) -> None:
        if not 0 < self.open_ssm < self.close_ssm < 86400:
            raise ValueError(
                f"need 0 < open < close < 86400, got {self.open_ssm}, {self.close_ssm}"
            )

    @classmethod
    def standard(cls, short_day: bool = False) -> "SessionConfig":
        # Short sessions (e.g. day after Thanksgiving) close at 1:00 PM.
        return cls(close_ssm=46800) if short_day else cls()


@dataclass(frozen=True)
class TickerRecord:
    """One ticker's market data for a single update cycle."""

    symbol: str
    # Sector code 0..9, see CLUSTER_NAMES.
    cluster: int
    # Venue code 0..2, see EXCHANGE_NAMES.
    exchange: int
    # Dollar amounts; 0 means unknown.
    market_cap: float
    liquidity: float
    # Prices; close is yesterday's adjusted close, 0 means unknown.
    close: float
    last: float
    high: float
    low: float
    # Strictly positive return weight; files carrying 0 get the default 1.
    weight: float = 1.0
    # Industry name; "" means unclassified.
    industry: str = ""
    # Signal computed on the previous cycle, None before the first one.
    prev_signal: float | None = None

    def to_fields(self) -> dict[str, object]:
        """Snapshot-file field map for this record (inverse of validate_record)."""
        return {
            "Ticker": self.symbol,
            "Sector": self.cluster,
            "Exchange": self.exchange,
            "MktCap": self.market_cap,
            "Liquidity": self.liquidity,
            "Close": self.close,
            "Last": self.last,
            "High": self.high,
            "Low": self.low,
            "Weight": self.weight,
            "IndNames": self.industry,
            "Signal": self.prev_signal,
        }


def validate_record(fields: dict[str, object]) -> TickerRecord:
    """Build a TickerRecord from a raw field map, enforcing domain rules.

    Accepts string values as they come out of a snapshot file as well as
    already-typed ones, so ``validate_record(record.to_fields())`` is the
    identity.  Raises a RecordError subclass naming the offending field.
    """
    missing = [c for c in SNAPSHOT_COLUMNS if c not in fields]
    if missing:
        raise RecordError(f"missing fields: {', '.join(missing)}")

    symbol = str(fields["Ticker"])
    if not 1 <= len(symbol) <= SYMBOL_MAX_LEN or not set(symbol) <= SYMBOL_CHARS:
        raise BadSymbol(f"bad ticker symbol {symbol!r}")

    try:
        cluster = int(str(fields["Sector"]))
    except ValueError:
        raise InvalidCluster(f"{symbol}: cluster {fields['Sector']!r}") from None
    if not 0 <= cluster < len(CLUSTER_NAMES):
        raise InvalidCluster(f"{symbol}: cluster code {cluster} out of range")

    exchange = _parse_exchange(symbol, fields["Exchange"])

    amounts = {}
    for name in _NUMERIC_COLUMNS:
        try:
            value = float(str(fields[name]))
        except ValueError:
            raise RecordError(f"{symbol}: {name} {fields[name]!r} is not numeric") from None
        if value != value or value in (float("inf"), float("-inf")):
            raise RecordError(f"{symbol}: {name} must be finite")
        if value < 0:
            raise NegativeValue(f"{symbol}: {name} is negative ({value})")
        amounts[name] = value

    try:
        weight = float(str(fields["Weight"]))
    except ValueError:
        raise RecordError(f"{symbol}: Weight {fields['Weight']!r} is not numeric") from None
    if weight != weight or weight in (float("inf"), float("-inf")):
        raise RecordError(f"{symbol}: Weight must be finite")
    if weight < 0:
        raise NegativeValue(f"{symbol}: Weight is negative ({weight})")
    if weight == 0:
        weight = 1.0  # files encode "no weight" as 0

    raw_industry = fields["IndNames"]
    # "NA" is what a naive tab-file writer emits for a missing string.
    industry = "" if raw_industry is None or str(raw_industry) == "NA" else str(raw_industry)

    raw_signal = fields["Signal"]
    if raw_signal is None or str(raw_signal) in ("", "NA"):
        prev_signal = None
    else:
        try:
            prev_signal = float(str(raw_signal))
        except ValueError:
            raise RecordError(f"{symbol}: Signal {raw_signal!r} is not numeric") from None
        if prev_signal != prev_signal:
            prev_signal = None

    return TickerRecord(
        symbol=symbol,
        cluster=cluster,
        exchange=exchange,
        market_cap=amounts["MktCap"],
        liquidity=amounts["Liquidity"],
        close=amounts["Close"],
        last=amounts["Last"],
        high=amounts["High"],
        low=amounts["Low"],
        weight=weight,
        industry=industry,
        prev_signal=prev_signal,
    )


def _parse_exchange(symbol: str, raw: object) -> int:
    text = str(raw)
    if text in EXCHANGE_LETTERS:
        return EXCHANGE_LETTERS[text]
    try:
        code = int(text)
    except ValueError:
        raise InvalidExchange(f"{symbol}: exchange {raw!r}") from None
    if not 0 <= code < len(EXCHANGE_NAMES):
        raise InvalidExchange(f"{symbol}: exchange code {code} out of range")
    return code


@dataclass(frozen=True)
class Universe:
    """An ordered collection of ticker records with unique symbols.

    The record order is authoritative: it fixes the row order of the map
    file and the per-ticker scrambling indices.
    """

    tickers: tuple[TickerRecord, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "tickers", tuple(self.tickers))
        seen: set[str] = set()
        for record in self.tickers:
            if record.symbol in seen:
                raise DuplicateSymbol(record.symbol)
            seen.add(record.symbol)

    def __len__(self) -> int:
        return len(self.tickers)

    def __iter__(self):
        return iter(self.tickers)

    @property
    def symbols(self) -> tuple[str, ...]:
        return tuple(record.symbol for record in self.tickers)


@dataclass(frozen=True)
class SignalState:
    """Per-ticker output of one signal computation cycle."""

    # Two-decimal signal; None when the industry is unknown or the
    # return could not be computed.
    signal: float | None
    # Four-decimal |signal - previous signal|; None unless both exist.
    delta: float | None
    # 0-based rank of |signal| ascending (ties by market cap).
    signal_rank: int
    # 0-based rank of delta descending (largest delta gets 0).
    delta_rank: int
    # Signal times the per-index multiplier; None when signal is None.
    scrambled: float | None
