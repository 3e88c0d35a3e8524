"""Readers and writers for the four wire formats.

All output is byte-exact and deterministic: the grid client and the golden
tests both depend on it.

    mkt.data.txt   input snapshot, 12 tab-separated columns with a header
    m.txt          per-day map file, 7 columns, no header, no final newline
    s.txt          per-cycle signal line: stamp plus comma-joined entries
    sig.delta.txt  per-cycle debug table, 6 columns with a header

Numeric tokens are plain decimals (never scientific notation) with
trailing zeros trimmed, so every token re-parses to exactly the value
written.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal

from .model import (
    SNAPSHOT_COLUMNS,
    MarketStamp,
    MarketStatus,
    RecordError,
    SignalState,
    TickerRecord,
    Universe,
    validate_record,
)

# Entries carry a delta rank only when it is below this; the client will
# never be asked to flash more than 25 tickers.
FLASH_RANK_CAP = 25

_SIG_DELTA_HEADER = "Ticker\tScrambled.Signal\tSignal\tSignal.ix\tDelta\tDelta.ix"


class HeaderMismatch(ValueError):
    """The file's header line is not the expected one."""


class ColumnCount(ValueError):
    """A line has the wrong number of tab-separated fields."""

    def __init__(self, line_no: int, expected: int, got: int):
        super().__init__(f"line {line_no}: expected {expected} fields, got {got}")
        self.line_no = line_no


class NumericParse(ValueError):
    """A numeric field failed to parse."""

    def __init__(self, line_no: int, column: str, token: str):
        super().__init__(f"line {line_no}: {column} {token!r} is not numeric")
        self.line_no = line_no
        self.column = column


class RankNotPermutation(ValueError):
    """A rank column is not a permutation of 0..N-1."""


class MalformedEntry(ValueError):
    """A signal-line entry does not have 2 or 3 tab-separated fields."""


@dataclass(frozen=True)
class MapFileRow:
    """One parsed line of the map file."""

    symbol: str
    cluster: int
    exchange: int
    market_cap: float
    cap_rank: int
    liquidity: float
    liq_rank: int


@dataclass(frozen=True)
class SignalFileEntry:
    """One per-ticker entry of the signal line.

    ``scrambled_token`` is "*" before the open, "" for a missing signal,
    and the scrambled decimal otherwise.  ``delta_rank`` is present only
    for the (at most 25) tickers in the flashing window.
    """

    scrambled_token: str
    signal_rank: int
    delta_rank: int | None = None

    def __post_init__(self) -> None:
        if self.delta_rank is not None and not 0 <= self.delta_rank < FLASH_RANK_CAP:
            raise MalformedEntry(f"delta rank {self.delta_rank} out of range")


@dataclass(frozen=True)
class SigDeltaRow:
    """One parsed line of the signal/delta table."""

    symbol: str
    scrambled: float | None
    signal: float | None
    signal_rank: int
    delta: float | None
    delta_rank: int


def format_decimal(value: float, max_digits: int) -> str:
    """Fixed-point decimal with at most ``max_digits`` fraction digits,
    trailing zeros (and a bare point) trimmed; never "-0"."""
    text = f"{value:.{max_digits}f}"
    if "." in text:
        text = text.rstrip("0").rstrip(".")
    if text in ("-0", ""):
        return "0"
    return text


def format_amount(value: float) -> str:
    """Dollar amount or price as a plain decimal, never scientific notation."""
    if value == int(value):
        return str(int(value))
    # repr gives the shortest digits that round-trip; Decimal re-expands
    # any exponent repr may have used.
    return format(Decimal(repr(value)), "f")


def _decode(data: bytes | str) -> str:
    return data.decode("utf-8") if isinstance(data, bytes) else data


# -- mkt.data.txt -----------------------------------------------------------

def parse_market_snapshot(data: bytes | str) -> Universe:
    """Parse an input snapshot into a Universe.

    Raises HeaderMismatch, ColumnCount or NumericParse with 1-based line
    numbers; record-level rules are enforced by validate_record.
    """
    lines = _decode(data).splitlines()
    if not lines or lines[0] != "\t".join(SNAPSHOT_COLUMNS):
        raise HeaderMismatch(f"bad snapshot header: {lines[0] if lines else ''!r}")

    records = []
    for line_no, line in enumerate(lines[1:], start=2):
        parts = line.split("\t")
        if len(parts) != len(SNAPSHOT_COLUMNS):
            raise ColumnCount(line_no, len(SNAPSHOT_COLUMNS), len(parts))
        fields = dict(zip(SNAPSHOT_COLUMNS, parts))
        for column in ("MktCap", "Liquidity", "Close", "Last", "High", "Low", "Weight"):
            token = fields[column]
            try:
                float(token)
            except ValueError:
                raise NumericParse(line_no, column, token) from None
        try:
            records.append(validate_record(fields))
        except RecordError as err:
            raise type(err)(f"line {line_no}: {err}") from None
    return Universe(tuple(records))


def write_market_snapshot(universe: Universe) -> bytes:
    """Inverse of parse_market_snapshot (up to numeric token spelling)."""
    lines = ["\t".join(SNAPSHOT_COLUMNS)]
    for record in universe:
        prev = "NA" if record.prev_signal is None else format_decimal(record.prev_signal, 2)
        lines.append(
            "\t".join(
                (
                    record.symbol,
                    str(record.cluster),
                    str(record.exchange),
                    format_amount(record.market_cap),
                    format_amount(record.liquidity),
                    format_amount(record.close),
                    format_amount(record.last),
                    format_amount(record.high),
                    format_amount(record.low),
                    format_amount(record.weight),
                    record.industry,
                    prev,
                )
            )
        )
    return ("\n".join(lines) + "\n").encode("utf-8")


# -- m.txt ------------------------------------------------------------------

def write_map_file(
    universe: Universe, cap_ranks: list[int], liq_ranks: list[int]
) -> bytes:
    """Seven tab-separated columns per ticker, no header, LF line ends,
    and no newline after the final row."""
    n = len(universe)
    if n == 0:
        raise ValueError("universe is empty")
    for name, ranks in (("cap", cap_ranks), ("liquidity", liq_ranks)):
        if sorted(ranks) != list(range(n)):
            raise RankNotPermutation(f"{name} ranks are not a permutation of 0..{n - 1}")

    lines = [
        "\t".join(
            (
                record.symbol,
                str(record.cluster),
                str(record.exchange),
                format_amount(record.market_cap),
                str(cap_rank),
                format_amount(record.liquidity),
                str(liq_rank),
            )
        )
        for record, cap_rank, liq_rank in zip(universe, cap_ranks, liq_ranks)
    ]
    return "\n".join(lines).encode("utf-8")


def parse_map_file(data: bytes | str) -> list[MapFileRow]:
    rows = []
    for line_no, line in enumerate(_decode(data).splitlines(), start=1):
        parts = line.split("\t")
        if len(parts) != 7:
            raise ColumnCount(line_no, 7, len(parts))
        columns = ("Cluster", "Exchange", "MktCap", "CapRank", "Liquidity", "LiqRank")
        values: list[float] = []
        for column, token in zip(columns, parts[1:]):
            try:
                values.append(float(token))
            except ValueError:
                raise NumericParse(line_no, column, token) from None
        rows.append(
            MapFileRow(
                symbol=parts[0],
                cluster=int(parts[1]),
                exchange=int(parts[2]),
                market_cap=values[2],
                cap_rank=int(parts[4]),
                liquidity=values[4],
                liq_rank=int(parts[6]),
            )
        )
    return rows


# -- s.txt ------------------------------------------------------------------

def write_signal_file(stamp: MarketStamp, states: list[SignalState]) -> bytes:
    """Single line: the stamp, then one comma-separated entry per ticker.

    Entries are "scrambled<TAB>signalRank" with the delta rank appended
    for tickers inside the flashing window.  No trailing newline.
    """
    parts = [str(stamp.value)]
    for state in states:
        if stamp.status is MarketStatus.PRE_OPEN:
            token = "*"
        elif state.scrambled is None:
            token = ""
        else:
            token = format_decimal(state.scrambled, 4)
        entry = f"{token}\t{state.signal_rank}"
        if state.delta is not None and state.delta_rank < FLASH_RANK_CAP:
            entry = f"{entry}\t{state.delta_rank}"
        parts.append(entry)
    return ",".join(parts).encode("utf-8")


def parse_signal_file(data: bytes | str) -> tuple[MarketStamp, list[SignalFileEntry]]:
    """Inverse of write_signal_file on its own output."""
    text = _decode(data)
    stamp_token, _, rest = text.partition(",")
    try:
        stamp = MarketStamp.from_value(int(stamp_token))
    except ValueError:
        raise MalformedEntry(f"bad stamp token {stamp_token!r}") from None

    entries = []
    if rest:
        for position, chunk in enumerate(rest.split(",")):
            fields = chunk.split("\t")
            if len(fields) not in (2, 3):
                raise MalformedEntry(f"entry {position}: {chunk!r}")
            try:
                signal_rank = int(fields[1])
                delta_rank = int(fields[2]) if len(fields) == 3 else None
            except ValueError:
                raise MalformedEntry(f"entry {position}: {chunk!r}") from None
            entries.append(SignalFileEntry(fields[0], signal_rank, delta_rank))
    return stamp, entries


# -- sig.delta.txt -----------------------------------------------------------

def write_sig_delta(universe: Universe, states: list[SignalState]) -> bytes:
    """Header plus one row per ticker; missing values spelled NA; no
    newline after the final row."""
    if len(universe) != len(states):
        raise ValueError("universe and states differ in length")
    lines = [_SIG_DELTA_HEADER]
    for record, state in zip(universe, states):
        lines.append(
            "\t".join(
                (
                    record.symbol,
                    "NA" if state.scrambled is None else format_decimal(state.scrambled, 4),
                    "NA" if state.signal is None else format_decimal(state.signal, 2),
                    str(state.signal_rank),
                    "NA" if state.delta is None else format_decimal(state.delta, 4),
                    str(state.delta_rank),
                )
            )
        )
    return "\n".join(lines).encode("utf-8")


def parse_sig_delta(data: bytes | str) -> list[SigDeltaRow]:
    lines = _decode(data).splitlines()
    if not lines or lines[0] != _SIG_DELTA_HEADER:
        raise HeaderMismatch(f"bad sig.delta header: {lines[0] if lines else ''!r}")
    rows = []
    for line_no, line in enumerate(lines[1:], start=2):
        parts = line.split("\t")
        if len(parts) != 6:
            raise ColumnCount(line_no, 6, len(parts))

        def _optional(token: str, column: str) -> float | None:
            if token == "NA":
                return None
            try:
                return float(token)
            except ValueError:
                raise NumericParse(line_no, column, token) from None

        try:
            signal_rank = int(parts[3])
            delta_rank = int(parts[5])
        except ValueError:
            raise NumericParse(line_no, "rank", line) from None
        rows.append(
            SigDeltaRow(
                symbol=parts[0],
                scrambled=_optional(parts[1], "Scrambled.Signal"),
                signal=_optional(parts[2], "Signal"),
                signal_rank=signal_rank,
                delta=_optional(parts[4], "Delta"),
                delta_rank=delta_rank,
            )
        )
    return rows
