"""Headless view pipeline: tiers, filters, flashing, colors, layout.

This module computes exactly what the browser grid displays, so the
client's behavior can be conformance-tested against fixture files
without a browser in the loop.  Colors and filter comparisons operate on
``round(|signal| * 100)`` integers, which makes band boundaries exact:
a signal of 1.00 already belongs to the 1..2 band.
"""

from __future__ import annotations

import enum
import math
from collections.abc import Sequence
from dataclasses import dataclass

from .codecs import format_amount
from .engine import map_ranks, round_half_away
from .model import CLUSTER_NAMES, EXCHANGE_NAMES, SignalState, Universe

# Exchanges tier and display in checkbox order AMEX, NASDAQ, NYSE, which
# differs from their numeric code order (NASDAQ is 2, NYSE is 1).
EXCHANGE_TIER_ORDER = (0, 2, 1)

_ALL_CLUSTERS = frozenset(range(len(CLUSTER_NAMES)))
_ALL_EXCHANGES = frozenset(range(len(EXCHANGE_NAMES)))


class BadTierCount(ValueError):
    """Quantile tier count outside 2..10."""


class TierParam(enum.Enum):
    CLUSTERS = "clusters"
    EXCHANGES = "exchanges"
    LIQUIDITY = "liquidity"
    MARKET_CAP = "market-cap"


class ColorBand(enum.Enum):
    """Display color by |signal| band; the value is the RGB color."""

    NA = 0xB4B4B4
    GREY_0_1 = 0x666666
    GREEN_1_2 = 0x40B06C
    BLUE_2_3 = 0x3380C2
    YELLOW_3_4 = 0xF4D701
    ORANGE_4_5 = 0xFF9C2C
    RED_5_PLUS = 0xF53636


@dataclass(frozen=True)
class ViewConfig:
    """Panel settings driving tiering, filtering and flashing."""

    row_param: TierParam | None = None
    col_param: TierParam | None = None
    selected_clusters: frozenset[int] = _ALL_CLUSTERS
    selected_exchanges: frozenset[int] = _ALL_EXCHANGES
    # Dollar ranges apply only while the parameter is not tiered.
    liquidity_range: tuple[float, float] = (0.0, math.inf)
    market_cap_range: tuple[float, float] = (0.0, math.inf)
    liquidity_tiers: int = 3
    market_cap_tiers: int = 3
    # Minimum |signal| to display; slider snaps to quarters up to 6.
    signal_min: float = 0.0
    # How many of the top delta ranks flash; 0 disables flashing.
    flash_count: int = 15

    def __post_init__(self) -> None:
        if self.row_param is not None and self.row_param is self.col_param:
            raise ValueError(f"{self.row_param} is on both axes")
        if not self.selected_clusters or not self.selected_clusters <= _ALL_CLUSTERS:
            raise ValueError("cluster selection must be a non-empty subset of 0..9")
        if not self.selected_exchanges or not self.selected_exchanges <= _ALL_EXCHANGES:
            raise ValueError("exchange selection must be a non-empty subset of 0..2")
        for name in ("liquidity_tiers", "market_cap_tiers"):
            count = getattr(self, name)
            if not 2 <= count <= 10:
                raise BadTierCount(f"{name} must be 2..10, got {count}")
        if not (0.0 <= self.signal_min <= 6.0) or (self.signal_min * 4) % 1 != 0:
            raise ValueError("signal_min must be a multiple of 0.25 in [0, 6]")
        if not 0 <= self.flash_count <= 25:
            raise ValueError("flash_count must be 0..25")
        for name in ("liquidity_range", "market_cap_range"):
            low, high = getattr(self, name)
            if low < 0 or high < low:
                raise ValueError(f"{name} must satisfy 0 <= low <= high")


@dataclass(frozen=True)
class ParamRanks:
    """Ascending ranks of the two non-discrete parameters, as published
    in the map file."""

    cap_ranks: tuple[int, ...]
    liq_ranks: tuple[int, ...]

    @classmethod
    def of(cls, universe: Universe) -> "ParamRanks":
        cap_ranks, liq_ranks = map_ranks(universe)
        return cls(tuple(cap_ranks), tuple(liq_ranks))


@dataclass(frozen=True)
class TierAxes:
    """Grid shape and per-ticker bucket coordinates.

    Tickers excluded later by filtering can carry coordinate 0 here;
    their coordinates are never displayed.  Markers are the tier boundary
    values of non-discrete axes ((), for discrete or absent parameters).
    """

    matrix_rows: int
    matrix_cols: int
    rows: tuple[int, ...]
    cols: tuple[int, ...]
    row_markers: tuple[float, ...]
    col_markers: tuple[float, ...]


@dataclass(frozen=True)
class GridAssignment:
    """Everything the grid needs to draw one cycle."""

    matrix_rows: int
    matrix_cols: int
    rows: tuple[int, ...]
    cols: tuple[int, ...]
    excluded: tuple[bool, ...]
    flashing: tuple[bool, ...]
    colors: tuple[ColorBand, ...]
    row_markers: tuple[float, ...]
    col_markers: tuple[float, ...]


@dataclass(frozen=True)
class GridLayout:
    """Per-bucket display order after applying the bucket capacity."""

    buckets: tuple[tuple[int, ...], ...]
    dropped: int


def _hundredths(signal: float | None) -> int:
    # Missing signals compare as zero, so a positive minimum hides them.
    if signal is None:
        return 0
    return int(round_half_away(abs(signal) * 100.0, 0))


def color_of(signal: float | None) -> ColorBand:
    """Color band for a signal; band edges belong to the band above."""
    if signal is None:
        return ColorBand.NA
    value = _hundredths(signal)
    if value >= 500:
        return ColorBand.RED_5_PLUS
    if value >= 400:
        return ColorBand.ORANGE_4_5
    if value >= 300:
        return ColorBand.YELLOW_3_4
    if value >= 200:
        return ColorBand.BLUE_2_3
    if value >= 100:
        return ColorBand.GREEN_1_2
    return ColorBand.GREY_0_1


def quantile_tiers(
    ordered_positions: Sequence[int], tier_count: int
) -> tuple[list[int], list[int]]:
    """Assign each ticker to one of ``tier_count`` near-equal quantile tiers.

    ``ordered_positions[i]`` is ticker i's 0-based ascending position in
    the parameter order (a rank_quant output).  The ticker at ordered
    position j lands in the smallest tier k with
    ``j <= floor(N * (k + 1) / tier_count) - 1``.

    Returns (tier per ticker, last ordered position of each tier).
    """
    if not 2 <= tier_count <= 10:
        raise BadTierCount(f"tier count must be 2..10, got {tier_count}")
    n = len(ordered_positions)
    # Smallest such k in closed form: ceil(tier_count * (j + 1) / n) - 1.
    tiers = [
        (tier_count * (position + 1) + n - 1) // n - 1 for position in ordered_positions
    ]
    bounds = [n * (k + 1) // tier_count - 1 for k in range(tier_count)]
    return tiers, bounds


def assign_tiers(universe: Universe, ranks: ParamRanks, config: ViewConfig) -> TierAxes:
    """Bucket coordinates for every ticker under the configured tiering."""
    row_count, row_tiers, row_markers = _axis_tiers(universe, ranks, config, config.row_param)
    col_count, col_tiers, col_markers = _axis_tiers(universe, ranks, config, config.col_param)
    return TierAxes(
        matrix_rows=row_count,
        matrix_cols=col_count,
        rows=tuple(row_tiers),
        cols=tuple(col_tiers),
        row_markers=tuple(row_markers),
        col_markers=tuple(col_markers),
    )


def _axis_tiers(
    universe: Universe,
    ranks: ParamRanks,
    config: ViewConfig,
    param: TierParam | None,
) -> tuple[int, list[int], list[float]]:
    n = len(universe)
    if param is None:
        return 1, [0] * n, []

    if param is TierParam.CLUSTERS:
        selected = sorted(config.selected_clusters)
        positions = {code: position for position, code in enumerate(selected)}
        # Deselected clusters are filtered out; coordinate 0 is a placeholder.
        return len(selected), [positions.get(r.cluster, 0) for r in universe], []

    if param is TierParam.EXCHANGES:
        selected = [code for code in EXCHANGE_TIER_ORDER if code in config.selected_exchanges]
        positions = {code: position for position, code in enumerate(selected)}
        return len(selected), [positions.get(r.exchange, 0) for r in universe], []

    if param is TierParam.LIQUIDITY:
        ordered, count = ranks.liq_ranks, config.liquidity_tiers
        values = [record.liquidity for record in universe]
    else:
        ordered, count = ranks.cap_ranks, config.market_cap_tiers
        values = [record.market_cap for record in universe]

    tiers, bounds = quantile_tiers(ordered, count)
    by_position = {position: i for i, position in enumerate(ordered)}
    markers = [values[by_position[min(max(b, 0), n - 1)]] for b in bounds]
    return count, tiers, markers


def apply_filters(
    universe: Universe, states: Sequence[SignalState], config: ViewConfig
) -> list[bool]:
    """Exclusion flag per ticker under the configured filters."""
    liquidity_tiered = TierParam.LIQUIDITY in (config.row_param, config.col_param)
    cap_tiered = TierParam.MARKET_CAP in (config.row_param, config.col_param)
    min_hundredths = _hundredths(config.signal_min)

    excluded = []
    for record, state in zip(universe, states):
        out = record.cluster not in config.selected_clusters
        out = out or record.exchange not in config.selected_exchanges
        if not liquidity_tiered:
            low, high = config.liquidity_range
            out = out or not low <= record.liquidity <= high
        if not cap_tiered:
            low, high = config.market_cap_range
            out = out or not low <= record.market_cap <= high
        out = out or _hundredths(state.signal) < min_hundredths
        excluded.append(out)
    return excluded


def select_flashing(states: Sequence[SignalState], flash_count: int) -> list[bool]:
    """Flash the tickers whose delta rank is inside the flashing window."""
    if not 0 <= flash_count <= 25:
        raise ValueError("flash_count must be 0..25")
    return [
        state.delta is not None and state.delta_rank < flash_count for state in states
    ]


def grid_assignment(
    universe: Universe,
    states: Sequence[SignalState],
    config: ViewConfig,
    ranks: ParamRanks | None = None,
) -> GridAssignment:
    """Compose tiers, filters, flashing and colors into one assignment."""
    if ranks is None:
        ranks = ParamRanks.of(universe)
    axes = assign_tiers(universe, ranks, config)
    return GridAssignment(
        matrix_rows=axes.matrix_rows,
        matrix_cols=axes.matrix_cols,
        rows=axes.rows,
        cols=axes.cols,
        excluded=tuple(apply_filters(universe, states, config)),
        flashing=tuple(select_flashing(states, config.flash_count)),
        colors=tuple(color_of(state.signal) for state in states),
        row_markers=axes.row_markers,
        col_markers=axes.col_markers,
    )


def layout_grid(
    assignment: GridAssignment, states: Sequence[SignalState], cell_capacity: int
) -> GridLayout:
    """Order tickers inside their buckets, strongest signals first.

    Iterates signal ranks descending (the mirror of the ascending rank
    order, so ties inherit the rank tie-breaks), skips excluded tickers,
    and drops whatever exceeds a bucket's capacity.
    """
    if cell_capacity < 0:
        raise ValueError("cell_capacity must be >= 0")
    n = len(states)
    by_rank = [0] * n
    for i, state in enumerate(states):
        by_rank[state.signal_rank] = i

    buckets: list[list[int]] = [
        [] for _ in range(assignment.matrix_rows * assignment.matrix_cols)
    ]
    dropped = 0
    for rank in range(n - 1, -1, -1):
        i = by_rank[rank]
        if assignment.excluded[i]:
            continue
        bucket = assignment.rows[i] * assignment.matrix_cols + assignment.cols[i]
        if len(buckets[bucket]) < cell_capacity:
            buckets[bucket].append(i)
        else:
            dropped += 1
    return GridLayout(tuple(tuple(b) for b in buckets), dropped)


def slider_scale(max_value: float) -> tuple[list[int], list[int]]:
    """Tick values (in millions) for a dollar dual-slider, plus the decade
    markers among them.

    Ticks run 0, 1..10, 20..100, 200..1000, ... and stop at the first tick
    strictly above ``max_value`` in millions; the slider minimum is always
    zero.
    """
    if max_value < 0:
        raise ValueError("max_value must be >= 0")
    limit = int(max_value / 1_000_000)
    ticks = []
    markers = []
    value, step = 0, 1
    while True:
        ticks.append(value)
        if value == step * 10:
            markers.append(value)
            step *= 10
        if value > limit:
            break
        value += step
    return ticks, markers


def export_view_fixture(
    universe: Universe,
    states: Sequence[SignalState],
    config: ViewConfig,
    cell_capacity: int | None = None,
) -> bytes:
    """Deterministic text dump of a grid assignment for client tests.

    Four header lines (grid shape and axis markers), then one line per
    ticker: symbol, row, col, excluded, flashing, RGB color in hex.  When
    a cell capacity is given, a final line records how many tickers the
    capacity dropped.
    """
    assignment = grid_assignment(universe, states, config)
    lines = [
        f"rows\t{assignment.matrix_rows}",
        f"cols\t{assignment.matrix_cols}",
        "row_markers\t" + ",".join(format_amount(v) for v in assignment.row_markers),
        "col_markers\t" + ",".join(format_amount(v) for v in assignment.col_markers),
    ]
    for i, record in enumerate(universe):
        lines.append(
            "\t".join(
                (
                    record.symbol,
                    str(assignment.rows[i]),
                    str(assignment.cols[i]),
                    "1" if assignment.excluded[i] else "0",
                    "1" if assignment.flashing[i] else "0",
                    f"{assignment.colors[i].value:06X}",
                )
            )
        )
    if cell_capacity is not None:
        layout = layout_grid(assignment, states, cell_capacity)
        lines.append(f"dropped\t{layout.dropped}")
    return "\n".join(lines).encode("utf-8")
