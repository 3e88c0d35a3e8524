"""Signal computation: intraday mean-reversion residuals on a dispersion scale.

The pipeline per cycle is

    return   r_i = w_i * ln(last_i / x_i)      x_i blends close and mid-range
    residual e_i = r_i - mean of r over i's industry peers
    signal   s_i = round(e_i / sigma, 2)       sigma from a deviation estimator
    delta    d_i = round(|s_i - previous s_i|, 4)

plus three rank orders consumed by the grid display, and a per-index
multiplier that obfuscates signal values on the wire.  Missing inputs
propagate as ``None`` rather than poisoning the cross-section; see the
individual functions for the exact rules.
"""

from __future__ import annotations

import enum
import math
import statistics
from collections.abc import Sequence

from .model import MarketStamp, SessionConfig, SignalState, Universe

# Consistency factor putting the median absolute deviation on the scale of
# a standard deviation for normal data (1 / Phi^-1(3/4), to 5 digits).
MAD_CONSISTENCY = 1.4826

# Sentinel substituted for missing values before ranking; sorts below any
# real signal, delta, or dollar amount.
RANK_SENTINEL = -9999.0

_ROOT3 = math.sqrt(3.0)
_ROOT7 = math.sqrt(7.0)
_ROOT11 = math.sqrt(11.0)


class DegenerateScale(ValueError):
    """The residual cross-section has no usable dispersion."""


class ScrambleDegenerate(ValueError):
    """Both candidate multipliers for an index round to zero."""


class ScaleEstimator(enum.Enum):
    """How the cross-sectional dispersion sigma is estimated."""

    # 1.4826 * median |e - median(e)|: robust to outliers, the default.
    MEDIAN_ABSOLUTE_DEVIATION = "median"
    # mean |e - mean(e)|: normalizes the mean absolute deviation of the
    # resulting unrounded signals to exactly 1.
    MEAN_ABSOLUTE_DEVIATION = "mean"


def round_half_away(value: float, digits: int) -> float:
    """Round to ``digits`` decimals, halves away from zero.

    Negative zero is normalized to plain zero so formatted output never
    shows "-0".
    """
    scale = 10.0 ** digits
    rounded = math.floor(abs(value) * scale + 0.5) / scale
    if rounded == 0.0:
        return 0.0
    return rounded if value >= 0 else -rounded


def clock_fraction(ssm: int, session: SessionConfig) -> float:
    """Fraction of the trading session elapsed at ``ssm``, clamped to [0, 1]."""
    span = session.close_ssm - session.open_ssm
    fraction = (ssm - session.open_ssm) / span
    return min(1.0, max(0.0, fraction))


def minutes_stamp(ssm: int, session: SessionConfig) -> MarketStamp:
    """Session stamp at ``ssm``: -1 after the close, 0 before the open,
    else minutes since the open rounded up."""
    if ssm >= session.close_ssm:
        return MarketStamp.from_value(-1)
    if ssm <= session.open_ssm:
        return MarketStamp.from_value(0)
    minutes = -(-(ssm - session.open_ssm) // 60)
    return MarketStamp.from_value(minutes)


def reference_price(close: float, high: float, low: float, t: float) -> float:
    """Blend of yesterday's close and today's mid-range.

    Early in the session the reference sits at the close; by the end it is
    the high/low midpoint.  A zero (unknown) close forces the blend all the
    way to the midpoint regardless of the clock.
    """
    if close == 0:
        t = 1.0
    return (1.0 - t) * close + t * (high + low) / 2.0


def raw_return(last: float, reference: float, weight: float) -> float | None:
    """Weighted log return of ``last`` against ``reference``.

    None when the ratio is not a positive finite number (zero or missing
    prices on either side).
    """
    if reference == 0:
        return None
    ratio = last / reference
    if not math.isfinite(ratio) or ratio <= 0:
        return None
    return weight * math.log(ratio)


def industry_demean(
    returns: Sequence[float | None], industries: Sequence[str]
) -> list[float | None]:
    """Subtract from each return the average over its industry group.

    Groups are keyed by the literal industry string, so unclassified
    tickers ("") form a group of their own.  The group average is the sum
    of its members' present returns divided by the count of those members;
    a group with no present returns contributes nothing (its average would
    be 0/0 and is treated as zero).  Missing returns stay missing.
    """
    sums: dict[str, float] = {}
    counts: dict[str, int] = {}
    for value, name in zip(returns, industries):
        if value is None:
            continue
        sums[name] = sums.get(name, 0.0) + value
        counts[name] = counts.get(name, 0) + 1

    residuals: list[float | None] = []
    for value, name in zip(returns, industries):
        if value is None:
            residuals.append(None)
        else:
            residuals.append(value - sums[name] / counts[name])
    return residuals


def scale(residuals: Sequence[float | None], estimator: ScaleEstimator) -> float:
    """Cross-sectional dispersion of the present residuals.

    Raises DegenerateScale when fewer than two residuals are present or
    when the estimate comes out exactly zero (all residuals identical).
    """
    present = [value for value in residuals if value is not None]
    if len(present) < 2:
        raise DegenerateScale(f"need at least 2 residuals, have {len(present)}")

    if estimator is ScaleEstimator.MEDIAN_ABSOLUTE_DEVIATION:
        center = statistics.median(present)
        sigma = MAD_CONSISTENCY * statistics.median([abs(v - center) for v in present])
    else:
        center = sum(present) / len(present)
        sigma = sum(abs(v - center) for v in present) / len(present)

    if sigma == 0.0:
        raise DegenerateScale("residual dispersion is zero")
    return sigma


def unrounded_signals(
    universe: Universe,
    ssm: int,
    session: SessionConfig,
    estimator: ScaleEstimator = ScaleEstimator.MEDIAN_ABSOLUTE_DEVIATION,
) -> list[float | None]:
    """Scaled residuals before rounding, one per ticker.

    Unclassified tickers are still included here (their residuals take
    part in the demeaning of the "" group and in the dispersion estimate);
    compute_signals blanks them afterwards.
    """
    t = clock_fraction(ssm, session)
    returns = [
        raw_return(
            record.last,
            reference_price(record.close, record.high, record.low, t),
            record.weight,
        )
        for record in universe
    ]
    residuals = industry_demean(returns, [record.industry for record in universe])
    sigma = scale(residuals, estimator)
    return [value / sigma if value is not None else None for value in residuals]


def compute_signals(
    universe: Universe,
    ssm: int,
    session: SessionConfig,
    estimator: ScaleEstimator = ScaleEstimator.MEDIAN_ABSOLUTE_DEVIATION,
) -> list[SignalState]:
    """Full per-cycle signal state for every ticker, in universe order."""
    if len(universe) == 0:
        raise ValueError("universe is empty")

    scaled = unrounded_signals(universe, ssm, session, estimator)

    signals: list[float | None] = []
    deltas: list[float | None] = []
    for record, value in zip(universe, scaled):
        if value is None or record.industry == "":
            signals.append(None)
            deltas.append(None)
            continue
        signal = round_half_away(value, 2)
        signals.append(signal)
        if record.prev_signal is None:
            deltas.append(None)
        else:
            deltas.append(round_half_away(abs(signal - record.prev_signal), 4))

    return _assemble_states(universe, signals, deltas)


def empty_signal_states(universe: Universe) -> list[SignalState]:
    """Signal states before any computation: everything missing.

    Ranks are still well-defined permutations; with all signals missing
    the signal rank degenerates to ascending market cap order.
    """
    if len(universe) == 0:
        raise ValueError("universe is empty")
    n = len(universe)
    return _assemble_states(universe, [None] * n, [None] * n)


def _assemble_states(
    universe: Universe, signals: list[float | None], deltas: list[float | None]
) -> list[SignalState]:
    signal_ranks = rank_signal([record.market_cap for record in universe], signals)
    delta_ranks = rank_delta(deltas)
    return [
        SignalState(
            signal=signal,
            delta=delta,
            signal_rank=signal_rank,
            delta_rank=delta_rank,
            scrambled=None if signal is None else scramble(signal, index),
        )
        for index, (signal, delta, signal_rank, delta_rank) in enumerate(
            zip(signals, deltas, signal_ranks, delta_ranks)
        )
    ]


def _fix(value: float | None) -> float:
    if value is None or not math.isfinite(value):
        return RANK_SENTINEL
    return float(value)


def rank_quant(values: Sequence[float | None], symbols: Sequence[str]) -> list[int]:
    """0-based ascending ranks of a dollar-amount column.

    Missing values sort first (sentinel).  Ties are broken by original
    position, except within the block of exact zeros, which is ordered
    alphabetically by symbol so that ranks of unknown amounts are stable
    across the day.
    """
    fixed = [_fix(value) for value in values]
    order = sorted(range(len(fixed)), key=lambda i: fixed[i])
    zero_slots = [slot for slot, i in enumerate(order) if fixed[i] == 0.0]
    if zero_slots:
        by_symbol = sorted((order[slot] for slot in zero_slots), key=lambda i: symbols[i])
        for slot, i in zip(zero_slots, by_symbol):
            order[slot] = i
    ranks = [0] * len(fixed)
    for position, i in enumerate(order):
        ranks[i] = position
    return ranks


def rank_signal(caps: Sequence[float | None], signals: Sequence[float | None]) -> list[int]:
    """0-based ascending ranks of |signal|, ties broken by market cap.

    Missing signals rank lowest.  Realized by pre-sorting on cap and then
    stable-sorting on |signal|, so cap ties fall back to original position.
    """
    fixed_caps = [_fix(value) for value in caps]
    fixed_signals = [RANK_SENTINEL if s is None else _fix(abs(s)) for s in signals]
    order = sorted(
        range(len(fixed_signals)),
        key=lambda i: (fixed_signals[i], fixed_caps[i], i),
    )
    ranks = [0] * len(order)
    for position, i in enumerate(order):
        ranks[i] = position
    return ranks


def rank_delta(deltas: Sequence[float | None]) -> list[int]:
    """0-based descending ranks of delta: the largest delta gets rank 0.

    Missing deltas get the largest ranks, so they can never reach the
    flashing window.  Among equal deltas the later ticker ranks first
    (descending rank is the mirror of a stable ascending sort).
    """
    fixed = [_fix(value) for value in deltas]
    order = sorted(range(len(fixed)), key=lambda i: fixed[i])
    n = len(fixed)
    ranks = [0] * n
    for position, i in enumerate(order):
        ranks[i] = n - 1 - position
    return ranks


def index_multiplier(index: int) -> float:
    """Obfuscation multiplier for the ticker at 0-based position ``index``.

    A fixed pseudo-random-looking function of the position only, so any
    party knowing the map file order can undo it.  Falls back to a second
    formula when the first rounds to zero; both being zero at once has no
    known instance but is guarded anyway.
    """
    k = index + 2
    multiplier = round_half_away(math.sin(_ROOT3 * k + _ROOT7 * math.cos(_ROOT11 * k)), 2)
    if multiplier == 0.0:
        multiplier = round_half_away(math.cos(_ROOT3 * k + _ROOT7 * math.sin(_ROOT11 * k)), 2)
    if multiplier == 0.0:
        raise ScrambleDegenerate(f"no usable multiplier at index {index}")
    return multiplier


def scramble(signal: float, index: int) -> float:
    """Signal times the index multiplier.

    The product of a 2-decimal signal and a 2-decimal multiplier carries
    at most 4 decimals; rounding there just strips float dust.
    """
    return round_half_away(signal * index_multiplier(index), 4)


def descramble(scrambled: float, index: int) -> float:
    """Invert scramble: exact for any 2-decimal signal."""
    return round_half_away(scrambled / index_multiplier(index), 2)


def map_ranks(universe: Universe) -> tuple[list[int], list[int]]:
    """(market cap ranks, liquidity ranks) as published in the map file."""
    symbols = universe.symbols
    caps = [record.market_cap for record in universe]
    liqs = [record.liquidity for record in universe]
    return rank_quant(caps, symbols), rank_quant(liqs, symbols)
