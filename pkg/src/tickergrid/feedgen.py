"""Synthetic market day generation and snapshot replay.

generate_day produces a seeded, fully deterministic sequence of snapshot
universes: per-industry common shocks plus idiosyncratic noise drive a
random walk of last prices, with highs and lows tracking the running
envelope.  replay streams previously recorded snapshot files in
timestamp order at a configurable speed.
"""

from __future__ import annotations

import math
import re
import string
import time
from collections.abc import Iterator
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import codecs
from .model import CLUSTER_NAMES, EXCHANGE_NAMES, SessionConfig, TickerRecord, Universe


class BadSpec(ValueError):
    """Generation parameters are unusable."""


class EmptyDir(ValueError):
    """A replay directory contains no snapshot files."""


class ParseError(ValueError):
    """A replay snapshot file failed to parse; names the file."""


# Snapshot files are named <anything>.<HHMMSS>.txt.
_SNAPSHOT_NAME = re.compile(r"\.(\d{6})\.txt$")


@dataclass(frozen=True)
class GenSpec:
    ticker_count: int = 100
    industries_per_cluster: int = 3
    seed: int = 0
    # Industry shock and idiosyncratic noise scale per snapshot step.
    volatility: float = 0.002
    snapshot_interval: int = 300
    missing_industry_fraction: float = 0.0
    zero_close_fraction: float = 0.0
    session: SessionConfig = SessionConfig()

    def __post_init__(self) -> None:
        if self.ticker_count < 2:
            raise BadSpec("need at least 2 tickers")
        if self.industries_per_cluster < 1:
            raise BadSpec("need at least 1 industry per cluster")
        if self.volatility <= 0:
            raise BadSpec("volatility must be positive")
        if self.snapshot_interval <= 0:
            raise BadSpec("snapshot interval must be positive")
        for name in ("missing_industry_fraction", "zero_close_fraction"):
            fraction = getattr(self, name)
            if not 0.0 <= fraction <= 1.0:
                raise BadSpec(f"{name} must be within [0, 1]")


def _symbols(count: int, rng: np.random.Generator) -> list[str]:
    # Enumerate AA, AB, ... deterministically, then shuffle for variety.
    letters = string.ascii_uppercase
    pool = []
    width = 2
    while len(pool) < count:
        pool = []
        for i in range(26 ** width):
            name = ""
            v = i
            for _ in range(width):
                name = letters[v % 26] + name
                v //= 26
            pool.append(name)
            if len(pool) >= count:
                break
        width += 1
    rng.shuffle(pool)
    return pool[:count]


def base_universe(spec: GenSpec) -> Universe:
    """The day's fixed per-ticker attributes, with prices at yesterday's close."""
    rng = np.random.default_rng(spec.seed)
    n = spec.ticker_count
    symbols = _symbols(n, rng)

    clusters = rng.integers(0, len(CLUSTER_NAMES), size=n)
    exchanges = rng.integers(0, len(EXCHANGE_NAMES), size=n)
    industry_slots = rng.integers(0, spec.industries_per_cluster, size=n)
    caps = np.floor(10 ** rng.uniform(7.0, 12.0, size=n))
    liqs = np.floor(10 ** rng.uniform(5.0, 9.5, size=n))
    closes = np.round(10 ** rng.uniform(0.7, 2.7, size=n), 2)

    missing_industry = int(round(spec.missing_industry_fraction * n))
    zero_close = int(round(spec.zero_close_fraction * n))
    special = rng.permutation(n)
    blank_industry_at = set(special[:missing_industry].tolist())
    zero_close_at = set(special[missing_industry:missing_industry + zero_close].tolist())

    records = []
    for i in range(n):
        industry = "" if i in blank_industry_at else f"IND{clusters[i]}X{industry_slots[i]}"
        close = 0.0 if i in zero_close_at else float(closes[i])
        # The walk starts at the close even when the file carries close=0.
        start = float(closes[i])
        records.append(
            TickerRecord(
                symbol=symbols[i],
                cluster=int(clusters[i]),
                exchange=int(exchanges[i]),
                market_cap=float(caps[i]),
                liquidity=float(liqs[i]),
                close=close,
                last=start,
                high=start,
                low=start,
                weight=1.0,
                industry=industry,
                prev_signal=None,
            )
        )
    return Universe(tuple(records))


def generate_day(spec: GenSpec) -> list[tuple[int, Universe]]:
    """Snapshots from the open to the close, one every snapshot interval.

    The first snapshot sits exactly at the open with last = starting
    price; each later one advances every last price by an industry shock
    plus idiosyncratic noise, and highs/lows track the walk's envelope.
    The Signal column stays empty: previous signals are chained in by
    whoever runs the cycles.
    """
    base = base_universe(spec)
    rng = np.random.default_rng(spec.seed + 1)
    n = len(base)

    industries = sorted({record.industry for record in base})
    position_of = {name: k for k, name in enumerate(industries)}
    factor_of = np.array([position_of[record.industry] for record in base])

    lasts = np.array([record.last for record in base])
    highs = lasts.copy()
    lows = lasts.copy()

    session = spec.session
    times = list(range(session.open_ssm, session.close_ssm + 1, spec.snapshot_interval))
    if times[-1] != session.close_ssm:
        times.append(session.close_ssm)

    snapshots = []
    for position, ssm in enumerate(times):
        if position > 0:
            shocks = rng.normal(0.0, spec.volatility, size=len(industries))
            noise = rng.normal(0.0, spec.volatility, size=n)
            # Walk on 4-decimal prices so the high/low envelope is exact
            # on the values that end up in the files.
            lasts = np.round(lasts * np.exp(shocks[factor_of] + noise), 4)
            highs = np.maximum(highs, lasts)
            lows = np.minimum(lows, lasts)
        records = tuple(
            TickerRecord(
                symbol=record.symbol,
                cluster=record.cluster,
                exchange=record.exchange,
                market_cap=record.market_cap,
                liquidity=record.liquidity,
                close=record.close,
                last=float(lasts[i]),
                high=float(highs[i]),
                low=float(lows[i]),
                weight=record.weight,
                industry=record.industry,
                prev_signal=None,
            )
            for i, record in enumerate(base)
        )
        snapshots.append((ssm, Universe(records)))
    return snapshots


def write_day(spec: GenSpec, out_dir: str | Path) -> list[Path]:
    """Write a generated day as snapshot files a replay can stream."""
    directory = Path(out_dir)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for ssm, universe in generate_day(spec):
        name = f"mkt.data.{ssm // 3600:02d}{ssm % 3600 // 60:02d}{ssm % 60:02d}.txt"
        path = directory / name
        path.write_bytes(codecs.write_market_snapshot(universe))
        written.append(path)
    return written


def _snapshot_ssm(path: Path) -> int | None:
    match = _SNAPSHOT_NAME.search(path.name)
    if match is None:
        return None
    stamp = match.group(1)
    hh, mm, ss = int(stamp[:2]), int(stamp[2:4]), int(stamp[4:])
    if hh >= 24 or mm >= 60 or ss >= 60:
        return None
    return hh * 3600 + mm * 60 + ss


def load_day(directory: str | Path) -> list[tuple[int, Universe]]:
    """Parse every snapshot file in a directory, ordered by its timestamp."""
    found = []
    for path in Path(directory).iterdir():
        ssm = _snapshot_ssm(path)
        if ssm is None:
            continue
        try:
            universe = codecs.parse_market_snapshot(path.read_bytes())
        except ValueError as err:
            raise ParseError(f"{path.name}: {err}") from err
        found.append((ssm, universe))
    if not found:
        raise EmptyDir(f"no snapshot files in {directory}")
    found.sort(key=lambda pair: pair[0])
    return found


def replay(
    directory: str | Path, speed: float = 0.0
) -> Iterator[tuple[int, Universe]]:
    """Yield recorded snapshots in timestamp order.

    With a positive ``speed`` the iterator sleeps between snapshots for
    the recorded gap divided by ``speed``; with speed 0 (or infinity) it
    yields immediately.
    """
    if speed < 0:
        raise BadSpec("speed must be >= 0")
    snapshots = load_day(directory)
    previous_ssm: int | None = None
    for ssm, universe in snapshots:
        if previous_ssm is not None and speed > 0 and math.isfinite(speed):
            time.sleep((ssm - previous_ssm) / speed)
        previous_ssm = ssm
        yield ssm, universe
