"""Shared fixtures and universe builders."""

from __future__ import annotations

import math
import random

import pytest

from tickergrid.model import SessionConfig, TickerRecord, Universe


@pytest.fixture
def session() -> SessionConfig:
    return SessionConfig.standard()


def make_record(symbol: str = "AAA", **overrides) -> TickerRecord:
    base = dict(
        symbol=symbol,
        cluster=0,
        exchange=0,
        market_cap=1_000_000_000.0,
        liquidity=10_000_000.0,
        close=50.0,
        last=50.5,
        high=51.0,
        low=49.5,
        weight=1.0,
        industry="WIDGETS",
        prev_signal=None,
    )
    base.update(overrides)
    return TickerRecord(**base)


def random_symbols(rng: random.Random, count: int) -> list[str]:
    alphabet = "ABCDEFGHIJKLMNOPQRSTUVWXYZ."
    seen: set[str] = set()
    while len(seen) < count:
        length = rng.randint(1, 6)
        name = "".join(rng.choice(alphabet) for _ in range(length))
        # A symbol of only dots is legal but unreadable in failures.
        if name.strip(".") == "":
            continue
        seen.add(name)
    return sorted(seen, key=lambda _: rng.random())


def random_universe(
    rng: random.Random,
    count: int,
    industries: int = 4,
    missing_industry: float = 0.1,
    zero_close: float = 0.1,
    zero_last: float = 0.05,
    prev_signal: float = 0.6,
    varied_weights: bool = True,
) -> Universe:
    """A universe exercising the awkward paths: blank industries, zero
    closes and lasts, repeated and zero dollar amounts."""
    symbols = random_symbols(rng, count)
    records = []
    for symbol in symbols:
        close = round(rng.uniform(5.0, 500.0), 2)
        drift = math.exp(rng.gauss(0.0, 0.01))
        last = round(close * drift, 4)
        high = round(max(close, last) * math.exp(abs(rng.gauss(0, 0.004))), 4)
        low = round(min(close, last) / math.exp(abs(rng.gauss(0, 0.004))), 4)
        records.append(
            TickerRecord(
                symbol=symbol,
                cluster=rng.randrange(10),
                exchange=rng.randrange(3),
                market_cap=float(rng.choice([0, rng.randrange(10**7, 10**12)]))
                if rng.random() < 0.15
                else float(rng.randrange(10**7, 10**12)),
                liquidity=float(rng.randrange(10**5, 10**10)),
                close=0.0 if rng.random() < zero_close else close,
                last=0.0 if rng.random() < zero_last else last,
                high=high,
                low=low,
                weight=round(rng.uniform(0.5, 2.0), 4) if varied_weights else 1.0,
                industry=""
                if rng.random() < missing_industry
                else f"GRP{rng.randrange(industries)}",
                prev_signal=round(rng.uniform(-3, 3), 2)
                if rng.random() < prev_signal
                else None,
            )
        )
    return Universe(tuple(records))


def oracle_rows(universe: Universe) -> list[dict]:
    """Plain-dict mirror of a universe for the brute-force oracle."""
    return [
        {
            "close": record.close,
            "high": record.high,
            "low": record.low,
            "last": record.last,
            "weight": record.weight,
            "industry": record.industry,
            "prev_signal": record.prev_signal,
        }
        for record in universe
    ]


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One pass/fail line per acceptance criterion, after the run."""
    import sys

    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if not results:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for name, ok, detail in results:
        verdict = "PASS" if ok else "FAIL"
        suffix = f": {detail}" if detail else ""
        terminalreporter.write_line(f"{verdict} {name}{suffix}")
