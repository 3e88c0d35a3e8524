"""Regenerate the browser client's conformance fixtures.

Each case directory holds the wire artifacts of one cycle (m.txt, s.txt,
sig.delta.txt), the panel configuration as JSON, and the expected grid
assignment exported by the view module.  The client test suite recomputes
the assignment from the wire artifacts alone and compares.

Run from the repository root:

    python3 scripts/make_view_fixtures.py --out-dir frontend/tests/fixtures
"""

import argparse
import json
import math
import shutil
from pathlib import Path

from tickergrid import engine
from tickergrid.codecs import parse_sig_delta
from tickergrid.feedgen import GenSpec, generate_day
from tickergrid.model import SessionConfig, SignalState
from tickergrid.service import run_cycle
from tickergrid.view import TierParam, ViewConfig, export_view_fixture

REPO = Path(__file__).resolve().parent.parent
GOLDEN = REPO / "tests" / "data"


def states_of(sig_delta: bytes) -> list[SignalState]:
    return [
        SignalState(
            signal=row.signal,
            delta=row.delta,
            signal_rank=row.signal_rank,
            delta_rank=row.delta_rank,
            scrambled=row.scrambled,
        )
        for row in parse_sig_delta(sig_delta)
    ]


def config_json(config: ViewConfig, cell_capacity: int | None) -> str:
    def bound(value: float) -> float | None:
        return None if math.isinf(value) else value

    return json.dumps(
        {
            "rowParam": config.row_param.value if config.row_param else None,
            "colParam": config.col_param.value if config.col_param else None,
            "selectedClusters": sorted(config.selected_clusters),
            "selectedExchanges": sorted(config.selected_exchanges),
            "liquidityRange": [config.liquidity_range[0], bound(config.liquidity_range[1])],
            "marketCapRange": [config.market_cap_range[0], bound(config.market_cap_range[1])],
            "liquidityTiers": config.liquidity_tiers,
            "marketCapTiers": config.market_cap_tiers,
            "signalMin": config.signal_min,
            "flashCount": config.flash_count,
            "cellCapacity": cell_capacity,
        },
        indent=2,
    )


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument(
        "--out-dir", default=str(REPO / "frontend" / "tests" / "fixtures")
    )
    args = parser.parse_args()
    out = Path(args.out_dir)

    session = SessionConfig.standard()
    day = generate_day(
        GenSpec(
            ticker_count=48,
            seed=12,
            missing_industry_fraction=0.1,
            zero_close_fraction=0.05,
        )
    )
    first = run_cycle(day[1][1], day[1][0], None, session)
    second = run_cycle(day[2][1], day[2][0], first, session)
    gen_universe = day[2][1]
    gen_states = states_of(second.sig_delta_bytes)

    # The committed 20-ticker artifacts exercise missing signals and the
    # zero-amount rank block; regenerate the states they encode.
    golden_states = states_of((GOLDEN / "golden.sig.delta.txt").read_bytes())
    from tickergrid.codecs import parse_market_snapshot

    golden_universe = parse_market_snapshot((GOLDEN / "mkt.data.txt").read_bytes())

    cases = [
        (
            "golden20-default",
            golden_universe,
            golden_states,
            None,
            ViewConfig(),
            None,
        ),
        (
            "golden20-signalmin",
            golden_universe,
            golden_states,
            None,
            ViewConfig(signal_min=1.25, flash_count=0),
            None,
        ),
        (
            "gen48-clusters-exchanges",
            gen_universe,
            gen_states,
            second,
            ViewConfig(
                row_param=TierParam.CLUSTERS,
                col_param=TierParam.EXCHANGES,
                selected_clusters=frozenset({0, 2, 3, 5, 7, 8, 9}),
                selected_exchanges=frozenset({0, 1}),
            ),
            None,
        ),
        (
            "gen48-quantiles",
            gen_universe,
            gen_states,
            second,
            ViewConfig(
                row_param=TierParam.LIQUIDITY,
                col_param=TierParam.MARKET_CAP,
                liquidity_tiers=3,
                market_cap_tiers=4,
                # Both tiered, so these ranges must be ignored entirely.
                liquidity_range=(1e12, 2e12),
                market_cap_range=(1e12, 2e12),
            ),
            None,
        ),
        (
            "gen48-range-filter",
            gen_universe,
            gen_states,
            second,
            ViewConfig(
                row_param=TierParam.MARKET_CAP,
                market_cap_tiers=2,
                liquidity_range=(1e6, 5e7),
                signal_min=0.5,
                flash_count=25,
            ),
            3,
        ),
        (
            "gen48-flash0",
            gen_universe,
            gen_states,
            second,
            ViewConfig(flash_count=0, liquidity_range=(0.0, math.inf)),
            None,
        ),
    ]

    for name, universe, states, published, config, capacity in cases:
        case_dir = out / name
        case_dir.mkdir(parents=True, exist_ok=True)
        if published is None:
            shutil.copyfile(GOLDEN / "golden.m.txt", case_dir / "m.txt")
            shutil.copyfile(GOLDEN / "golden.s.txt", case_dir / "s.txt")
            shutil.copyfile(GOLDEN / "golden.sig.delta.txt", case_dir / "sig.delta.txt")
        else:
            (case_dir / "m.txt").write_bytes(published.map_bytes)
            (case_dir / "s.txt").write_bytes(published.signal_bytes)
            (case_dir / "sig.delta.txt").write_bytes(published.sig_delta_bytes)
        (case_dir / "config.json").write_text(config_json(config, capacity) + "\n")
        (case_dir / "expected.txt").write_bytes(
            export_view_fixture(universe, states, config, capacity)
        )
        print(f"wrote {case_dir}")

    # Scramble multipliers for the client's pinned-value test.
    table = {str(i): engine.index_multiplier(i) for i in (0, 1, 2, 3, 4, 5, 644)}
    (out / "multipliers.json").write_text(json.dumps(table, indent=2) + "\n")
    print(f"wrote {out / 'multipliers.json'}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
