import time

import pytest

from tickergrid.feedgen import (
    BadSpec,
    EmptyDir,
    GenSpec,
    ParseError,
    base_universe,
    generate_day,
    load_day,
    replay,
    write_day,
)
from tickergrid.model import SessionConfig


SPEC = GenSpec(ticker_count=30, seed=7, missing_industry_fraction=0.1,
               zero_close_fraction=0.1)


class TestGenSpec:
    @pytest.mark.parametrize(
        "kwargs",
        [
            {"ticker_count": 1},
            {"industries_per_cluster": 0},
            {"volatility": 0.0},
            {"snapshot_interval": 0},
            {"missing_industry_fraction": 1.5},
            {"zero_close_fraction": -0.1},
        ],
    )
    def test_bad_specs(self, kwargs):
        with pytest.raises(BadSpec):
            GenSpec(**kwargs)


class TestBaseUniverse:
    def test_deterministic(self):
        assert base_universe(SPEC) == base_universe(SPEC)

    def test_seed_changes_everything(self):
        other = GenSpec(ticker_count=30, seed=8, missing_industry_fraction=0.1,
                        zero_close_fraction=0.1)
        assert base_universe(SPEC) != base_universe(other)

    def test_fractions_realized_exactly(self):
        universe = base_universe(SPEC)
        assert sum(1 for r in universe if r.industry == "") == 3
        assert sum(1 for r in universe if r.close == 0.0) == 3

    def test_zero_close_tickers_still_price(self):
        universe = base_universe(SPEC)
        for record in universe:
            if record.close == 0.0:
                assert record.last > 0.0
                assert record.high == record.low == record.last

    def test_attributes_in_range(self):
        universe = base_universe(SPEC)
        for record in universe:
            assert 0 <= record.cluster <= 9
            assert 0 <= record.exchange <= 2
            assert record.market_cap == int(record.market_cap) >= 10**7
            assert record.liquidity == int(record.liquidity) >= 10**5
            assert record.weight == 1.0
            assert record.prev_signal is None
            if record.industry:
                assert record.industry == f"IND{record.cluster}X{record.industry[-1]}"

    def test_industries_shared_within_cluster(self):
        universe = base_universe(GenSpec(ticker_count=200, seed=3))
        names = {r.industry for r in universe}
        # 200 tickers over at most 30 industries: heavy sharing.
        assert 10 <= len(names) <= 30


class TestGenerateDay:
    def test_snapshot_times_cover_the_session(self):
        times = [ssm for ssm, _ in generate_day(SPEC)]
        assert times[0] == 34200
        assert times[-1] == 57600
        assert times == sorted(times)
        assert all(later - earlier == 300 for earlier, later in zip(times, times[1:]))

    def test_ragged_interval_still_ends_at_close(self):
        spec = GenSpec(ticker_count=5, seed=1, snapshot_interval=7000)
        times = [ssm for ssm, _ in generate_day(spec)]
        assert times == [34200, 41200, 48200, 55200, 57600]

    def test_short_day(self):
        spec = GenSpec(ticker_count=5, seed=1,
                       session=SessionConfig.standard(short_day=True))
        times = [ssm for ssm, _ in generate_day(spec)]
        assert times[-1] == 46800

    def test_first_snapshot_sits_at_the_start_price(self):
        first = generate_day(SPEC)[0][1]
        for record in first:
            assert record.last == record.high == record.low

    def test_envelope_tracks_the_walk_exactly(self):
        snapshots = generate_day(SPEC)
        n = len(snapshots[0][1])
        for i in range(n):
            seen = [universe.tickers[i].last for _, universe in snapshots]
            for position, (_, universe) in enumerate(snapshots):
                record = universe.tickers[i]
                assert record.high == max(seen[: position + 1])
                assert record.low == min(seen[: position + 1])

    def test_prices_move(self):
        snapshots = generate_day(SPEC)
        first, last = snapshots[0][1], snapshots[-1][1]
        moved = sum(
            1 for a, b in zip(first, last) if a.last != b.last
        )
        assert moved == len(first)

    def test_industry_comovement_beats_cross_industry(self):
        # Common shocks should push same-industry tickers the same way
        # more often than unrelated ones.
        spec = GenSpec(ticker_count=120, seed=11)
        snapshots = generate_day(spec)
        records = snapshots[0][1].tickers
        steps = []
        for (_, before), (_, after) in zip(snapshots, snapshots[1:]):
            steps.append(
                [b.last / a.last - 1.0 for a, b in zip(before, after)]
            )
        same = disjoint = 0
        same_n = disjoint_n = 0
        for i in range(0, 40):
            for j in range(i + 1, 40):
                agree = sum(
                    1 for step in steps if (step[i] > 0) == (step[j] > 0)
                )
                if records[i].industry == records[j].industry:
                    same += agree
                    same_n += 1
                else:
                    disjoint += agree
                    disjoint_n += 1
        assert same_n > 0 and disjoint_n > 0
        assert same / same_n > disjoint / disjoint_n

    def test_deterministic(self):
        assert generate_day(SPEC) == generate_day(SPEC)


class TestWriteLoadReplay:
    def test_round_trip(self, tmp_path):
        paths = write_day(SPEC, tmp_path)
        assert [p.name for p in paths][:2] == ["mkt.data.093000.txt", "mkt.data.093500.txt"]
        assert paths[-1].name == "mkt.data.160000.txt"
        loaded = load_day(tmp_path)
        assert loaded == generate_day(SPEC)

    def test_load_ignores_unrelated_files(self, tmp_path):
        write_day(SPEC, tmp_path)
        (tmp_path / "README").write_text("notes\n")
        (tmp_path / "mkt.data.996100.txt").write_text("not a timestamp")
        loaded = load_day(tmp_path)
        assert len(loaded) == len(generate_day(SPEC))

    def test_load_reports_broken_file(self, tmp_path):
        write_day(GenSpec(ticker_count=5, seed=2), tmp_path)
        (tmp_path / "mkt.data.120000.txt").write_text("Ticker\tjunk\nAAA")
        with pytest.raises(ParseError, match="mkt.data.120000.txt"):
            load_day(tmp_path)

    def test_load_empty_dir(self, tmp_path):
        with pytest.raises(EmptyDir):
            load_day(tmp_path)

    def test_replay_order_and_content(self, tmp_path):
        write_day(SPEC, tmp_path)
        streamed = list(replay(tmp_path))
        assert streamed == generate_day(SPEC)

    def test_replay_speed_zero_is_instant(self, tmp_path):
        write_day(GenSpec(ticker_count=5, seed=2), tmp_path)
        begin = time.monotonic()
        list(replay(tmp_path, speed=0.0))
        assert time.monotonic() - begin < 5.0

    def test_replay_paces_by_speed(self, tmp_path):
        write_day(GenSpec(ticker_count=5, seed=2, snapshot_interval=11700), tmp_path)
        begin = time.monotonic()
        count = len(list(replay(tmp_path, speed=100000.0)))
        elapsed = time.monotonic() - begin
        # Two gaps of 11700 recorded seconds replay in about a quarter
        # second at 100000x.
        assert count == 3
        assert 0.1 <= elapsed <= 2.0

    def test_negative_speed_rejected(self, tmp_path):
        with pytest.raises(BadSpec):
            list(replay(tmp_path, speed=-1.0))
