"""Command line entry points: oneshot, serve, gen."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import codecs, feedgen, service
from .engine import ScaleEstimator
from .model import SessionConfig


def _estimator(name: str) -> ScaleEstimator:
    return ScaleEstimator(name)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--short-day",
        action="store_true",
        help="use the 1:00 PM close of a shortened session",
    )
    parser.add_argument(
        "--estimator",
        choices=[e.value for e in ScaleEstimator],
        default=ScaleEstimator.MEDIAN_ABSOLUTE_DEVIATION.value,
        help="dispersion estimator for the signal scale",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tickergrid",
        description="Intraday signal computation and grid publication",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    oneshot = commands.add_parser(
        "oneshot", help="run a single cycle on a snapshot file"
    )
    oneshot.add_argument("--input", default="mkt.data.txt", help="snapshot file to read")
    oneshot.add_argument("--out-dir", default=".", help="where the artifacts are written")
    oneshot.add_argument(
        "--ssm",
        type=int,
        default=None,
        help="pin the clock to this seconds-since-midnight value",
    )
    _add_common(oneshot)

    serve = commands.add_parser("serve", help="publish cycles and serve them over HTTP")
    serve.add_argument("--input", default=None, help="snapshot file or directory of snapshots")
    serve.add_argument("--gen", action="store_true", help="serve a generated synthetic day")
    serve.add_argument("--listen", default="127.0.0.1:8080", help="host:port to bind")
    serve.add_argument("--cycle", type=int, default=30, help="seconds between publishes")
    serve.add_argument("--seed", type=int, default=0, help="seed for --gen")
    serve.add_argument("--tickers", type=int, default=100, help="universe size for --gen")
    serve.add_argument(
        "--speed", type=float, default=1.0, help="clock acceleration (demos and tests)"
    )
    serve.add_argument(
        "--start-ssm",
        type=int,
        default=None,
        help="starting seconds-since-midnight for an accelerated clock",
    )
    _add_common(serve)

    gen = commands.add_parser("gen", help="write a synthetic day of snapshot files")
    gen.add_argument("--out-dir", default="feed", help="directory for the snapshot files")
    gen.add_argument("--tickers", type=int, default=100)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--interval", type=int, default=300, help="seconds between snapshots")
    gen.add_argument("--missing-industry", type=float, default=0.0, metavar="FRACTION")
    gen.add_argument("--zero-close", type=float, default=0.0, metavar="FRACTION")
    gen.add_argument("--short-day", action="store_true")
    return parser


def _cmd_oneshot(args: argparse.Namespace) -> int:
    session = SessionConfig.standard(short_day=args.short_day)
    clock = service.Clock()
    ssm = args.ssm if args.ssm is not None else int(clock.now())

    universe = codecs.parse_market_snapshot(Path(args.input).read_bytes())
    state = service.run_cycle(universe, ssm, None, session, _estimator(args.estimator))

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "m.txt").write_bytes(state.map_bytes)
    (out / "s.txt").write_bytes(state.signal_bytes)
    (out / "sig.delta.txt").write_bytes(state.sig_delta_bytes)
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    session = SessionConfig.standard(short_day=args.short_day)
    config = service.ServiceConfig(
        listen=args.listen,
        cycle_seconds=args.cycle,
        session=session,
        estimator=_estimator(args.estimator),
    )

    if args.gen:
        spec = feedgen.GenSpec(
            ticker_count=args.tickers,
            seed=args.seed,
            snapshot_interval=min(args.cycle, 300),
            session=session,
        )
        source = service.memory_source(feedgen.generate_day(spec))
    elif args.input is None:
        print("serve needs --input or --gen", file=sys.stderr)
        return 2
    elif Path(args.input).is_dir():
        source = service.memory_source(feedgen.load_day(args.input))
    else:
        source = service.file_source(args.input)

    if args.speed != 1.0:
        start = args.start_ssm if args.start_ssm is not None else session.open_ssm - 60
        clock: service.Clock = service.AcceleratedClock(start, args.speed)
    else:
        clock = service.Clock()

    service.serve(source, config, clock)
    return 0


def _cmd_gen(args: argparse.Namespace) -> int:
    spec = feedgen.GenSpec(
        ticker_count=args.tickers,
        seed=args.seed,
        snapshot_interval=args.interval,
        missing_industry_fraction=args.missing_industry,
        zero_close_fraction=args.zero_close,
        session=SessionConfig.standard(short_day=args.short_day),
    )
    written = feedgen.write_day(spec, args.out_dir)
    print(f"wrote {len(written)} snapshots to {args.out_dir}")
    return 0


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(levelname)s %(message)s")
    args = build_parser().parse_args(argv)
    handlers = {"oneshot": _cmd_oneshot, "serve": _cmd_serve, "gen": _cmd_gen}
    return handlers[args.command](args)


if __name__ == "__main__":
    raise SystemExit(main())
