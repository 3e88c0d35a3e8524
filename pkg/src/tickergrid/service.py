"""Publication service: recompute on a 30-second grid, serve over HTTP.

A single publisher thread computes the artifact triple (map file, signal
line, signal/delta table) and swaps it in atomically as one immutable
PublishedState; any number of HTTP reader threads serve whatever state is
current.  Publishes align to :00/:30 of the wall clock so clients polling
at :12/:42 always see fresh data.

The clock is injectable so tests (and the oneshot command) can pin or
accelerate time; all times are seconds since midnight.
"""

from __future__ import annotations

import dataclasses
import logging
import math
import threading
import time
from collections.abc import Callable
from dataclasses import dataclass
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from . import codecs, engine
from .model import MarketStatus, SessionConfig, SignalState, Universe

log = logging.getLogger(__name__)

# Where publishes land within each minute, in seconds.
PUBLISH_GRID_SECONDS = 30


class Clock:
    """Wall clock in seconds since local midnight."""

    def now(self) -> float:
        local = time.localtime()
        return local.tm_hour * 3600 + local.tm_min * 60 + local.tm_sec + time.time() % 1

    def wait(self, seconds: float, stop: threading.Event) -> None:
        """Sleep for clock-seconds (interruptible via ``stop``)."""
        if seconds > 0:
            stop.wait(seconds)


class AcceleratedClock(Clock):
    """Simulated clock running at ``speed`` times real time from ``start_ssm``."""

    def __init__(self, start_ssm: float, speed: float):
        if speed <= 0:
            raise ValueError("speed must be positive")
        self.start_ssm = start_ssm
        self.speed = speed
        self._origin = time.monotonic()

    def now(self) -> float:
        return self.start_ssm + (time.monotonic() - self._origin) * self.speed

    def wait(self, seconds: float, stop: threading.Event) -> None:
        if seconds > 0:
            stop.wait(seconds / self.speed)


@dataclass(frozen=True)
class ServiceConfig:
    listen: str = "127.0.0.1:8080"
    cycle_seconds: int = PUBLISH_GRID_SECONDS
    session: SessionConfig = SessionConfig()
    estimator: engine.ScaleEstimator = engine.ScaleEstimator.MEDIAN_ABSOLUTE_DEVIATION

    def host_port(self) -> tuple[str, int]:
        host, _, port = self.listen.rpartition(":")
        return host or "127.0.0.1", int(port)


@dataclass(frozen=True)
class PublishedState:
    """One atomic artifact triple; readers never see a partial cycle."""

    map_bytes: bytes
    signal_bytes: bytes
    sig_delta_bytes: bytes
    generation: int
    published_at: float


def publication_schedule(now: float, period: int = PUBLISH_GRID_SECONDS) -> float:
    """Next publish instant at or after ``now`` on the publish grid."""
    cycles = math.floor(now / period)
    if cycles * period == now:
        return now
    return float((cycles + 1) * period)


def _stamp_of(state: PublishedState) -> int:
    token, _, _ = state.signal_bytes.decode("utf-8").partition(",")
    return int(token)


def _previous_signals(state: PublishedState) -> dict[str, float | None]:
    return {
        row.symbol: row.signal for row in codecs.parse_sig_delta(state.sig_delta_bytes)
    }


def _states_of(state: PublishedState) -> list[SignalState]:
    return [
        SignalState(
            signal=row.signal,
            delta=row.delta,
            signal_rank=row.signal_rank,
            delta_rank=row.delta_rank,
            scrambled=row.scrambled,
        )
        for row in codecs.parse_sig_delta(state.sig_delta_bytes)
    ]


def run_cycle(
    universe: Universe,
    now_ssm: int,
    prev_state: PublishedState | None,
    session: SessionConfig,
    estimator: engine.ScaleEstimator = engine.ScaleEstimator.MEDIAN_ABSOLUTE_DEVIATION,
) -> PublishedState:
    """Compute the artifact triple for one cycle.

    The previous cycle's signals (parsed back out of its signal/delta
    table) replace the snapshot's Signal column, the map file is reused
    once written (it is fixed for the trading day, as is the universe
    order), and a closed stamp is absorbing: after the close the last
    artifacts keep being served with stamp -1.

    May raise DegenerateScale; the caller decides whether to keep the
    previous state.
    """
    generation = 0 if prev_state is None else prev_state.generation + 1

    if prev_state is not None and _stamp_of(prev_state) == -1:
        return dataclasses.replace(
            prev_state, generation=generation, published_at=float(now_ssm)
        )

    stamp = engine.minutes_stamp(now_ssm, session)

    if stamp.status is MarketStatus.OPEN:
        if prev_state is not None:
            carried = _previous_signals(prev_state)
            universe = Universe(
                tuple(
                    dataclasses.replace(
                        record, prev_signal=carried.get(record.symbol)
                    )
                    for record in universe
                )
            )
        states = engine.compute_signals(universe, now_ssm, session, estimator)
        sig_delta = codecs.write_sig_delta(universe, states)
    elif stamp.status is MarketStatus.CLOSED and prev_state is not None:
        # First cycle after the close: restamp the last computed signals.
        states = _states_of(prev_state)
        sig_delta = prev_state.sig_delta_bytes
    else:
        # Pre-open, or closed with nothing ever computed.
        states = engine.empty_signal_states(universe)
        sig_delta = codecs.write_sig_delta(universe, states)

    if prev_state is not None:
        map_bytes = prev_state.map_bytes
    else:
        cap_ranks, liq_ranks = engine.map_ranks(universe)
        map_bytes = codecs.write_map_file(universe, cap_ranks, liq_ranks)

    return PublishedState(
        map_bytes=map_bytes,
        signal_bytes=codecs.write_signal_file(stamp, states),
        sig_delta_bytes=sig_delta,
        generation=generation,
        published_at=float(now_ssm),
    )


def file_source(path: str) -> Callable[[int], Universe]:
    """Snapshot source that re-reads one snapshot file every cycle."""

    def read(_ssm: int) -> Universe:
        with open(path, "rb") as handle:
            return codecs.parse_market_snapshot(handle.read())

    return read


def memory_source(snapshots: list[tuple[int, Universe]]) -> Callable[[int], Universe]:
    """Snapshot source backed by a pre-generated day.

    Serves the latest snapshot at or before the requested time (the first
    one when asked earlier than all of them).
    """
    if not snapshots:
        raise ValueError("no snapshots")
    ordered = sorted(snapshots, key=lambda pair: pair[0])

    def pick(ssm: int) -> Universe:
        chosen = ordered[0][1]
        for snap_ssm, universe in ordered:
            if snap_ssm > ssm:
                break
            chosen = universe
        return chosen

    return pick


class SignalService:
    """Owns the publish loop and the latest PublishedState."""

    def __init__(
        self,
        source: Callable[[int], Universe],
        config: ServiceConfig,
        clock: Clock | None = None,
        on_publish: Callable[[PublishedState], None] | None = None,
    ):
        self.source = source
        self.config = config
        self.clock = clock if clock is not None else Clock()
        self.on_publish = on_publish
        self.published: PublishedState | None = None
        self._stop = threading.Event()

    def publish_once(self) -> PublishedState | None:
        """Run one cycle; on a degenerate cross-section keep the last state."""
        now = int(self.clock.now())
        try:
            universe = self.source(now)
            state = run_cycle(
                universe, now, self.published, self.config.session, self.config.estimator
            )
        except engine.DegenerateScale as err:
            log.warning("cycle skipped, keeping previous state: %s", err)
            return self.published
        self.published = state
        if self.on_publish is not None:
            self.on_publish(state)
        return state

    def publish_loop(self) -> None:
        """Publish on the grid until stopped."""
        while not self._stop.is_set():
            target = publication_schedule(self.clock.now(), self.config.cycle_seconds)
            while not self._stop.is_set():
                remaining = target - self.clock.now()
                if remaining <= 0:
                    break
                self.clock.wait(remaining, self._stop)
            if self._stop.is_set():
                break
            self.publish_once()
            # Never publish twice on one grid instant.
            while self.clock.now() < target + 1 and not self._stop.is_set():
                self.clock.wait(1.0, self._stop)

    def stop(self) -> None:
        self._stop.set()

    def make_server(self, host: str | None = None, port: int | None = None) -> ThreadingHTTPServer:
        cfg_host, cfg_port = self.config.host_port()
        server = ThreadingHTTPServer(
            (host if host is not None else cfg_host, port if port is not None else cfg_port),
            _Handler,
        )
        server.service = self  # type: ignore[attr-defined]
        return server


class _Handler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"

    def do_GET(self) -> None:  # noqa: N802 (fixed by BaseHTTPRequestHandler)
        service: SignalService = self.server.service  # type: ignore[attr-defined]
        path = self.path.partition("?")[0]  # cache busters like ?r=123 are ignored

        if path == "/t":
            ssm = int(service.clock.now()) % 86400
            body = f"{ssm // 3600:02d}:{ssm % 3600 // 60:02d}:{ssm % 60:02d}".encode()
            self._reply(200, body)
            return

        if path in ("/m.txt", "/s.txt"):
            state = service.published
            if state is None:
                self._reply(503, b"no data published yet")
                return
            self._reply(200, state.map_bytes if path == "/m.txt" else state.signal_bytes)
            return

        self._reply(404, b"not found")

    def _reply(self, status: int, body: bytes) -> None:
        self.send_response(status)
        self.send_header("Content-Type", "text/plain; charset=utf-8")
        self.send_header("Content-Length", str(len(body)))
        # Clients poll; intermediaries must never serve a stale cycle.
        self.send_header("Cache-Control", "no-store, no-cache, must-revalidate")
        self.send_header("Pragma", "no-cache")
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(body)

    def log_message(self, fmt: str, *args: object) -> None:
        log.debug("http: " + fmt, *args)


def serve(
    source: Callable[[int], Universe],
    config: ServiceConfig,
    clock: Clock | None = None,
) -> None:
    """Run the publisher and the HTTP server until interrupted."""
    service = SignalService(source, config, clock)
    server = service.make_server()
    publisher = threading.Thread(target=service.publish_loop, name="publisher", daemon=True)
    publisher.start()
    host, port = server.server_address[:2]
    log.info("serving on %s:%s", host, port)
    try:
        server.serve_forever()
    finally:
        service.stop()
        server.server_close()
