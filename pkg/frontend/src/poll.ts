/**
 * The polling protocol: anchor once on the server clock, then fetch the
 * signal line a few seconds after each half-minute publish instant.
 */

export const POLL_PERIOD_MS = 30_000;

/**
 * Seconds to wait before the next signal fetch, given the server clock's
 * seconds-of-minute. Targets :12 and :42, never sooner than 5 seconds
 * out (a tighter target waits for the following slot).
 */
export function pollDelay(seconds: number): number {
  let delay: number;
  if (seconds < 12) {
    delay = 12 - seconds;
  } else if (seconds < 42) {
    delay = 42 - seconds;
  } else {
    delay = 72 - seconds;
  }
  if (delay < 5) delay += 30;
  return delay;
}

/** Seconds-of-minute from a HH:MM:SS clock body. */
export function clockSeconds(text: string): number {
  const token = text.trim().slice(-2);
  const seconds = Number(token);
  if (!/^\d{1,2}$/.test(token) || seconds > 59) {
    throw new Error(`bad clock body ${JSON.stringify(text)}`);
  }
  return seconds;
}

export interface PollHandlers {
  /** A fresh signal line (stamp >= 0). */
  onSignalLine: (body: string) => void;
  /** Stamp -1 seen; polling has stopped. */
  onClosed: () => void;
  /** A fetch failed; the previous view stays up and polling continues. */
  onError?: (error: unknown) => void;
}

export type FetchText = (url: string) => Promise<string>;

/**
 * Drives the /t anchor fetch and the 30-second /s.txt cadence. Every
 * request carries a random ?r= query so no cache in the path can serve a
 * stale line. At most one signal fetch is in flight at a time; timers go
 * through the global scheduler so tests can fake them.
 */
export class PollLoop {
  private timer: ReturnType<typeof setTimeout> | null = null;
  private inFlight = false;
  private stopped = false;

  constructor(
    private readonly baseUrl: string,
    private readonly handlers: PollHandlers,
    private readonly fetchText: FetchText,
    private readonly random: () => number = Math.random,
  ) {}

  private bust(path: string): string {
    return `${this.baseUrl}${path}?r=${this.random()}`;
  }

  /** Fetch the server clock and schedule the first signal fetch. */
  async start(): Promise<void> {
    this.stopped = false;
    try {
      const body = await this.fetchText(this.bust("/t"));
      if (this.stopped) return;
      this.schedule(pollDelay(clockSeconds(body)) * 1000);
    } catch (error) {
      this.handlers.onError?.(error);
      if (!this.stopped) this.schedule(POLL_PERIOD_MS);
    }
  }

  stop(): void {
    this.stopped = true;
    if (this.timer !== null) {
      clearTimeout(this.timer);
      this.timer = null;
    }
  }

  private schedule(delayMs: number): void {
    this.timer = setTimeout(() => {
      this.timer = null;
      void this.pollOnce();
    }, delayMs);
  }

  private async pollOnce(): Promise<void> {
    if (this.stopped) return;
    if (this.inFlight) {
      // Never stack requests; try again next cycle.
      this.schedule(POLL_PERIOD_MS);
      return;
    }
    this.inFlight = true;
    try {
      const body = await this.fetchText(this.bust("/s.txt"));
      this.inFlight = false;
      if (this.stopped) return;
      const comma = body.indexOf(",");
      const stamp = Number(comma === -1 ? body : body.slice(0, comma));
      if (stamp === -1) {
        this.stop();
        this.handlers.onClosed();
        return;
      }
      this.handlers.onSignalLine(body);
    } catch (error) {
      this.inFlight = false;
      this.handlers.onError?.(error);
    }
    if (!this.stopped) this.schedule(POLL_PERIOD_MS);
  }
}
