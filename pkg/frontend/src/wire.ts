/**
 * Wire-format layer: the three plain-text artifacts the server publishes
 * and the descrambler that turns the signal line back into signals.
 *
 * Everything here mirrors the server byte for byte; the conformance
 * fixtures in tests/ hold it to that.
 */

const ROOT3 = Math.sqrt(3);
const ROOT7 = Math.sqrt(7);
const ROOT11 = Math.sqrt(11);

/** Round half away from zero at `digits` decimals, on IEEE doubles. */
export function roundHalfAway(value: number, digits: number): number {
  const scale = 10 ** digits;
  const magnitude = Math.floor(Math.abs(value) * scale + 0.5) / scale;
  if (magnitude === 0) return 0;
  return value < 0 ? -magnitude : magnitude;
}

/**
 * Obfuscation multiplier for the ticker at 0-based position `index`.
 * The multiplier argument runs from 2, and when the sine form rounds to
 * exactly zero the cosine form substitutes.
 */
export function indexMultiplier(index: number): number {
  const k = index + 2;
  let multiplier = roundHalfAway(Math.sin(ROOT3 * k + ROOT7 * Math.cos(ROOT11 * k)), 2);
  if (multiplier === 0) {
    multiplier = roundHalfAway(Math.cos(ROOT3 * k + ROOT7 * Math.sin(ROOT11 * k)), 2);
  }
  if (multiplier === 0) {
    throw new Error(`no usable multiplier at index ${index}`);
  }
  return multiplier;
}

/** Invert the server's scrambling; exact for any 2-decimal signal. */
export function descramble(scrambled: number, index: number): number {
  return roundHalfAway(scrambled / indexMultiplier(index), 2);
}

export interface MapRow {
  symbol: string;
  cluster: number;
  exchange: number;
  marketCap: number;
  capRank: number;
  liquidity: number;
  liqRank: number;
}

function numeric(token: string, line: number, column: string): number {
  const value = Number(token);
  if (token === "" || !Number.isFinite(value)) {
    throw new Error(`m.txt line ${line}: bad ${column} ${JSON.stringify(token)}`);
  }
  return value;
}

/** Parse m.txt: seven tab-separated columns per ticker, no header. */
export function parseMapFile(text: string): MapRow[] {
  const rows: MapRow[] = [];
  const lines = text.split("\n");
  for (let i = 0; i < lines.length; i++) {
    const parts = lines[i].split("\t");
    if (parts.length !== 7) {
      throw new Error(`m.txt line ${i + 1}: expected 7 columns, got ${parts.length}`);
    }
    rows.push({
      symbol: parts[0],
      cluster: numeric(parts[1], i + 1, "cluster"),
      exchange: numeric(parts[2], i + 1, "exchange"),
      marketCap: numeric(parts[3], i + 1, "market cap"),
      capRank: numeric(parts[4], i + 1, "cap rank"),
      liquidity: numeric(parts[5], i + 1, "liquidity"),
      liqRank: numeric(parts[6], i + 1, "liquidity rank"),
    });
  }
  return rows;
}

export type MarketStatus = "pre-open" | "open" | "closed";

export function stampStatus(stamp: number): MarketStatus {
  if (stamp === -1) return "closed";
  if (stamp === 0) return "pre-open";
  if (stamp > 0) return "open";
  throw new Error(`bad stamp ${stamp}`);
}

export interface SignalEntry {
  /** "*" before the open, "" for a missing signal, a decimal otherwise. */
  scrambledToken: string;
  signalRank: number;
  /** Present only for the (at most 25) tickers in the flashing window. */
  deltaRank: number | null;
}

export interface SignalLine {
  stamp: number;
  entries: SignalEntry[];
}

/** Parse the one-line s.txt body: stamp, then one entry per ticker. */
export function parseSignalLine(text: string): SignalLine {
  const comma = text.indexOf(",");
  const stampToken = comma === -1 ? text : text.slice(0, comma);
  const stamp = Number(stampToken);
  if (!Number.isInteger(stamp) || stamp < -1) {
    throw new Error(`bad stamp token ${JSON.stringify(stampToken)}`);
  }
  const entries: SignalEntry[] = [];
  if (comma !== -1) {
    const chunks = text.slice(comma + 1).split(",");
    for (let i = 0; i < chunks.length; i++) {
      const fields = chunks[i].split("\t");
      if (fields.length !== 2 && fields.length !== 3) {
        throw new Error(`entry ${i}: ${JSON.stringify(chunks[i])}`);
      }
      const signalRank = Number(fields[1]);
      const deltaRank = fields.length === 3 ? Number(fields[2]) : null;
      if (!Number.isInteger(signalRank) || (deltaRank !== null && !Number.isInteger(deltaRank))) {
        throw new Error(`entry ${i}: ${JSON.stringify(chunks[i])}`);
      }
      entries.push({ scrambledToken: fields[0], signalRank, deltaRank });
    }
  }
  return { stamp, entries };
}

/**
 * Descramble a signal line into per-ticker signals, by map-file position.
 * Pre-open stars and missing signals both come back as null.
 */
export function decodeSignals(entries: SignalEntry[]): (number | null)[] {
  return entries.map((entry, index) => {
    if (entry.scrambledToken === "*" || entry.scrambledToken === "") return null;
    const scrambled = Number(entry.scrambledToken);
    if (!Number.isFinite(scrambled)) {
      throw new Error(`entry ${index}: bad scrambled value ${entry.scrambledToken}`);
    }
    return descramble(scrambled, index);
  });
}
