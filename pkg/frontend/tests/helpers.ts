/** Fixture loading shared by the conformance tests. */

import { readFileSync } from "node:fs";
import { fileURLToPath } from "node:url";

import { MapRow, SignalLine, parseMapFile, parseSignalLine } from "../src/wire.js";
import { TierParam, ViewConfig } from "../src/view.js";

export const CASES = [
  "golden20-default",
  "golden20-signalmin",
  "gen48-clusters-exchanges",
  "gen48-quantiles",
  "gen48-range-filter",
  "gen48-flash0",
] as const;

export function readFixture(...parts: string[]): string {
  const url = new URL(`./fixtures/${parts.join("/")}`, import.meta.url);
  return readFileSync(fileURLToPath(url), "utf-8");
}

interface ConfigFile {
  rowParam: TierParam | null;
  colParam: TierParam | null;
  selectedClusters: number[];
  selectedExchanges: number[];
  liquidityRange: [number, number | null];
  marketCapRange: [number, number | null];
  liquidityTiers: number;
  marketCapTiers: number;
  signalMin: number;
  flashCount: number;
  cellCapacity: number | null;
}

export interface ExpectedTicker {
  symbol: string;
  row: number;
  col: number;
  excluded: boolean;
  flashing: boolean;
  colorHex: string;
}

export interface Expected {
  rows: number;
  cols: number;
  rowMarkers: number[];
  colMarkers: number[];
  /** One record per ticker, in map-file order. */
  tickers: ExpectedTicker[];
  dropped: number | null;
}

function headerValue(line: string, label: string): string {
  const tab = line.indexOf("\t");
  if (tab === -1 || line.slice(0, tab) !== label) {
    throw new Error(`expected "${label}" header, got ${JSON.stringify(line)}`);
  }
  return line.slice(tab + 1);
}

function markerValues(csv: string): number[] {
  return csv === "" ? [] : csv.split(",").map(Number);
}

export function parseExpected(text: string): Expected {
  const lines = text.split("\n");
  const expected: Expected = {
    rows: Number(headerValue(lines[0], "rows")),
    cols: Number(headerValue(lines[1], "cols")),
    rowMarkers: markerValues(headerValue(lines[2], "row_markers")),
    colMarkers: markerValues(headerValue(lines[3], "col_markers")),
    tickers: [],
    dropped: null,
  };
  for (const line of lines.slice(4)) {
    const parts = line.split("\t");
    if (parts[0] === "dropped") {
      expected.dropped = Number(parts[1]);
      continue;
    }
    if (parts.length !== 6) {
      throw new Error(`bad expected row ${JSON.stringify(line)}`);
    }
    expected.tickers.push({
      symbol: parts[0],
      row: Number(parts[1]),
      col: Number(parts[2]),
      excluded: parts[3] === "1",
      flashing: parts[4] === "1",
      colorHex: parts[5],
    });
  }
  return expected;
}

export interface SigDeltaRow {
  symbol: string;
  scrambled: number | null;
  signal: number | null;
  signalRank: number | null;
  delta: number | null;
  deltaRank: number | null;
}

const SIG_DELTA_HEADER = "Ticker\tScrambled.Signal\tSignal\tSignal.ix\tDelta\tDelta.ix";

/** The server's own six-column table; the reference the wire must decode to. */
export function parseSigDelta(text: string): SigDeltaRow[] {
  const lines = text.split("\n");
  if (lines[0] !== SIG_DELTA_HEADER) {
    throw new Error(`bad sig.delta header ${JSON.stringify(lines[0])}`);
  }
  const cell = (token: string): number | null => (token === "NA" ? null : Number(token));
  return lines.slice(1).map((line) => {
    const parts = line.split("\t");
    if (parts.length !== 6) {
      throw new Error(`bad sig.delta row ${JSON.stringify(line)}`);
    }
    return {
      symbol: parts[0],
      scrambled: cell(parts[1]),
      signal: cell(parts[2]),
      signalRank: cell(parts[3]),
      delta: cell(parts[4]),
      deltaRank: cell(parts[5]),
    };
  });
}

export interface FixtureCase {
  name: string;
  rows: MapRow[];
  line: SignalLine;
  sigDelta: SigDeltaRow[];
  config: ViewConfig;
  cellCapacity: number | null;
  expected: Expected;
}

export function loadCase(name: string): FixtureCase {
  const raw = JSON.parse(readFixture(name, "config.json")) as ConfigFile;
  const fixture: FixtureCase = {
    name,
    rows: parseMapFile(readFixture(name, "m.txt")),
    line: parseSignalLine(readFixture(name, "s.txt")),
    sigDelta: parseSigDelta(readFixture(name, "sig.delta.txt")),
    config: {
      rowParam: raw.rowParam,
      colParam: raw.colParam,
      selectedClusters: new Set(raw.selectedClusters),
      selectedExchanges: new Set(raw.selectedExchanges),
      liquidityRange: raw.liquidityRange,
      marketCapRange: raw.marketCapRange,
      liquidityTiers: raw.liquidityTiers,
      marketCapTiers: raw.marketCapTiers,
      signalMin: raw.signalMin,
      flashCount: raw.flashCount,
    },
    cellCapacity: raw.cellCapacity,
    expected: parseExpected(readFixture(name, "expected.txt")),
  };
  if (fixture.rows.length !== fixture.line.entries.length) {
    throw new Error(`${name}: map and signal line disagree on ticker count`);
  }
  if (fixture.rows.length !== fixture.sigDelta.length) {
    throw new Error(`${name}: map and sig.delta disagree on ticker count`);
  }
  return fixture;
}
