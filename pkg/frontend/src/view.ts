/**
 * Display semantics computed client-side from the wire data alone:
 * tier assignment, filtering, flashing, color banding, bucket layout,
 * and the dollar slider scale.
 *
 * The server ships only the map file and the signal line; everything the
 * grid shows is derived here. The fixture conformance tests pin this
 * module to the reference implementation, so changes in either place
 * surface as byte-level diffs.
 */

import { MapRow, SignalEntry, roundHalfAway } from "./wire.js";

export type TierParam = "clusters" | "exchanges" | "liquidity" | "market-cap";

export const CLUSTER_NAMES = [
  "Cyclicals",
  "Energy",
  "Financials",
  "Healthcare",
  "Industrials",
  "Materials",
  "Non-Cyclicals",
  "Technology",
  "Telecom",
  "Utilities",
] as const;

/** Display names by venue code. */
export const EXCHANGE_NAMES = ["AMEX", "NYSE", "NASDAQ"] as const;

/**
 * Exchanges tier and display in checkbox order AMEX, NASDAQ, NYSE, which
 * differs from their numeric code order (NASDAQ is 2, NYSE is 1).
 */
export const EXCHANGE_TIER_ORDER = [0, 2, 1] as const;

export interface ViewConfig {
  rowParam: TierParam | null;
  colParam: TierParam | null;
  selectedClusters: ReadonlySet<number>;
  selectedExchanges: ReadonlySet<number>;
  /** [low, high]; null high means unbounded. Applied only when not tiered. */
  liquidityRange: readonly [number, number | null];
  marketCapRange: readonly [number, number | null];
  liquidityTiers: number;
  marketCapTiers: number;
  /** Minimum |signal| to display, quarter steps in [0, 6]. */
  signalMin: number;
  /** How many of the top delta ranks flash; 0 disables flashing. */
  flashCount: number;
}

export function defaultConfig(): ViewConfig {
  return {
    rowParam: null,
    colParam: null,
    selectedClusters: new Set(CLUSTER_NAMES.map((_, code) => code)),
    selectedExchanges: new Set([0, 1, 2]),
    liquidityRange: [0, null],
    marketCapRange: [0, null],
    liquidityTiers: 3,
    marketCapTiers: 3,
    signalMin: 0,
    flashCount: 15,
  };
}

export const COLOR_NA = 0xb4b4b4;
export const COLOR_GREY = 0x666666;
export const COLOR_GREEN = 0x40b06c;
export const COLOR_BLUE = 0x3380c2;
export const COLOR_YELLOW = 0xf4d701;
export const COLOR_ORANGE = 0xff9c2c;
export const COLOR_RED = 0xf53636;

/** |signal| in integer hundredths; missing signals compare as zero. */
export function hundredths(signal: number | null): number {
  if (signal === null) return 0;
  return roundHalfAway(Math.abs(signal) * 100, 0);
}

/** Color band for a signal; band edges belong to the band above. */
export function colorOf(signal: number | null): number {
  if (signal === null) return COLOR_NA;
  const value = hundredths(signal);
  if (value >= 500) return COLOR_RED;
  if (value >= 400) return COLOR_ORANGE;
  if (value >= 300) return COLOR_YELLOW;
  if (value >= 200) return COLOR_BLUE;
  if (value >= 100) return COLOR_GREEN;
  return COLOR_GREY;
}

export function colorHex(color: number): string {
  return color.toString(16).toUpperCase().padStart(6, "0");
}

export interface QuantileTiers {
  tiers: number[];
  /** Last ordered position of each tier. */
  bounds: number[];
}

/**
 * Assign each ticker to one of `tierCount` near-equal quantile tiers.
 * `orderedPositions[i]` is ticker i's 0-based ascending position in the
 * parameter order (the published rank); the ticker at ordered position j
 * lands in the smallest tier k with j <= floor(N * (k + 1) / tierCount) - 1.
 */
export function quantileTiers(orderedPositions: number[], tierCount: number): QuantileTiers {
  if (!Number.isInteger(tierCount) || tierCount < 2 || tierCount > 10) {
    throw new Error(`tier count must be 2..10, got ${tierCount}`);
  }
  const n = orderedPositions.length;
  const tiers = orderedPositions.map(
    (position) => Math.floor((tierCount * (position + 1) + n - 1) / n) - 1,
  );
  const bounds = [];
  for (let k = 0; k < tierCount; k++) {
    bounds.push(Math.floor((n * (k + 1)) / tierCount) - 1);
  }
  return { tiers, bounds };
}

export interface TierAxes {
  matrixRows: number;
  matrixCols: number;
  rows: number[];
  cols: number[];
  rowMarkers: number[];
  colMarkers: number[];
}

function axisTiers(
  rows: MapRow[],
  config: ViewConfig,
  param: TierParam | null,
): { count: number; tiers: number[]; markers: number[] } {
  const n = rows.length;
  if (param === null) {
    return { count: 1, tiers: new Array<number>(n).fill(0), markers: [] };
  }

  if (param === "clusters") {
    const selected = [...config.selectedClusters].sort((a, b) => a - b);
    const positions = new Map(selected.map((code, position) => [code, position]));
    // Deselected clusters are filtered out; coordinate 0 is a placeholder.
    return {
      count: selected.length,
      tiers: rows.map((row) => positions.get(row.cluster) ?? 0),
      markers: [],
    };
  }

  if (param === "exchanges") {
    const selected = EXCHANGE_TIER_ORDER.filter((code) => config.selectedExchanges.has(code));
    const positions = new Map<number, number>(selected.map((code, position) => [code, position]));
    return {
      count: selected.length,
      tiers: rows.map((row) => positions.get(row.exchange) ?? 0),
      markers: [],
    };
  }

  const liquidity = param === "liquidity";
  const ordered = rows.map((row) => (liquidity ? row.liqRank : row.capRank));
  const count = liquidity ? config.liquidityTiers : config.marketCapTiers;
  const values = rows.map((row) => (liquidity ? row.liquidity : row.marketCap));

  const { tiers, bounds } = quantileTiers(ordered, count);
  const byPosition = new Map(ordered.map((position, i) => [position, i]));
  const markers = bounds.map((b) => {
    const clamped = Math.min(Math.max(b, 0), n - 1);
    return values[byPosition.get(clamped)!];
  });
  return { count, tiers, markers };
}

/** Bucket coordinates for every ticker under the configured tiering. */
export function assignTiers(rows: MapRow[], config: ViewConfig): TierAxes {
  const row = axisTiers(rows, config, config.rowParam);
  const col = axisTiers(rows, config, config.colParam);
  return {
    matrixRows: row.count,
    matrixCols: col.count,
    rows: row.tiers,
    cols: col.tiers,
    rowMarkers: row.markers,
    colMarkers: col.markers,
  };
}

function inRange(value: number, range: readonly [number, number | null]): boolean {
  const [low, high] = range;
  return low <= value && (high === null || value <= high);
}

/** Exclusion flag per ticker under the configured filters. */
export function applyFilters(
  rows: MapRow[],
  signals: (number | null)[],
  config: ViewConfig,
): boolean[] {
  const liquidityTiered = config.rowParam === "liquidity" || config.colParam === "liquidity";
  const capTiered = config.rowParam === "market-cap" || config.colParam === "market-cap";
  const minHundredths = hundredths(config.signalMin);

  return rows.map((row, i) => {
    let out = !config.selectedClusters.has(row.cluster);
    out = out || !config.selectedExchanges.has(row.exchange);
    if (!liquidityTiered) {
      out = out || !inRange(row.liquidity, config.liquidityRange);
    }
    if (!capTiered) {
      out = out || !inRange(row.marketCap, config.marketCapRange);
    }
    return out || hundredths(signals[i]) < minHundredths;
  });
}

/**
 * Flash the tickers whose delta rank is inside the flashing window.
 * The wire carries a delta rank exactly when a delta exists and ranks in
 * the top 25, so with flashCount <= 25 the presence test is the same
 * condition the server evaluates.
 */
export function selectFlashing(entries: SignalEntry[], flashCount: number): boolean[] {
  if (!Number.isInteger(flashCount) || flashCount < 0 || flashCount > 25) {
    throw new Error(`flash count must be 0..25, got ${flashCount}`);
  }
  return entries.map((entry) => entry.deltaRank !== null && entry.deltaRank < flashCount);
}

export interface GridAssignment {
  matrixRows: number;
  matrixCols: number;
  rows: number[];
  cols: number[];
  excluded: boolean[];
  flashing: boolean[];
  colors: number[];
  rowMarkers: number[];
  colMarkers: number[];
}

/** Compose tiers, filters, flashing and colors into one assignment. */
export function gridAssignment(
  rows: MapRow[],
  entries: SignalEntry[],
  signals: (number | null)[],
  config: ViewConfig,
): GridAssignment {
  const axes = assignTiers(rows, config);
  return {
    matrixRows: axes.matrixRows,
    matrixCols: axes.matrixCols,
    rows: axes.rows,
    cols: axes.cols,
    excluded: applyFilters(rows, signals, config),
    flashing: selectFlashing(entries, config.flashCount),
    colors: signals.map(colorOf),
    rowMarkers: axes.rowMarkers,
    colMarkers: axes.colMarkers,
  };
}

export interface GridLayout {
  /** Ticker indices per bucket (row-major), display order. */
  buckets: number[][];
  dropped: number;
}

/**
 * Order tickers inside their buckets, strongest signals first: iterate
 * signal ranks descending, skip excluded tickers, and drop whatever
 * exceeds a bucket's capacity.
 */
export function layoutGrid(
  assignment: GridAssignment,
  signalRanks: number[],
  cellCapacity: number,
): GridLayout {
  if (cellCapacity < 0) throw new Error("cellCapacity must be >= 0");
  const n = signalRanks.length;
  const byRank = new Array<number>(n);
  signalRanks.forEach((rank, i) => {
    byRank[rank] = i;
  });

  const buckets: number[][] = [];
  for (let b = 0; b < assignment.matrixRows * assignment.matrixCols; b++) buckets.push([]);
  let dropped = 0;
  for (let rank = n - 1; rank >= 0; rank--) {
    const i = byRank[rank];
    if (assignment.excluded[i]) continue;
    const bucket = assignment.rows[i] * assignment.matrixCols + assignment.cols[i];
    if (buckets[bucket].length < cellCapacity) {
      buckets[bucket].push(i);
    } else {
      dropped++;
    }
  }
  return { buckets, dropped };
}

export interface SliderScale {
  /** Tick values in millions: 0, 1..10, 20..100, 200..1000, ... */
  ticks: number[];
  /** The powers of ten among the ticks. */
  markers: number[];
}

/** Dollar dual-slider ticks, stopping at the first tick above maxValue. */
export function sliderScale(maxValue: number): SliderScale {
  if (maxValue < 0) throw new Error("maxValue must be >= 0");
  const limit = Math.trunc(maxValue / 1_000_000);
  const ticks: number[] = [];
  const markers: number[] = [];
  let value = 0;
  let step = 1;
  for (;;) {
    ticks.push(value);
    if (value === step * 10) {
      markers.push(value);
      step *= 10;
    }
    if (value > limit) break;
    value += step;
  }
  return { ticks, markers };
}
