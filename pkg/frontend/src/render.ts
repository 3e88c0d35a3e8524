/** DOM rendering: the ticker grid, axis labels, hover panel, flash timer. */

import { MapRow, SignalEntry } from "./wire.js";
import {
  CLUSTER_NAMES,
  EXCHANGE_NAMES,
  EXCHANGE_TIER_ORDER,
  GridAssignment,
  TierParam,
  ViewConfig,
  colorHex,
  layoutGrid,
} from "./view.js";
import { formatAmount, formatSignal } from "./format.js";

const GLYPH_WIDTH = 43;
const GLYPH_HEIGHT = 17;

/** Glyphs that fit in one bucket of the given pixel size. */
export function cellCapacity(widthPx: number, heightPx: number): number {
  const across = Math.floor(widthPx / GLYPH_WIDTH);
  const down = Math.floor(heightPx / GLYPH_HEIGHT);
  return Math.max(across, 1) * Math.max(down, 1);
}

/**
 * Human labels for one axis.  Categorical axes take their names from the
 * current selection; dollar axes format the tier boundary values carried
 * on the assignment.
 */
export function axisLabels(
  param: TierParam | null,
  markers: number[],
  config: ViewConfig,
): string[] {
  if (param === null) {
    return [];
  }
  if (param === "clusters") {
    return [...config.selectedClusters]
      .sort((a, b) => a - b)
      .map((code) => CLUSTER_NAMES[code] ?? String(code));
  }
  if (param === "exchanges") {
    return EXCHANGE_TIER_ORDER.filter((code) => config.selectedExchanges.has(code)).map(
      (code) => EXCHANGE_NAMES[code],
    );
  }
  return markers.map((value) => `≤ ${formatAmount(value)}`);
}

export interface RenderResult {
  /** Tickers that matched the filters but did not fit in their bucket. */
  dropped: number;
}

/**
 * Rebuild the grid element from the current assignment.  Buckets are laid
 * out with CSS grid; each placed ticker becomes one glyph span carrying its
 * universe index in a data attribute so hover lookups stay cheap.
 */
export function renderGrid(
  grid: HTMLElement,
  rows: MapRow[],
  entries: SignalEntry[],
  assignment: GridAssignment,
): RenderResult {
  grid.textContent = "";
  grid.style.gridTemplateColumns = `repeat(${assignment.matrixCols}, 1fr)`;
  grid.style.gridTemplateRows = `repeat(${assignment.matrixRows}, 1fr)`;

  const cells: HTMLElement[] = [];
  for (let b = 0; b < assignment.matrixRows * assignment.matrixCols; b++) {
    const cell = document.createElement("div");
    cell.className = "bucket";
    grid.appendChild(cell);
    cells.push(cell);
  }

  const rect = grid.getBoundingClientRect();
  const capacity = cellCapacity(
    rect.width / Math.max(assignment.matrixCols, 1),
    rect.height / Math.max(assignment.matrixRows, 1),
  );
  const layout = layoutGrid(
    assignment,
    entries.map((entry) => entry.signalRank),
    capacity,
  );

  layout.buckets.forEach((members, b) => {
    for (const i of members) {
      const glyph = document.createElement("span");
      glyph.className = assignment.flashing[i] ? "glyph flashing" : "glyph";
      glyph.textContent = rows[i].symbol;
      glyph.dataset["index"] = String(i);
      glyph.style.backgroundColor = `#${colorHex(assignment.colors[i])}`;
      cells[b].appendChild(glyph);
    }
  });
  return { dropped: layout.dropped };
}

/** Write the axis tier labels beside and above the grid. */
export function renderMarkers(
  rowBox: HTMLElement,
  colBox: HTMLElement,
  assignment: GridAssignment,
  config: ViewConfig,
): void {
  rowBox.textContent = "";
  colBox.textContent = "";
  for (const label of axisLabels(config.rowParam, assignment.rowMarkers, config)) {
    const span = document.createElement("span");
    span.textContent = label;
    rowBox.appendChild(span);
  }
  for (const label of axisLabels(config.colParam, assignment.colMarkers, config)) {
    const span = document.createElement("span");
    span.textContent = label;
    colBox.appendChild(span);
  }
}

/** The six hover fields for one ticker. */
export function describeTicker(
  row: MapRow,
  signal: number | null,
): [string, string][] {
  return [
    ["Ticker", row.symbol],
    ["Signal", formatSignal(signal)],
    ["Exchange", EXCHANGE_NAMES[row.exchange] ?? String(row.exchange)],
    ["Industry", CLUSTER_NAMES[row.cluster] ?? String(row.cluster)],
    ["Liquidity", formatAmount(row.liquidity)],
    ["Market cap", formatAmount(row.marketCap)],
  ];
}

export function renderInfo(panel: HTMLElement, row: MapRow, signal: number | null): void {
  panel.textContent = "";
  for (const [label, value] of describeTicker(row, signal)) {
    const line = document.createElement("div");
    const name = document.createElement("b");
    name.textContent = `${label}: `;
    line.appendChild(name);
    line.appendChild(document.createTextNode(value));
    panel.appendChild(line);
  }
}

/**
 * One shared 250ms timer dims and restores every flashing glyph in step.
 * Restarting the timer on each render would desynchronise the phase, so it
 * runs for the page's life and queries the document on every tick.
 */
export class FlashTimer {
  private handle: ReturnType<typeof setInterval> | null = null;
  private dimmed = false;

  start(root: HTMLElement): void {
    if (this.handle !== null) {
      return;
    }
    this.handle = setInterval(() => {
      this.dimmed = !this.dimmed;
      const opacity = this.dimmed ? "0.65" : "1";
      for (const glyph of root.querySelectorAll<HTMLElement>(".flashing")) {
        glyph.style.opacity = opacity;
      }
    }, 250);
  }

  stop(): void {
    if (this.handle !== null) {
      clearInterval(this.handle);
      this.handle = null;
    }
  }
}

/** Strip a search box value down to the characters a symbol can contain. */
export function maskSymbolInput(raw: string): string {
  return raw.toUpperCase().replace(/[^A-Z.]/g, "");
}
