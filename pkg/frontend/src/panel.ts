/**
 * Panel state and its invariants, kept apart from the DOM so the rules
 * are testable under arbitrary click scripts.
 *
 * Invariants enforced here:
 *   - a parameter is tiered on at most one axis (choosing it on one axis
 *     vacates the other);
 *   - at least one cluster and one exchange stay selected (the UI
 *     disables the last checked box; the reducer refuses the toggle as a
 *     backstop);
 *   - signal minimum snaps to quarter steps in [0, 6];
 *   - flashing count clamps to 0..25, tier counts to 2..10.
 */

import { TierParam, ViewConfig } from "./view.js";

export type Axis = "row" | "col";

export interface PanelState {
  rowParam: TierParam | null;
  colParam: TierParam | null;
  clusters: boolean[];
  exchanges: boolean[];
  liquidityRange: [number, number | null];
  marketCapRange: [number, number | null];
  liquidityTiers: number;
  marketCapTiers: number;
  signalMin: number;
  flashCount: number;
}

export function defaultPanel(): PanelState {
  return {
    rowParam: null,
    colParam: null,
    clusters: new Array<boolean>(10).fill(true),
    exchanges: new Array<boolean>(3).fill(true),
    liquidityRange: [0, null],
    marketCapRange: [0, null],
    liquidityTiers: 3,
    marketCapTiers: 3,
    signalMin: 0,
    flashCount: 15,
  };
}

function countSelected(boxes: boolean[]): number {
  return boxes.reduce((count, on) => count + (on ? 1 : 0), 0);
}

function toggle(boxes: boolean[], index: number): boolean[] {
  if (boxes[index] && countSelected(boxes) === 1) return boxes;
  const next = boxes.slice();
  next[index] = !next[index];
  return next;
}

export function toggleCluster(state: PanelState, code: number): PanelState {
  return { ...state, clusters: toggle(state.clusters, code) };
}

export function toggleExchange(state: PanelState, code: number): PanelState {
  return { ...state, exchanges: toggle(state.exchanges, code) };
}

/** The index of the sole selected checkbox (to be disabled), if any. */
export function disabledCheckbox(boxes: boolean[]): number | null {
  if (countSelected(boxes) !== 1) return null;
  return boxes.indexOf(true);
}

/** Put a parameter on an axis; the other axis gives it up if it held it. */
export function setAxisParam(state: PanelState, axis: Axis, param: TierParam | null): PanelState {
  const next = { ...state };
  if (axis === "row") {
    next.rowParam = param;
    if (param !== null && next.colParam === param) next.colParam = null;
  } else {
    next.colParam = param;
    if (param !== null && next.rowParam === param) next.rowParam = null;
  }
  return next;
}

export function setSignalMin(state: PanelState, raw: number): PanelState {
  const snapped = Math.round(raw * 4) / 4;
  return { ...state, signalMin: Math.min(6, Math.max(0, snapped)) };
}

export function setFlashCount(state: PanelState, raw: number): PanelState {
  return { ...state, flashCount: Math.min(25, Math.max(0, Math.round(raw))) };
}

export function setTierCount(
  state: PanelState,
  param: "liquidity" | "market-cap",
  raw: number,
): PanelState {
  const count = Math.min(10, Math.max(2, Math.round(raw)));
  if (param === "liquidity") return { ...state, liquidityTiers: count };
  return { ...state, marketCapTiers: count };
}

export function setRange(
  state: PanelState,
  param: "liquidity" | "market-cap",
  range: [number, number | null],
): PanelState {
  if (param === "liquidity") return { ...state, liquidityRange: range };
  return { ...state, marketCapRange: range };
}

/**
 * While a dollar parameter is tiered its range slider is replaced by the
 * tier-count selector; the range is ignored until it is untiered again.
 */
export function tierSelectorShown(state: PanelState, param: "liquidity" | "market-cap"): boolean {
  return state.rowParam === param || state.colParam === param;
}

function selectedCodes(boxes: boolean[]): Set<number> {
  const codes = new Set<number>();
  boxes.forEach((on, code) => {
    if (on) codes.add(code);
  });
  return codes;
}

export function toViewConfig(state: PanelState): ViewConfig {
  return {
    rowParam: state.rowParam,
    colParam: state.colParam,
    selectedClusters: selectedCodes(state.clusters),
    selectedExchanges: selectedCodes(state.exchanges),
    liquidityRange: state.liquidityRange,
    marketCapRange: state.marketCapRange,
    liquidityTiers: state.liquidityTiers,
    marketCapTiers: state.marketCapTiers,
    signalMin: state.signalMin,
    flashCount: state.flashCount,
  };
}
