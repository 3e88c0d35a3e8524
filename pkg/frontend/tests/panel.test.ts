import { describe, expect, it } from "vitest";

import {
  defaultPanel,
  disabledCheckbox,
  setAxisParam,
  setFlashCount,
  setRange,
  setSignalMin,
  setTierCount,
  tierSelectorShown,
  toViewConfig,
  toggleCluster,
  toggleExchange,
} from "../src/panel.js";
import { decodeSignals } from "../src/wire.js";
import { gridAssignment } from "../src/view.js";
import { loadCase } from "./helpers.js";

function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

describe("checkbox groups", () => {
  it("never empties a group, over many random click scripts", () => {
    const random = mulberry32(1902);
    for (let script = 0; script < 500; script++) {
      let state = defaultPanel();
      for (let step = 0; step < 20; step++) {
        const clusters = random() < 0.5;
        const boxes = clusters ? state.clusters : state.exchanges;
        const index = Math.floor(random() * boxes.length);
        const next = clusters
          ? toggleCluster(state, index)
          : toggleExchange(state, index);
        const nextBoxes = clusters ? next.clusters : next.exchanges;

        expect(nextBoxes.some(Boolean)).toBe(true);
        const locked = disabledCheckbox(boxes);
        if (locked === index) {
          // A click on the disabled sole survivor changes nothing.
          expect(nextBoxes).toEqual(boxes);
        } else {
          expect(nextBoxes[index]).toBe(!boxes[index]);
        }
        state = next;
      }
    }
  });

  it("disables exactly the sole selected box", () => {
    expect(disabledCheckbox([true, true, true])).toBeNull();
    expect(disabledCheckbox([false, true, false])).toBe(1);
    expect(disabledCheckbox([false, false, false])).toBeNull();
  });
});

describe("axis parameters", () => {
  it("lets one axis steal a parameter from the other", () => {
    const onRow = setAxisParam(defaultPanel(), "row", "liquidity");
    expect(onRow.rowParam).toBe("liquidity");

    const stolen = setAxisParam(onRow, "col", "liquidity");
    expect(stolen.colParam).toBe("liquidity");
    expect(stolen.rowParam).toBeNull();

    const backAgain = setAxisParam(stolen, "row", "liquidity");
    expect(backAgain.rowParam).toBe("liquidity");
    expect(backAgain.colParam).toBeNull();
  });

  it("keeps distinct parameters on both axes", () => {
    let state = setAxisParam(defaultPanel(), "row", "clusters");
    state = setAxisParam(state, "col", "exchanges");
    expect(state.rowParam).toBe("clusters");
    expect(state.colParam).toBe("exchanges");

    state = setAxisParam(state, "row", null);
    expect(state.rowParam).toBeNull();
    expect(state.colParam).toBe("exchanges");
  });

  it("swaps the dollar slider for the tier selector while tiered", () => {
    const state = setAxisParam(defaultPanel(), "col", "market-cap");
    expect(tierSelectorShown(state, "market-cap")).toBe(true);
    expect(tierSelectorShown(state, "liquidity")).toBe(false);
    expect(tierSelectorShown(defaultPanel(), "market-cap")).toBe(false);
  });
});

describe("slider values", () => {
  it("snaps the signal floor to quarter steps in [0, 6]", () => {
    expect(setSignalMin(defaultPanel(), 0.13).signalMin).toBe(0.25);
    expect(setSignalMin(defaultPanel(), 1.125).signalMin).toBe(1.25);
    expect(setSignalMin(defaultPanel(), 5.9).signalMin).toBe(6);
    expect(setSignalMin(defaultPanel(), 7).signalMin).toBe(6);
    expect(setSignalMin(defaultPanel(), -1).signalMin).toBe(0);
  });

  it("clamps the flash window to 0..25", () => {
    expect(setFlashCount(defaultPanel(), 26).flashCount).toBe(25);
    expect(setFlashCount(defaultPanel(), -3).flashCount).toBe(0);
    expect(setFlashCount(defaultPanel(), 12.4).flashCount).toBe(12);
  });

  it("clamps tier counts to 2..10 per parameter", () => {
    expect(setTierCount(defaultPanel(), "liquidity", 1).liquidityTiers).toBe(2);
    expect(setTierCount(defaultPanel(), "liquidity", 11).liquidityTiers).toBe(10);
    const state = setTierCount(defaultPanel(), "market-cap", 7.6);
    expect(state.marketCapTiers).toBe(8);
    expect(state.liquidityTiers).toBe(3);
  });

  it("stores ranges per parameter", () => {
    const state = setRange(defaultPanel(), "liquidity", [1_000_000, 50_000_000]);
    expect(state.liquidityRange).toEqual([1_000_000, 50_000_000]);
    expect(state.marketCapRange).toEqual([0, null]);
  });
});

describe("toViewConfig", () => {
  it("mirrors the checkbox arrays into selection sets", () => {
    const config = toViewConfig(toggleExchange(defaultPanel(), 2));
    expect(config.selectedClusters.size).toBe(10);
    expect([...config.selectedExchanges].sort()).toEqual([0, 1]);
  });

  it("round-trips a deselect and reselect into the identical grid", () => {
    const fixture = loadCase("golden20-default");
    const signals = decodeSignals(fixture.line.entries);
    const render = (state: ReturnType<typeof defaultPanel>) =>
      gridAssignment(fixture.rows, fixture.line.entries, signals, toViewConfig(state));

    const before = render(defaultPanel());
    const wobbled = toggleCluster(toggleCluster(defaultPanel(), 4), 4);
    expect(render(wobbled)).toEqual(before);

    const without = render(toggleCluster(defaultPanel(), 7));
    const hidden = fixture.rows.filter((row) => row.cluster === 7).length;
    expect(without.excluded.filter(Boolean).length).toBe(
      before.excluded.filter(Boolean).length + hidden,
    );
  });
});
