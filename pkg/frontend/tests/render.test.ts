import { describe, expect, it } from "vitest";

import { axisLabels, cellCapacity, describeTicker, maskSymbolInput } from "../src/render.js";
import { defaultConfig } from "../src/view.js";
import { MapRow } from "../src/wire.js";

describe("axisLabels", () => {
  it("is empty for an untiered axis", () => {
    expect(axisLabels(null, [], defaultConfig())).toEqual([]);
  });

  it("names selected clusters in code order", () => {
    const config = { ...defaultConfig(), selectedClusters: new Set([9, 0, 2]) };
    expect(axisLabels("clusters", [], config)).toEqual([
      "Cyclicals",
      "Financials",
      "Utilities",
    ]);
  });

  it("names exchanges in their display order", () => {
    expect(axisLabels("exchanges", [], defaultConfig())).toEqual([
      "AMEX",
      "NASDAQ",
      "NYSE",
    ]);
    const onlyNyse = { ...defaultConfig(), selectedExchanges: new Set([1]) };
    expect(axisLabels("exchanges", [], onlyNyse)).toEqual(["NYSE"]);
  });

  it("formats dollar tier boundaries", () => {
    expect(axisLabels("liquidity", [1_258_086, 39_079_610], defaultConfig())).toEqual([
      "≤ 1.26 M",
      "≤ 39.08 M",
    ]);
  });
});

describe("cellCapacity", () => {
  it("divides the bucket into glyph slots", () => {
    // The stock glyph is 43x17; a single 290x621 cell fits a 6x36 block.
    expect(cellCapacity(290, 621)).toBe(6 * 36);
  });

  it("always leaves room for one glyph", () => {
    expect(cellCapacity(10, 10)).toBe(1);
  });
});

describe("maskSymbolInput", () => {
  it("keeps only letters and dots, uppercased", () => {
    expect(maskSymbolInput("brk.b!2 ")).toBe("BRK.B");
    expect(maskSymbolInput("")).toBe("");
  });
});

describe("describeTicker", () => {
  it("lays out the six hover fields", () => {
    const row: MapRow = {
      symbol: "AAPL",
      cluster: 7,
      exchange: 2,
      marketCap: 3_400_000_000_000,
      capRank: 19,
      liquidity: 9_100_000_000,
      liqRank: 18,
    };
    expect(describeTicker(row, -3.1)).toEqual([
      ["Ticker", "AAPL"],
      ["Signal", "-3.10"],
      ["Exchange", "NASDAQ"],
      ["Industry", "Technology"],
      ["Liquidity", "9.10 B"],
      ["Market cap", "3.40 T"],
    ]);
    expect(describeTicker(row, null)[1]).toEqual(["Signal", "N/A"]);
  });
});
