/** Page bootstrap: fetch the map once, poll signals, wire the controls. */

import {
  MapRow,
  SignalLine,
  decodeSignals,
  parseMapFile,
  parseSignalLine,
  stampStatus,
} from "./wire.js";
import {
  TierParam,
  colorHex,
  colorOf,
  gridAssignment,
  sliderScale,
} from "./view.js";
import { PollLoop } from "./poll.js";
import {
  Axis,
  PanelState,
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
} from "./panel.js";
import {
  FlashTimer,
  maskSymbolInput,
  renderGrid,
  renderInfo,
  renderMarkers,
} from "./render.js";
import { CLUSTER_NAMES, EXCHANGE_NAMES, EXCHANGE_TIER_ORDER } from "./view.js";

function must(id: string): HTMLElement {
  const element = document.getElementById(id);
  if (element === null) {
    throw new Error(`missing #${id}`);
  }
  return element;
}

async function fetchText(url: string): Promise<string> {
  const response = await fetch(url, { cache: "no-store" });
  if (!response.ok) {
    throw new Error(`GET ${url}: ${response.status}`);
  }
  return await response.text();
}

/**
 * The signal server only speaks /m.txt, /s.txt and /t and allows any
 * origin, so the page can be served from anywhere and pointed at it with
 * ?api=http://host:port. Same origin by default.
 */
function apiBase(): string {
  return new URLSearchParams(window.location.search).get("api") ?? "";
}

interface DollarControls {
  rangeBox: HTMLElement;
  tierBox: HTMLElement;
  low: HTMLInputElement;
  high: HTMLInputElement;
  rangeLabel: HTMLElement;
  tierSelect: HTMLSelectElement;
  ticks: number[];
}

class App {
  private panel: PanelState = defaultPanel();
  private rows: MapRow[] = [];
  private latest: SignalLine | null = null;
  private signals: (number | null)[] = [];
  private readonly flash = new FlashTimer();
  private loop: PollLoop | null = null;

  private readonly grid = must("grid");
  private readonly rowMarkerBox = must("row-markers");
  private readonly colMarkerBox = must("col-markers");
  private readonly info = must("info");
  private readonly status = must("status");
  private readonly searchBox = must("search") as HTMLInputElement;
  private readonly popup = must("popup");
  private readonly closedNotice = must("closed");

  private rowRadios = new Map<TierParam | null, HTMLInputElement>();
  private colRadios = new Map<TierParam | null, HTMLInputElement>();
  private clusterBoxes: HTMLInputElement[] = [];
  private exchangeBoxes: HTMLInputElement[] = [];
  private signalSlider!: HTMLInputElement;
  private signalLabel!: HTMLElement;
  private flashSlider!: HTMLInputElement;
  private flashLabel!: HTMLElement;
  private dollars!: { liquidity: DollarControls; "market-cap": DollarControls };

  async start(): Promise<void> {
    const base = apiBase();
    const map = await fetchText(`${base}/m.txt?r=${Math.random()}`);
    this.rows = parseMapFile(map);
    this.buildControls();
    this.wireHover();
    this.wireSearch();
    this.flash.start(this.grid);
    window.addEventListener("resize", this.debouncedRedraw);

    this.loop = new PollLoop(
      base,
      {
        onSignalLine: (body) => this.takeSignalLine(body),
        onClosed: () => this.showClosed(),
        onError: () => {
          this.status.textContent = "Update failed; retrying.";
        },
      },
      fetchText,
    );
    this.status.textContent = "Waiting for the first update.";
    await this.loop.start();
  }

  private takeSignalLine(body: string): void {
    const line = parseSignalLine(body);
    if (line.entries.length !== this.rows.length) {
      throw new Error(
        `signal line has ${line.entries.length} entries for ${this.rows.length} tickers`,
      );
    }
    this.latest = line;
    this.signals = decodeSignals(line.entries);
    this.redraw();
  }

  private redraw = (): void => {
    if (this.latest === null) {
      return;
    }
    const config = toViewConfig(this.panel);
    const assignment = gridAssignment(this.rows, this.latest.entries, this.signals, config);
    const result = renderGrid(this.grid, this.rows, this.latest.entries, assignment);
    renderMarkers(this.rowMarkerBox, this.colMarkerBox, assignment, config);

    const status = stampStatus(this.latest.stamp);
    const parts = [
      status === "pre-open" ? "Pre-open" : `Minute ${this.latest.stamp}`,
    ];
    if (result.dropped > 0) {
      parts.push(`${result.dropped} not shown (zoom in with the filters)`);
    }
    this.status.textContent = parts.join(" · ");
  };

  private redrawTimer: ReturnType<typeof setTimeout> | null = null;
  private debouncedRedraw = (): void => {
    if (this.redrawTimer !== null) {
      clearTimeout(this.redrawTimer);
    }
    this.redrawTimer = setTimeout(this.redraw, 200);
  };

  private showClosed(): void {
    this.closedNotice.textContent =
      "Markets are now closed. Please reload the page when markets open.";
    this.closedNotice.style.display = "block";
    this.flash.stop();
  }

  private update(next: PanelState): void {
    this.panel = next;
    this.syncControls();
    this.redraw();
  }

  // Control panel construction. Everything routes through update() so the
  // widgets always reflect the validated state, not the raw input.

  private buildControls(): void {
    const box = must("panel");

    const axes = document.createElement("table");
    axes.className = "axes";
    const head = axes.insertRow();
    for (const text of ["Group by", "Rows", "Columns"]) {
      const cell = document.createElement("th");
      cell.textContent = text;
      head.appendChild(cell);
    }
    const options: [TierParam | null, string][] = [
      [null, "None"],
      ["clusters", "Industries"],
      ["exchanges", "Exchanges"],
      ["liquidity", "Liquidity"],
      ["market-cap", "Market cap"],
    ];
    for (const [param, label] of options) {
      const row = axes.insertRow();
      row.insertCell().textContent = label;
      for (const axis of ["row", "col"] as Axis[]) {
        const radio = document.createElement("input");
        radio.type = "radio";
        radio.name = `${axis}-param`;
        radio.addEventListener("change", () => {
          this.update(setAxisParam(this.panel, axis, param));
        });
        (axis === "row" ? this.rowRadios : this.colRadios).set(param, radio);
        row.insertCell().appendChild(radio);
      }
    }
    box.appendChild(axes);

    const clusters = document.createElement("fieldset");
    clusters.appendChild(this.legend("Industries"));
    CLUSTER_NAMES.forEach((name, code) => {
      this.clusterBoxes.push(
        this.checkbox(clusters, name, () => this.update(toggleCluster(this.panel, code))),
      );
    });
    box.appendChild(clusters);

    const exchanges = document.createElement("fieldset");
    exchanges.appendChild(this.legend("Exchanges"));
    this.exchangeBoxes = new Array<HTMLInputElement>(EXCHANGE_NAMES.length);
    for (const code of EXCHANGE_TIER_ORDER) {
      this.exchangeBoxes[code] = this.checkbox(exchanges, EXCHANGE_NAMES[code], () =>
        this.update(toggleExchange(this.panel, code)),
      );
    }
    box.appendChild(exchanges);

    this.dollars = {
      liquidity: this.dollarControls(box, "liquidity", "Liquidity"),
      "market-cap": this.dollarControls(box, "market-cap", "Market cap"),
    };

    const signal = document.createElement("fieldset");
    signal.appendChild(this.legend("Minimum signal"));
    this.signalSlider = document.createElement("input");
    this.signalSlider.type = "range";
    this.signalSlider.min = "0";
    this.signalSlider.max = "6";
    this.signalSlider.step = "0.25";
    this.signalSlider.addEventListener("input", () => {
      this.update(setSignalMin(this.panel, Number(this.signalSlider.value)));
    });
    this.signalLabel = document.createElement("span");
    signal.appendChild(this.signalSlider);
    signal.appendChild(this.signalLabel);
    box.appendChild(signal);

    const flash = document.createElement("fieldset");
    flash.appendChild(this.legend("Flash top movers"));
    this.flashSlider = document.createElement("input");
    this.flashSlider.type = "range";
    this.flashSlider.min = "0";
    this.flashSlider.max = "25";
    this.flashSlider.step = "1";
    this.flashSlider.addEventListener("input", () => {
      this.update(setFlashCount(this.panel, Number(this.flashSlider.value)));
    });
    this.flashLabel = document.createElement("span");
    flash.appendChild(this.flashSlider);
    flash.appendChild(this.flashLabel);
    box.appendChild(flash);

    this.syncControls();
  }

  private legend(text: string): HTMLElement {
    const legend = document.createElement("legend");
    legend.textContent = text;
    return legend;
  }

  private checkbox(
    parent: HTMLElement,
    text: string,
    onChange: () => void,
  ): HTMLInputElement {
    const label = document.createElement("label");
    const input = document.createElement("input");
    input.type = "checkbox";
    input.addEventListener("change", onChange);
    label.appendChild(input);
    label.appendChild(document.createTextNode(text));
    parent.appendChild(label);
    return input;
  }

  private dollarControls(
    box: HTMLElement,
    param: "liquidity" | "market-cap",
    title: string,
  ): DollarControls {
    const values = this.rows.map((row) =>
      param === "liquidity" ? row.liquidity : row.marketCap,
    );
    const ticks = sliderScale(Math.max(0, ...values)).ticks;

    const fieldset = document.createElement("fieldset");
    fieldset.appendChild(this.legend(`${title} range`));

    const rangeBox = document.createElement("div");
    const low = document.createElement("input");
    const high = document.createElement("input");
    for (const input of [low, high]) {
      input.type = "range";
      input.min = "0";
      input.max = String(ticks.length - 1);
      input.step = "1";
      rangeBox.appendChild(input);
    }
    low.value = "0";
    high.value = String(ticks.length - 1);
    const rangeLabel = document.createElement("span");
    rangeBox.appendChild(rangeLabel);
    const apply = (fromLow: boolean) => {
      let lowIdx = Number(low.value);
      let highIdx = Number(high.value);
      if (lowIdx > highIdx) {
        // The handle being dragged pushes the other one along.
        if (fromLow) highIdx = lowIdx;
        else lowIdx = highIdx;
        low.value = String(lowIdx);
        high.value = String(highIdx);
      }
      const top = highIdx === ticks.length - 1 ? null : ticks[highIdx] * 1_000_000;
      this.update(setRange(this.panel, param, [ticks[lowIdx] * 1_000_000, top]));
    };
    low.addEventListener("input", () => apply(true));
    high.addEventListener("input", () => apply(false));

    const tierBox = document.createElement("div");
    const tierSelect = document.createElement("select");
    for (let count = 2; count <= 10; count++) {
      const option = document.createElement("option");
      option.value = String(count);
      option.textContent = `${count} tiers`;
      tierSelect.appendChild(option);
    }
    tierSelect.addEventListener("change", () => {
      this.update(setTierCount(this.panel, param, Number(tierSelect.value)));
    });
    tierBox.appendChild(tierSelect);

    fieldset.appendChild(rangeBox);
    fieldset.appendChild(tierBox);
    box.appendChild(fieldset);
    return { rangeBox, tierBox, low, high, rangeLabel, tierSelect, ticks };
  }

  private syncControls(): void {
    for (const [param, radio] of this.rowRadios) {
      radio.checked = this.panel.rowParam === param;
    }
    for (const [param, radio] of this.colRadios) {
      radio.checked = this.panel.colParam === param;
    }

    const lockedCluster = disabledCheckbox(this.panel.clusters);
    this.clusterBoxes.forEach((input, code) => {
      input.checked = this.panel.clusters[code];
      input.disabled = code === lockedCluster;
    });
    const lockedExchange = disabledCheckbox(this.panel.exchanges);
    this.exchangeBoxes.forEach((input, code) => {
      input.checked = this.panel.exchanges[code];
      input.disabled = code === lockedExchange;
    });

    for (const param of ["liquidity", "market-cap"] as const) {
      const controls = this.dollars[param];
      const tiered = tierSelectorShown(this.panel, param);
      controls.rangeBox.style.display = tiered ? "none" : "";
      controls.tierBox.style.display = tiered ? "" : "none";
      const tiers = param === "liquidity" ? this.panel.liquidityTiers : this.panel.marketCapTiers;
      controls.tierSelect.value = String(tiers);
      const range = param === "liquidity" ? this.panel.liquidityRange : this.panel.marketCapRange;
      const top = range[1] === null ? "max" : `$${range[1] / 1_000_000}M`;
      controls.rangeLabel.textContent = ` $${range[0] / 1_000_000}M – ${top}`;
    }

    this.signalSlider.value = String(this.panel.signalMin);
    this.signalLabel.textContent = ` |signal| ≥ ${this.panel.signalMin.toFixed(2)}`;
    this.flashSlider.value = String(this.panel.flashCount);
    this.flashLabel.textContent =
      this.panel.flashCount === 0 ? " Disabled" : ` Top ${this.panel.flashCount}`;
  }

  private wireHover(): void {
    this.grid.addEventListener("mouseover", (event) => {
      const target = event.target as HTMLElement | null;
      const glyph = target?.closest<HTMLElement>(".glyph");
      const index = glyph?.dataset["index"];
      if (index === undefined) {
        return;
      }
      const i = Number(index);
      renderInfo(this.info, this.rows[i], this.signals[i] ?? null);
    });
  }

  private wireSearch(): void {
    this.searchBox.addEventListener("input", () => {
      const masked = maskSymbolInput(this.searchBox.value);
      if (masked !== this.searchBox.value) {
        this.searchBox.value = masked;
      }
    });
    this.searchBox.addEventListener("keydown", (event) => {
      if (event.key === "Enter") {
        this.showSearchResult(this.searchBox.value);
      } else if (event.key === "Escape") {
        this.hidePopup();
      }
    });
    document.addEventListener("keydown", (event) => {
      if (event.key === "Escape") {
        this.hidePopup();
      }
    });
    this.popup.addEventListener("click", () => this.hidePopup());
  }

  private showSearchResult(symbol: string): void {
    this.popup.textContent = "";
    if (symbol === "") {
      return;
    }
    const i = this.rows.findIndex((row) => row.symbol === symbol);
    if (i < 0) {
      this.popup.textContent = `Cannot find ticker ${symbol}`;
    } else {
      const signal = this.signals[i] ?? null;
      const chip = document.createElement("span");
      chip.className = "chip";
      chip.style.backgroundColor = `#${colorHex(colorOf(signal))}`;
      this.popup.appendChild(chip);
      const fields = document.createElement("div");
      renderInfo(fields, this.rows[i], signal);
      this.popup.appendChild(fields);
    }
    this.popup.style.display = "block";
  }

  private hidePopup(): void {
    this.popup.style.display = "none";
  }
}

new App().start().catch((error) => {
  const status = document.getElementById("status");
  if (status !== null) {
    status.textContent = `Failed to start: ${String(error)}`;
  }
  throw error;
});
