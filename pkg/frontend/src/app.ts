// Page assembly: editor on top, results below, one in-flight search at a
// time. Everything the page knows about matching comes back from the
// service; the editor only decides whether a query is worth sending.

import { SearchApi } from "./api.js";
import { QueryEditor } from "./editor.js";
import { ResultsView } from "./results.js";
import type { ChartDoc, ResultRow, SearchRequest, SearchResponse, Strategy } from "./types.js";

// The query the editor starts with: vertical bars, quantitative y.
export const STARTER_QUERY = `{
  "mark": "bar",
  "encoding": [
    {"channel": "y", "type": "quantitative"},
    {"channel": "x"}
  ]
}`;

const PAGE_SIZE = 24;

export class App {
  readonly root: HTMLElement;
  readonly editor: QueryEditor;
  readonly results: ResultsView;
  private readonly banner: HTMLElement;
  private readonly toastBox: HTMLElement;
  private readonly runButton: HTMLButtonElement;
  private readonly strategySelect: HTMLSelectElement;
  private readonly seedInput: HTMLInputElement;
  private readonly historySelect: HTMLSelectElement;
  private readonly serverStatus: HTMLElement;
  private readonly chartCache = new Map<string, ChartDoc | null>();
  private lastResponse: SearchResponse | null = null;

  constructor(
    doc: Document,
    private readonly api: SearchApi,
  ) {
    this.root = doc.createElement("div");
    this.root.className = "app";

    this.banner = doc.createElement("div");
    this.banner.className = "banner";
    this.banner.hidden = true;

    this.toastBox = doc.createElement("div");
    this.toastBox.className = "toasts";

    const heading = doc.createElement("h1");
    heading.textContent = "chartsearch";

    this.editor = new QueryEditor(doc);
    this.editor.setText(STARTER_QUERY);

    const toolbar = doc.createElement("div");
    toolbar.className = "toolbar";
    this.runButton = doc.createElement("button");
    this.runButton.className = "run";
    this.runButton.textContent = "Search";
    this.runButton.disabled = true;

    this.strategySelect = doc.createElement("select");
    this.strategySelect.className = "strategy";
    for (const name of ["ranked", "randomized"]) {
      const option = doc.createElement("option");
      option.value = name;
      option.textContent = name;
      this.strategySelect.appendChild(option);
    }
    this.seedInput = doc.createElement("input");
    this.seedInput.type = "number";
    this.seedInput.className = "seed";
    this.seedInput.value = "0";
    this.seedInput.title = "shuffle seed";
    this.seedInput.hidden = true;

    this.historySelect = doc.createElement("select");
    this.historySelect.className = "history";
    this.renderHistory();

    this.serverStatus = doc.createElement("span");
    this.serverStatus.className = "server-status";

    toolbar.append(this.runButton, this.strategySelect, this.seedInput, this.historySelect, this.serverStatus);

    this.results = new ResultsView(doc, {
      onFindSimilar: (chartId) => void this.findSimilar(chartId),
      fetchChart: (chartId) => this.fetchChart(chartId),
      previewUrl: (row: ResultRow) => this.api.previewUrl(row.thumbnailUrl, 480),
      onRelax: (text) => {
        this.editor.setText(text);
        void this.runSearch();
      },
      onPage: (offset) => void this.runSearch(offset),
    });

    this.root.append(this.banner, heading, this.editor.root, toolbar, this.results.root, this.toastBox);

    this.editor.onValidityChange = (valid) => {
      this.runButton.disabled = !valid;
    };
    this.editor.onRunRequest = () => void this.runSearch();
    this.runButton.addEventListener("click", () => void this.runSearch());
    this.strategySelect.addEventListener("change", () => {
      this.seedInput.hidden = this.strategySelect.value !== "randomized";
    });
    this.historySelect.addEventListener("change", () => {
      const index = Number(this.historySelect.value);
      if (!Number.isNaN(index) && index >= 0) {
        this.editor.restoreHistory(index);
        this.historySelect.value = "";
      }
    });
  }

  // Health first, then the schema that powers validation/completions.
  async init(): Promise<boolean> {
    const health = await this.api.health();
    if (!health.ok) {
      this.showBanner();
      return false;
    }
    const schema = await this.api.schema();
    if (!schema.ok) {
      this.showBanner();
      return false;
    }
    this.banner.hidden = true;
    this.serverStatus.textContent = `${health.data.corpusSize} charts indexed`;
    this.editor.setSchema(schema.data);
    return true;
  }

  strategy(): Strategy {
    return this.strategySelect.value === "randomized" ? "randomized" : "ranked";
  }

  async runSearch(offset = 0): Promise<void> {
    const text = this.editor.text;
    if (!this.editor.isValid()) return;
    const strategy = this.strategy();
    // Paging an existing result set re-sends the seed the server echoed,
    // so a shuffled ordering stays put across pages.
    const seed =
      offset > 0 && this.lastResponse !== null
        ? this.lastResponse.seed
        : strategy === "randomized"
          ? Number(this.seedInput.value) || 0
          : undefined;
    const request: SearchRequest = { query: text, strategy, limit: PAGE_SIZE, offset };
    if (seed !== undefined) request.seed = seed;
    const result = await this.api.search(request);
    if (!result.ok) {
      if (result.status === 0) return;
      this.toast(describeError(result.error));
      return;
    }
    this.lastResponse = result.data;
    this.editor.recordRun(text);
    this.renderHistory();
    let docForHints: unknown = null;
    try {
      docForHints = JSON.parse(text);
    } catch {
      docForHints = null;
    }
    this.results.setSearch(result.data, docForHints);
  }

  async findSimilar(chartId: string): Promise<void> {
    const result = await this.api.searchByExample(chartId, PAGE_SIZE);
    if (!result.ok) {
      if (result.status === 0) return;
      if (result.status === 404) {
        this.toast(`chart ${chartId} is not in the corpus`);
      } else {
        this.toast(describeError(result.error));
      }
      return;
    }
    // The query that produced these results lands in the editor for
    // refinement; the previous text stays reachable through history.
    this.editor.recordRun(this.editor.text);
    const queryText = JSON.stringify(result.data.query, null, 2);
    this.editor.setText(queryText);
    this.editor.recordRun(queryText);
    this.renderHistory();
    this.lastResponse = result.data;
    this.results.setSearch(result.data, result.data.query);
  }

  private async fetchChart(chartId: string): Promise<ChartDoc | null> {
    const cached = this.chartCache.get(chartId);
    if (cached !== undefined) return cached;
    const result = await this.api.chart(chartId);
    const chart = result.ok ? result.data : null;
    this.chartCache.set(chartId, chart);
    return chart;
  }

  private renderHistory(): void {
    this.historySelect.textContent = "";
    const doc = this.historySelect.ownerDocument;
    const placeholder = doc.createElement("option");
    placeholder.value = "";
    placeholder.textContent = "history";
    this.historySelect.appendChild(placeholder);
    const entries = this.editor.historyEntries();
    for (let i = entries.length - 1; i >= 0; i--) {
      const option = doc.createElement("option");
      option.value = String(i);
      const flat = (entries[i] as string).replace(/\s+/g, " ");
      option.textContent = flat.length > 60 ? `${flat.slice(0, 57)}…` : flat;
      this.historySelect.appendChild(option);
    }
    this.historySelect.value = "";
    this.historySelect.disabled = entries.length === 0;
  }

  private showBanner(): void {
    this.banner.textContent = "";
    const doc = this.banner.ownerDocument;
    const message = doc.createElement("span");
    message.textContent = "The search service is not reachable.";
    const retry = doc.createElement("button");
    retry.textContent = "Retry";
    retry.addEventListener("click", () => void this.init());
    this.banner.append(message, retry);
    this.banner.hidden = false;
  }

  toast(message: string): void {
    const doc = this.toastBox.ownerDocument;
    const node = doc.createElement("div");
    node.className = "toast";
    node.textContent = message;
    this.toastBox.appendChild(node);
    const win = doc.defaultView;
    if (win !== null) win.setTimeout(() => node.remove(), 6000);
  }
}

function describeError(error: { error: string; message?: string; path?: string } | null): string {
  if (error === null) return "request failed";
  if (error.path !== undefined && error.message !== undefined) return `${error.path}: ${error.message}`;
  return error.message ?? error.error;
}

export function mount(doc: Document, baseUrl = ""): App {
  const app = new App(doc, new SearchApi(baseUrl));
  const host = doc.getElementById("app") ?? doc.body;
  host.appendChild(app.root);
  void app.init();
  return app;
}
