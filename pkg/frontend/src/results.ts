// Results presentation: a thumbnail grid and a detail list over the same
// row array, so switching views can never reorder or refilter what the
// server returned. Matching itself always happens server-side; this
// module only renders what came back.

import type { ChartDoc, ResultRow, SearchResponse } from "./types.js";

export type ViewMode = "grid" | "list";

export interface ResultsCallbacks {
  onFindSimilar: (chartId: string) => void;
  fetchChart: (chartId: string) => Promise<ChartDoc | null>;
  previewUrl: (row: ResultRow) => string;
  onRelax: (queryText: string) => void;
  onPage: (offset: number) => void;
}

interface PageState {
  total: number;
  limit: number;
  offset: number;
}

export class ResultsView {
  readonly root: HTMLElement;
  private readonly summary: HTMLElement;
  private readonly gridButton: HTMLButtonElement;
  private readonly listButton: HTMLButtonElement;
  private readonly container: HTMLElement;
  private readonly footer: HTMLElement;
  private mode: ViewMode = "grid";
  private rows: ResultRow[] = [];
  private page: PageState | null = null;
  private queryDoc: unknown = null;

  constructor(
    doc: Document,
    private readonly callbacks: ResultsCallbacks,
  ) {
    this.root = doc.createElement("section");
    this.root.className = "results";

    const header = doc.createElement("div");
    header.className = "results-header";
    this.summary = doc.createElement("span");
    this.summary.className = "results-summary";
    const toggle = doc.createElement("div");
    toggle.className = "view-toggle";
    toggle.setAttribute("role", "group");
    this.gridButton = doc.createElement("button");
    this.gridButton.textContent = "grid";
    this.gridButton.dataset.mode = "grid";
    this.listButton = doc.createElement("button");
    this.listButton.textContent = "list";
    this.listButton.dataset.mode = "list";
    toggle.append(this.gridButton, this.listButton);
    header.append(this.summary, toggle);

    this.container = doc.createElement("div");
    this.container.className = "results-body";
    this.footer = doc.createElement("div");
    this.footer.className = "results-footer";

    this.root.append(header, this.container, this.footer);

    this.gridButton.addEventListener("click", () => this.setMode("grid"));
    this.listButton.addEventListener("click", () => this.setMode("list"));
    this.syncToggle();
  }

  get viewMode(): ViewMode {
    return this.mode;
  }

  // Chart ids in display order; the toggle test keys on this.
  displayedIds(): string[] {
    return [...this.container.querySelectorAll<HTMLElement>("[data-chart-id]")].map(
      (el) => el.dataset.chartId as string,
    );
  }

  setMode(mode: ViewMode): void {
    if (mode === this.mode) return;
    this.mode = mode;
    this.syncToggle();
    this.renderRows();
  }

  setSearch(response: SearchResponse, queryDoc: unknown): void {
    this.rows = response.results;
    // A null limit means the server returned everything in one page.
    this.page = {
      total: response.total,
      limit: response.limit ?? Math.max(response.total, 1),
      offset: response.offset,
    };
    this.queryDoc = queryDoc;
    this.summary.textContent = summarize(this.page, this.rows.length);
    this.renderRows();
    this.renderFooter();
  }

  clear(): void {
    this.rows = [];
    this.page = null;
    this.queryDoc = null;
    this.summary.textContent = "";
    this.container.textContent = "";
    this.footer.textContent = "";
  }

  private syncToggle(): void {
    this.gridButton.setAttribute("aria-pressed", String(this.mode === "grid"));
    this.listButton.setAttribute("aria-pressed", String(this.mode === "list"));
  }

  private renderRows(): void {
    this.container.textContent = "";
    this.container.dataset.mode = this.mode;
    if (this.page === null) return;
    if (this.rows.length === 0) {
      this.renderEmpty();
      return;
    }
    for (const row of this.rows) {
      this.container.appendChild(this.mode === "grid" ? this.gridCard(row) : this.listRow(row));
    }
  }

  private gridCard(row: ResultRow): HTMLElement {
    const doc = this.container.ownerDocument;
    const card = doc.createElement("figure");
    card.className = "card";
    card.dataset.chartId = row.chartId;

    const img = doc.createElement("img");
    img.setAttribute("loading", "lazy");
    img.src = this.callbacks.previewUrl(row);
    img.alt = row.metadata?.title ?? row.chartId;

    const caption = doc.createElement("figcaption");
    const title = doc.createElement("strong");
    title.textContent = row.metadata?.title ?? row.chartId;
    const origin = doc.createElement("span");
    origin.className = "origin";
    origin.textContent = row.metadata?.domain ?? "";
    caption.append(title, origin, this.countsBadge(row), this.similarButton(row));

    card.append(img, caption);
    return card;
  }

  private listRow(row: ResultRow): HTMLElement {
    const doc = this.container.ownerDocument;
    const article = doc.createElement("article");
    article.className = "row";
    article.dataset.chartId = row.chartId;

    const head = doc.createElement("div");
    head.className = "row-head";
    const title = doc.createElement("strong");
    title.textContent = row.metadata?.title ?? row.chartId;
    head.append(title);
    if (row.metadata?.url) {
      const link = doc.createElement("a");
      link.href = row.metadata.url;
      link.textContent = row.metadata.url;
      link.className = "source-url";
      link.target = "_blank";
      link.rel = "noreferrer";
      head.append(link);
    }
    head.append(this.countsBadge(row), this.similarButton(row));

    const chips = doc.createElement("div");
    chips.className = "chips";
    chips.textContent = "…";

    const more = doc.createElement("button");
    more.className = "show-more";
    more.textContent = "Show more";
    const details = doc.createElement("div");
    details.className = "row-details";
    details.hidden = true;
    more.addEventListener("click", () => {
      details.hidden = !details.hidden;
      more.textContent = details.hidden ? "Show more" : "Show less";
    });

    article.append(head, chips, more, details);

    void this.callbacks.fetchChart(row.chartId).then((chart) => {
      if (chart === null) {
        chips.textContent = "";
        return;
      }
      chips.textContent = "";
      for (const enc of chart.encodings) {
        const chip = doc.createElement("span");
        chip.className = `chip chip-${enc.dtype}`;
        chip.textContent = `${enc.fieldName} → ${enc.channel}`;
        chips.appendChild(chip);
      }
      details.appendChild(fieldTable(doc, chart));
    });

    return article;
  }

  private countsBadge(row: ResultRow): HTMLElement {
    const badge = this.container.ownerDocument.createElement("span");
    badge.className = "counts";
    badge.textContent = `${row.matchedEncodingCount} matched · ${row.unmatchedChartEncodingCount} extra`;
    return badge;
  }

  private similarButton(row: ResultRow): HTMLElement {
    const button = this.container.ownerDocument.createElement("button");
    button.className = "find-similar";
    button.textContent = "Find similar";
    button.addEventListener("click", () => this.callbacks.onFindSimilar(row.chartId));
    return button;
  }

  private renderEmpty(): void {
    const doc = this.container.ownerDocument;
    const empty = doc.createElement("div");
    empty.className = "empty-state";
    const message = doc.createElement("p");
    message.textContent = "No charts matched this query.";
    empty.appendChild(message);

    const hints = relaxations(this.queryDoc);
    if (hints.length > 0) {
      const lead = doc.createElement("p");
      lead.textContent = "Try dropping one clause:";
      empty.appendChild(lead);
      const list = doc.createElement("div");
      list.className = "relax-hints";
      for (const hint of hints) {
        const button = doc.createElement("button");
        button.className = "relax-hint";
        button.textContent = `without ${hint.label}`;
        button.addEventListener("click", () => this.callbacks.onRelax(hint.text));
        list.appendChild(button);
      }
      empty.appendChild(list);
    }
    this.container.appendChild(empty);
  }

  private renderFooter(): void {
    this.footer.textContent = "";
    if (this.page === null || this.page.total <= this.page.limit) return;
    const doc = this.footer.ownerDocument;
    const prev = doc.createElement("button");
    prev.textContent = "← prev";
    prev.disabled = this.page.offset === 0;
    prev.addEventListener("click", () => {
      if (this.page !== null) {
        this.callbacks.onPage(Math.max(0, this.page.offset - this.page.limit));
      }
    });
    const next = doc.createElement("button");
    next.textContent = "next →";
    next.disabled = this.page.offset + this.page.limit >= this.page.total;
    next.addEventListener("click", () => {
      if (this.page !== null) {
        this.callbacks.onPage(this.page.offset + this.page.limit);
      }
    });
    this.footer.append(prev, next);
  }
}

function summarize(page: PageState, shown: number): string {
  if (page.total === 0) return "0 results";
  const from = page.offset + 1;
  const to = page.offset + shown;
  return `${from}–${to} of ${page.total}`;
}

function fieldTable(doc: Document, chart: ChartDoc): HTMLElement {
  const table = doc.createElement("table");
  table.className = "field-table";
  const head = doc.createElement("tr");
  for (const label of ["field", "type", "values"]) {
    const th = doc.createElement("th");
    th.textContent = label;
    head.appendChild(th);
  }
  table.appendChild(head);
  for (const field of chart.fields) {
    const tr = doc.createElement("tr");
    const name = doc.createElement("td");
    name.textContent = field.name;
    const dtype = doc.createElement("td");
    const chip = doc.createElement("span");
    chip.className = `chip chip-${field.dtype}`;
    chip.textContent = field.dtype;
    dtype.appendChild(chip);
    const values = doc.createElement("td");
    const preview = field.values.slice(0, 6).map(String).join(", ");
    values.textContent = field.values.length > 6 ? `${preview}, …` : preview;
    tr.append(name, dtype, values);
    table.appendChild(tr);
  }
  return table;
}

interface Relaxation {
  label: string;
  text: string;
}

// One variant of the query per droppable clause. A variant that would
// leave nothing behind is not offered.
export function relaxations(queryDoc: unknown): Relaxation[] {
  if (typeof queryDoc !== "object" || queryDoc === null || Array.isArray(queryDoc)) return [];
  const doc = queryDoc as Record<string, unknown>;
  const out: Relaxation[] = [];
  const clauseCount = countClauses(doc);
  for (const key of Object.keys(doc)) {
    const node = doc[key];
    if (Array.isArray(node) && node.length > 1 && (key === "data" || key === "mark" || key === "encoding")) {
      node.forEach((_, i) => {
        const copy = { ...doc, [key]: node.filter((_, j) => j !== i) };
        out.push({ label: `$.${key}[${i}]`, text: JSON.stringify(copy, null, 2) });
      });
    } else if (clauseCount > 1) {
      const copy = { ...doc };
      delete copy[key];
      out.push({ label: `$.${key}`, text: JSON.stringify(copy, null, 2) });
    }
  }
  return out;
}

function countClauses(doc: Record<string, unknown>): number {
  let n = 0;
  for (const key of Object.keys(doc)) {
    const node = doc[key];
    n += Array.isArray(node) ? node.length : 1;
  }
  return n;
}
