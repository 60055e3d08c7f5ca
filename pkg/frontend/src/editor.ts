// Query editor: a textarea with live validation against the served
// schema, completion suggestions at the cursor, and a history of
// executed queries. Validation runs on every edit; the verdict decides
// whether the run action is offered at all.

import { completionsAt, completionPrefix } from "./completions.js";
import { QueryValidator, type Verdict } from "./validation.js";

export class QueryEditor {
  readonly root: HTMLDivElement;
  readonly textarea: HTMLTextAreaElement;
  private readonly status: HTMLDivElement;
  private readonly listbox: HTMLUListElement;
  private validator: QueryValidator | null = null;
  private schema: Record<string, unknown> | null = null;
  private candidates: string[] = [];
  private highlighted = -1;
  private history: string[] = [];

  onValidityChange: ((valid: boolean) => void) | null = null;
  onRunRequest: (() => void) | null = null;

  constructor(doc: Document) {
    this.root = doc.createElement("div");
    this.root.className = "editor";

    const box = doc.createElement("div");
    box.className = "editor-box";
    this.textarea = doc.createElement("textarea");
    this.textarea.rows = 9;
    this.textarea.spellcheck = false;
    this.textarea.setAttribute("aria-label", "query");
    this.listbox = doc.createElement("ul");
    this.listbox.className = "completions";
    this.listbox.hidden = true;
    box.append(this.textarea, this.listbox);

    this.status = doc.createElement("div");
    this.status.className = "editor-status";
    this.status.dataset.state = "idle";

    this.root.append(box, this.status);

    this.textarea.addEventListener("input", () => this.refresh());
    this.textarea.addEventListener("keydown", (e) => this.onKeydown(e));
    this.textarea.addEventListener("blur", () => this.closeCompletions());
    this.listbox.addEventListener("mousedown", (e) => {
      // mousedown, not click: the textarea must not blur first.
      const value = (e.target as HTMLElement).closest("li")?.dataset.value;
      if (value !== undefined) {
        e.preventDefault();
        this.accept(value);
      }
    });
  }

  setSchema(schema: Record<string, unknown>): void {
    this.schema = schema;
    this.validator = new QueryValidator(schema);
    this.refresh();
  }

  get text(): string {
    return this.textarea.value;
  }

  setText(text: string): void {
    this.textarea.value = text;
    this.refresh();
  }

  // Current verdict, or null before the schema has arrived.
  validate(): Verdict | null {
    return this.validator ? this.validator.verdict(this.textarea.value) : null;
  }

  isValid(): boolean {
    const v = this.validate();
    return v !== null && v.ok;
  }

  recordRun(text: string): void {
    if (this.history[this.history.length - 1] === text) return;
    this.history.push(text);
  }

  historyEntries(): readonly string[] {
    return this.history;
  }

  restoreHistory(index: number): void {
    const entry = this.history[index];
    if (entry !== undefined) this.setText(entry);
  }

  currentCompletions(): readonly string[] {
    return this.candidates;
  }

  private refresh(): void {
    this.renderVerdict();
    this.refreshCompletions();
  }

  private renderVerdict(): void {
    const verdict = this.validate();
    if (verdict === null) {
      this.status.dataset.state = "idle";
      this.status.textContent = "";
      this.onValidityChange?.(false);
      return;
    }
    if (verdict.ok) {
      this.status.dataset.state = "ok";
      this.status.textContent = "query is well formed";
    } else if (verdict.issue.kind === "syntax") {
      this.status.dataset.state = "syntax";
      const where =
        verdict.issue.line !== undefined ? ` (line ${verdict.issue.line}, column ${verdict.issue.column})` : "";
      this.status.textContent = `syntax: ${verdict.issue.message}${where}`;
    } else {
      this.status.dataset.state = "schema";
      this.status.textContent = `${verdict.issue.path}: ${verdict.issue.message}`;
    }
    this.onValidityChange?.(verdict.ok);
  }

  private refreshCompletions(): void {
    if (this.schema === null) return;
    const cursor = this.textarea.selectionStart ?? this.textarea.value.length;
    this.candidates = completionsAt(this.schema, this.textarea.value, cursor);
    this.highlighted = this.candidates.length > 0 ? 0 : -1;
    this.renderCompletions();
  }

  private renderCompletions(): void {
    this.listbox.textContent = "";
    if (this.candidates.length === 0) {
      this.listbox.hidden = true;
      return;
    }
    const doc = this.listbox.ownerDocument;
    this.candidates.forEach((candidate, i) => {
      const item = doc.createElement("li");
      item.textContent = candidate;
      item.dataset.value = candidate;
      if (i === this.highlighted) item.classList.add("highlighted");
      this.listbox.appendChild(item);
    });
    this.listbox.hidden = false;
  }

  private closeCompletions(): void {
    this.candidates = [];
    this.highlighted = -1;
    this.listbox.hidden = true;
  }

  private accept(candidate: string): void {
    const cursor = this.textarea.selectionStart ?? this.textarea.value.length;
    const prefix = completionPrefix(this.textarea.value, cursor);
    if (prefix === null || !candidate.startsWith(prefix)) return;
    const tail = candidate.slice(prefix.length);
    const value = this.textarea.value;
    this.textarea.value = value.slice(0, cursor) + tail + value.slice(cursor);
    const after = cursor + tail.length;
    this.textarea.setSelectionRange(after, after);
    this.closeCompletions();
    this.renderVerdict();
    this.textarea.focus();
  }

  private onKeydown(e: KeyboardEvent): void {
    if (e.key === "Enter" && (e.ctrlKey || e.metaKey)) {
      e.preventDefault();
      if (this.isValid()) this.onRunRequest?.();
      return;
    }
    if (this.listbox.hidden) return;
    if (e.key === "ArrowDown") {
      e.preventDefault();
      this.highlighted = (this.highlighted + 1) % this.candidates.length;
      this.renderCompletions();
    } else if (e.key === "ArrowUp") {
      e.preventDefault();
      this.highlighted = (this.highlighted - 1 + this.candidates.length) % this.candidates.length;
      this.renderCompletions();
    } else if (e.key === "Tab" || (e.key === "Enter" && this.highlighted >= 0)) {
      e.preventDefault();
      const candidate = this.candidates[this.highlighted];
      if (candidate !== undefined) this.accept(candidate);
    } else if (e.key === "Escape") {
      this.closeCompletions();
    }
  }
}
