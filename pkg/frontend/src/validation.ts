// Client-side query validation that must agree with the server's
// 400-versus-200 verdict on the same text. The walk below mirrors the
// server's parser step for step: same key sets, same order of checks,
// same paths in the messages. Vocabularies (known keys, axis
// orientations) come from the served schema document so the two sides
// cannot drift apart on the word lists.
//
// One caveat is inherent: bare strings are regular expressions and each
// side compiles them with its own engine. The dialects agree on
// everything the query language documents, but exotic constructs
// accepted by only one engine would produce a split verdict.

import { tryNormalizeColor } from "./colors.js";

export interface Issue {
  kind: "syntax" | "schema";
  message: string;
  path?: string;
  position?: number;
  line?: number;
  column?: number;
}

export type Verdict = { ok: true; doc: unknown } | { ok: false; issue: Issue };

const AGGREGATE_OPS = ["average", "count", "max", "min", "sum"];
const COMPARE_OPS = ["eq", "gt", "gte", "lt", "lte"];
const TIME_BOUNDS = ["gt", "gte", "lt", "lte"];
const METADATA_KEYS = ["domain", "keyword", "timestamp", "title", "url"];
const VARIABLE_NAME = /^\$[A-Za-z][A-Za-z0-9_]*$/;
const WILDCARD = "*";

class SchemaError extends Error {
  constructor(
    readonly path: string,
    readonly detail: string,
  ) {
    super(`${path}: ${detail}`);
  }
}

function err(path: string, message: string): never {
  throw new SchemaError(path, message);
}

function isNumber(v: unknown): v is number {
  return typeof v === "number";
}

function isObject(v: unknown): v is Record<string, unknown> {
  return typeof v === "object" && v !== null && !Array.isArray(v);
}

function typeName(v: unknown): string {
  if (v === null) return "null";
  if (Array.isArray(v)) return "array";
  return typeof v;
}

function asList(node: unknown): unknown[] {
  return Array.isArray(node) ? node : [node];
}

export class QueryValidator {
  private readonly topKeys: string[];
  private readonly encodingKeys: string[];
  private readonly dataKeys: string[];
  private readonly axisKeys: string[];
  private readonly orients: string[];

  constructor(schema: Record<string, unknown>) {
    const defs = schema.$defs as Record<string, any>;
    this.topKeys = Object.keys(schema.properties as object);
    this.encodingKeys = Object.keys(defs.encodingClause.properties);
    this.dataKeys = Object.keys(defs.dataClause.properties);
    this.axisKeys = Object.keys(defs.axisConstraint.oneOf[1].properties);
    this.orients = defs.orient.enum as string[];
  }

  // The full text verdict: syntax first, then structure.
  verdict(text: string): Verdict {
    let doc: unknown;
    try {
      doc = JSON.parse(text);
    } catch (e) {
      return { ok: false, issue: syntaxIssue(e as Error, text) };
    }
    return this.verdictOnDocument(doc);
  }

  verdictOnDocument(doc: unknown): Verdict {
    try {
      this.walkQuery(doc);
      return { ok: true, doc };
    } catch (e) {
      if (e instanceof SchemaError) {
        return { ok: false, issue: { kind: "schema", message: e.detail, path: e.path } };
      }
      throw e;
    }
  }

  private expectKeys(node: Record<string, unknown>, allowed: string[], path: string): void {
    for (const key of Object.keys(node)) {
      if (!allowed.includes(key)) err(`${path}.${key}`, `unknown key '${key}'`);
    }
  }

  private walkPattern(value: unknown, path: string): void {
    if (typeof value !== "string") err(path, `expected a string pattern, got ${typeName(value)}`);
    if (value === WILDCARD) return;
    if (value.startsWith("$")) {
      if (!VARIABLE_NAME.test(value)) err(path, `bad variable name '${value}'`);
      return;
    }
    try {
      new RegExp(value);
    } catch (e) {
      err(path, `regex does not compile: ${(e as Error).message}`);
    }
  }

  private walkScalarPredicate(node: unknown, path: string): void {
    if (isNumber(node)) return;
    if (!isObject(node)) err(path, `expected a comparison, got ${typeName(node)}`);
    const keys = Object.keys(node);
    for (const key of keys) {
      const sub = node[key];
      const subpath = `${path}.${key}`;
      if (COMPARE_OPS.includes(key)) {
        if (key === "eq") {
          if (!isNumber(sub) && typeof sub !== "string") err(subpath, "eq needs a number or string");
        } else if (!isNumber(sub)) {
          err(subpath, `${key} needs a number`);
        }
      } else if (key === "and" || key === "or") {
        if (!Array.isArray(sub) || sub.length === 0) err(subpath, `${key} needs a non-empty array`);
        sub.forEach((c, i) => this.walkScalarPredicate(c, `${subpath}[${i}]`));
      } else if (key === "not") {
        this.walkScalarPredicate(sub, subpath);
      } else {
        err(subpath, `unknown comparison key '${key}'`);
      }
    }
    if (keys.length === 0) err(path, "empty predicate object");
  }

  private walkValuePredicate(node: unknown, path: string): void {
    if (typeof node === "string") {
      this.walkPattern(node, path);
      return;
    }
    if (isNumber(node)) return;
    if (!isObject(node)) err(path, `expected a value predicate, got ${typeName(node)}`);
    const keys = Object.keys(node);
    for (const key of keys) {
      const sub = node[key];
      const subpath = `${path}.${key}`;
      if (AGGREGATE_OPS.includes(key)) {
        this.walkScalarPredicate(sub, subpath);
      } else if (key === "and" || key === "or") {
        if (!Array.isArray(sub) || sub.length === 0) err(subpath, `${key} needs a non-empty array`);
        sub.forEach((c, i) => this.walkValuePredicate(c, `${subpath}[${i}]`));
      } else if (key === "not") {
        this.walkValuePredicate(sub, subpath);
      } else if (key === "colorSim") {
        if (tryNormalizeColor(sub) === null) err(subpath, `'${String(sub)}' is not a recognized color`);
      } else if (key === "wordSim") {
        if (typeof sub !== "string" || sub === "") err(subpath, "wordSim needs a non-empty string");
      } else if (COMPARE_OPS.includes(key)) {
        if (key === "eq") {
          if (!isNumber(sub) && typeof sub !== "string") err(subpath, "eq needs a number or string");
        } else if (!isNumber(sub)) {
          err(subpath, `${key} needs a number`);
        }
      } else {
        err(subpath, `unknown predicate key '${key}'`);
      }
    }
    if (keys.length === 0) err(path, "empty predicate object");
  }

  private walkFieldConstraint(node: unknown, path: string): void {
    if (isObject(node)) {
      this.expectKeys(node, ["wordSim"], path);
      if (!("wordSim" in node)) err(path, "field object supports only wordSim");
      const target = node.wordSim;
      if (typeof target !== "string" || target === "") {
        err(`${path}.wordSim`, "wordSim needs a non-empty string");
      }
      return;
    }
    this.walkPattern(node, path);
  }

  private walkStyleConstraint(node: unknown, path: string): void {
    if (typeof node === "string") {
      this.walkPattern(node, path);
      return;
    }
    if (isNumber(node)) return;
    if (isObject(node)) {
      if ("colorSim" in node) {
        this.expectKeys(node, ["colorSim"], path);
        if (tryNormalizeColor(node.colorSim) === null) {
          err(`${path}.colorSim`, `'${String(node.colorSim)}' is not a recognized color`);
        }
        return;
      }
      this.walkScalarPredicate(node, path);
      return;
    }
    err(path, `expected a style constraint, got ${typeName(node)}`);
  }

  private walkAxis(node: unknown, path: string): void {
    if (node === true) return;
    if (node === false) err(path, "axis: false is not supported; omit the key instead");
    if (!isObject(node)) err(path, `expected true or an axis object, got ${typeName(node)}`);
    this.expectKeys(node, this.axisKeys, path);
    // An explicit null in an axis slot reads as "no constraint", matching
    // the server; everywhere else null is a type error.
    const orient = node.orient ?? null;
    if (orient !== null && !this.orients.includes(orient as string)) {
      err(`${path}.orient`, `unknown orientation '${String(orient)}'`);
    }
    if (node.title != null) this.walkPattern(node.title, `${path}.title`);
    if (node.tickColor != null) this.walkStyleConstraint(node.tickColor, `${path}.tickColor`);
    if (node.tickWidth != null) this.walkScalarPredicate(node.tickWidth, `${path}.tickWidth`);
  }

  private walkEncodingClause(node: unknown, path: string): void {
    if (!isObject(node)) err(path, `expected an encoding clause object, got ${typeName(node)}`);
    this.expectKeys(node, this.encodingKeys, path);
    if ("channel" in node) this.walkPattern(node.channel, `${path}.channel`);
    if ("type" in node) this.walkPattern(node.type, `${path}.type`);
    if ("field" in node) this.walkFieldConstraint(node.field, `${path}.field`);
    if ("mark" in node) this.walkPattern(node.mark, `${path}.mark`);
    if ("values" in node) this.walkValuePredicate(node.values, `${path}.values`);
    if ("axis" in node) this.walkAxis(node.axis, `${path}.axis`);
    if ("count" in node) this.walkScalarPredicate(node.count, `${path}.count`);
  }

  private walkMarkClause(node: unknown, path: string): void {
    if (typeof node === "string") {
      this.walkPattern(node, path);
      return;
    }
    if (!isObject(node)) err(path, `expected a mark clause, got ${typeName(node)}`);
    for (const key of Object.keys(node)) {
      if (key === "type") this.walkPattern(node[key], `${path}.type`);
      else this.walkStyleConstraint(node[key], `${path}.${key}`);
    }
  }

  private walkDataClause(node: unknown, path: string): void {
    if (!isObject(node)) err(path, `expected a data clause object, got ${typeName(node)}`);
    this.expectKeys(node, this.dataKeys, path);
    if ("field" in node) this.walkFieldConstraint(node.field, `${path}.field`);
    if ("values" in node) this.walkValuePredicate(node.values, `${path}.values`);
  }

  private walkTimestamp(node: unknown, path: string): void {
    if (typeof node === "string") {
      this.walkPattern(node, path);
      return;
    }
    if (isObject(node)) {
      const keys = Object.keys(node);
      for (const key of keys) {
        if (!TIME_BOUNDS.includes(key)) err(`${path}.${key}`, `unknown time bound '${key}'`);
        if (typeof node[key] !== "string") err(`${path}.${key}`, "time bounds are ISO-8601 strings");
      }
      if (keys.length === 0) err(path, "empty time constraint");
      return;
    }
    err(path, `expected a timestamp constraint, got ${typeName(node)}`);
  }

  private walkQuery(doc: unknown): void {
    if (!isObject(doc)) err("$", `a query is a JSON object, got ${typeName(doc)}`);
    this.expectKeys(doc, this.topKeys, "$");
    if (Object.keys(doc).length === 0) err("$", "query specifies nothing; give at least one clause");

    let clauses = 0;
    if ("data" in doc) {
      asList(doc.data).forEach((n, i) => this.walkDataClause(n, `$.data[${i}]`));
      clauses += asList(doc.data).length;
    }
    if ("mark" in doc) {
      asList(doc.mark).forEach((n, i) => this.walkMarkClause(n, `$.mark[${i}]`));
      clauses += asList(doc.mark).length;
    }
    if ("encoding" in doc) {
      asList(doc.encoding).forEach((n, i) => this.walkEncodingClause(n, `$.encoding[${i}]`));
      clauses += asList(doc.encoding).length;
    }
    for (const key of METADATA_KEYS) {
      if (!(key in doc)) continue;
      if (key === "timestamp") this.walkTimestamp(doc[key], `$.${key}`);
      else this.walkPattern(doc[key], `$.${key}`);
      clauses += 1;
    }
    if (clauses === 0) err("$", "query specifies nothing; give at least one clause");
  }
}

// V8 and SpiderMonkey phrase JSON.parse errors differently; pull out a
// position when one is present so the editor can point at it.
function syntaxIssue(e: Error, text: string): Issue {
  const issue: Issue = { kind: "syntax", message: e.message };
  const at = /position (\d+)/.exec(e.message);
  if (at) {
    const position = Number(at[1]);
    issue.position = position;
    const before = text.slice(0, position);
    issue.line = before.split("\n").length;
    issue.column = position - before.lastIndexOf("\n");
  }
  return issue;
}
