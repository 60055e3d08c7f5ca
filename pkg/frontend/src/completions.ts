// Cursor-position completions for query text being typed.
//
// Works on incomplete JSON: a tolerant scanner tracks the container stack
// up to the cursor, then the JSON path is resolved against the query
// schema to enumerate the keys or enum values that would be legal there.
// Candidates come straight from the schema the server publishes ("enum"
// for closed vocabularies, "examples" for pattern-typed positions), so
// the editor and the validator always agree.

type SchemaNode = Record<string, any>;

interface ObjFrame {
  kind: "obj";
  key: string | null;
  phase: "expect-key" | "after-key" | "expect-value" | "after-value";
}

interface ArrFrame {
  kind: "arr";
  index: number;
}

type Frame = ObjFrame | ArrFrame;
type Segment = string | number;

const BROKEN = Symbol("segments-broken");

interface ScanState {
  inString: boolean;
  role: "key" | "value" | null;
  segments: Segment[] | typeof BROKEN;
  prefix: string;
}

function scanToCursor(text: string, cursor: number): ScanState {
  const stack: Frame[] = [];
  let inString = false;
  let escape = false;
  let role: "key" | "value" | null = null;
  let buf = "";

  const end = Math.min(cursor, text.length);
  for (let i = 0; i < end; i++) {
    const ch = text[i] as string;
    if (inString) {
      if (escape) {
        escape = false;
        buf += ch;
      } else if (ch === "\\") {
        escape = true;
      } else if (ch === '"') {
        inString = false;
        const closed = buf;
        buf = "";
        const top = stack[stack.length - 1];
        if (role === "key" && top !== undefined && top.kind === "obj") {
          top.key = closed;
          top.phase = "after-key";
        } else if (top !== undefined && top.kind === "obj") {
          top.phase = "after-value";
        }
        role = null;
      } else {
        buf += ch;
      }
      continue;
    }
    if (ch === '"') {
      inString = true;
      buf = "";
      const top = stack[stack.length - 1];
      if (top !== undefined && top.kind === "obj" && (top.phase === "expect-key" || top.phase === "after-value")) {
        role = "key";
      } else {
        role = "value";
      }
    } else if (ch === "{") {
      stack.push({ kind: "obj", key: null, phase: "expect-key" });
    } else if (ch === "[") {
      stack.push({ kind: "arr", index: 0 });
    } else if (ch === "}") {
      const top = stack[stack.length - 1];
      if (top === undefined || top.kind !== "obj") {
        return { inString: false, role: null, segments: BROKEN, prefix: "" };
      }
      stack.pop();
      const next = stack[stack.length - 1];
      if (next !== undefined && next.kind === "obj") next.phase = "after-value";
    } else if (ch === "]") {
      const top = stack[stack.length - 1];
      if (top === undefined || top.kind !== "arr") {
        return { inString: false, role: null, segments: BROKEN, prefix: "" };
      }
      stack.pop();
      const next = stack[stack.length - 1];
      if (next !== undefined && next.kind === "obj") next.phase = "after-value";
    } else if (ch === ":") {
      const top = stack[stack.length - 1];
      if (top !== undefined && top.kind === "obj") top.phase = "expect-value";
    } else if (ch === ",") {
      const top = stack[stack.length - 1];
      if (top !== undefined) {
        if (top.kind === "obj") {
          top.phase = "expect-key";
          top.key = null;
        } else {
          top.index += 1;
        }
      }
    }
  }

  if (!inString) return { inString: false, role: null, segments: [], prefix: "" };

  const segments: Segment[] = [];
  for (let depth = 0; depth < stack.length; depth++) {
    const frame = stack[depth] as Frame;
    const last = depth === stack.length - 1;
    if (frame.kind === "arr") {
      segments.push(frame.index);
    } else {
      if (last && role === "key") continue;
      if (frame.key === null) return { inString: true, role, segments: BROKEN, prefix: "" };
      segments.push(frame.key);
    }
  }
  return { inString: true, role, segments, prefix: buf };
}

// Whether the string open at the cursor has a closing quote later.
function stringCloses(text: string, cursor: number): boolean {
  let escape = false;
  for (let i = cursor; i < text.length; i++) {
    const ch = text[i];
    if (escape) escape = false;
    else if (ch === "\\") escape = true;
    else if (ch === '"') return true;
  }
  return false;
}

function deref(schema: SchemaNode, node: any): any {
  while (node !== null && typeof node === "object" && !Array.isArray(node) && "$ref" in node) {
    const ref = String(node.$ref);
    const hash = ref.indexOf("#");
    const target = hash >= 0 ? ref.slice(hash + 1) : ref;
    let resolved: any = schema;
    for (const part of target.replace(/^\/+|\/+$/g, "").split("/")) {
      if (part === "") continue;
      resolved = resolved[part];
    }
    node = resolved;
  }
  return node;
}

// Walk a JSON path through the schema; yield every reachable subschema.
function* resolve(schema: SchemaNode, node: any, segments: Segment[]): Generator<SchemaNode> {
  if (node === null || typeof node !== "object" || Array.isArray(node)) return;
  node = deref(schema, node);
  if (segments.length === 0) {
    yield node;
    return;
  }
  const head = segments[0] as Segment;
  const rest = segments.slice(1);
  if ("oneOf" in node) {
    for (const branch of node.oneOf) yield* resolve(schema, branch, segments);
    return;
  }
  if (typeof head === "number") {
    if ("items" in node) yield* resolve(schema, node.items, rest);
    return;
  }
  const props = node.properties ?? {};
  if (head in props) {
    yield* resolve(schema, props[head], rest);
    return;
  }
  const extra = node.additionalProperties;
  if (extra !== null && typeof extra === "object" && !Array.isArray(extra)) {
    yield* resolve(schema, extra, rest);
  }
}

function valueCandidates(schema: SchemaNode, node: any): string[] {
  node = deref(schema, node);
  const out: string[] = [];
  if ("oneOf" in node) {
    for (const branch of node.oneOf) out.push(...valueCandidates(schema, branch));
    return out;
  }
  for (const key of ["enum", "examples"]) {
    for (const v of node[key] ?? []) {
      if (typeof v === "string") out.push(v);
    }
  }
  return out;
}

function keyCandidates(schema: SchemaNode, node: any): string[] {
  node = deref(schema, node);
  const out: string[] = [];
  if ("oneOf" in node) {
    for (const branch of node.oneOf) out.push(...keyCandidates(schema, branch));
    return out;
  }
  out.push(...Object.keys(node.properties ?? {}));
  return out;
}

// Candidate tokens for the cursor position, alphabetical.
//
// Suggestions appear only inside an unterminated string: either a key
// being typed or an enumerated value. A string that already has its
// closing quote yields nothing.
export function completionsAt(schema: SchemaNode, text: string, cursor: number): string[] {
  cursor = Math.max(0, Math.min(cursor, text.length));
  const state = scanToCursor(text, cursor);
  if (!state.inString || state.segments === BROKEN) return [];
  if (stringCloses(text, cursor)) return [];

  const candidates: string[] = [];
  for (const node of resolve(schema, schema, state.segments.slice())) {
    if (state.role === "key") candidates.push(...keyCandidates(schema, node));
    else candidates.push(...valueCandidates(schema, node));
  }
  const unique = [...new Set(candidates)].filter((c) => c.startsWith(state.prefix));
  return unique.sort();
}

// The fragment already typed inside the open string, so accepting a
// candidate knows how many characters it replaces. Null when the cursor
// is not inside an unterminated string.
export function completionPrefix(text: string, cursor: number): string | null {
  cursor = Math.max(0, Math.min(cursor, text.length));
  const state = scanToCursor(text, cursor);
  if (!state.inString || state.segments === BROKEN) return null;
  if (stringCloses(text, cursor)) return null;
  return state.prefix;
}
