// The editor's verdict must equal the server's 400-versus-accepted
// verdict for the same query text. Twenty queries, half well formed and
// half broken in assorted ways, are checked against a live service; for
// structural rejections the error path must agree too.

import { afterAll, beforeAll, expect, it } from "vitest";
import { QueryValidator } from "../src/validation.js";
import { startServer, type LiveServer } from "./server.js";

const PORT = 8211;

interface BatteryEntry {
  name: string;
  text: string;
  valid: boolean;
}

const BATTERY: BatteryEntry[] = [
  // Well formed.
  { name: "bare mark", text: '{"mark": "bar"}', valid: true },
  {
    name: "vertical bars",
    text: '{\n  "mark": "bar",\n  "encoding": [\n    {"channel": "y", "type": "quantitative"},\n    {"channel": "x"}\n  ]\n}',
    valid: true,
  },
  { name: "encoding count", text: '{"encoding": {"count": {"gte": 2}}}', valid: true },
  {
    name: "diverging data with variable",
    text: '{"data": {"field": "$t", "values": {"min": {"lt": 0}, "max": {"gt": 0}}}, "encoding": [{"channel": "x|y", "field": "$t", "type": "quantitative", "mark": "bar"}]}',
    valid: true,
  },
  { name: "mark style string", text: '{"mark": {"type": "text", "typeface": "Helvetica"}}', valid: true },
  { name: "mark fill colorSim", text: '{"mark": {"fill": {"colorSim": "steelblue"}}}', valid: true },
  { name: "metadata title and domain", text: '{"title": ".*election.*", "domain": "gov"}', valid: true },
  { name: "timestamp lower bound", text: '{"timestamp": {"gte": "2020-01-01T00:00:00Z"}}', valid: true },
  {
    name: "axis orientation and tick width",
    text: '{"encoding": {"axis": {"orient": "left", "tickWidth": {"gte": 1}}}}',
    valid: true,
  },
  { name: "values wordSim", text: '{"encoding": {"values": {"wordSim": "people"}}}', valid: true },
  // Broken.
  { name: "trailing comma", text: '{"mark": "bar",}', valid: false },
  { name: "empty object", text: "{}", valid: false },
  { name: "unknown top key", text: '{"marks": "bar"}', valid: false },
  { name: "numeric mark clause", text: '{"mark": 7}', valid: false },
  { name: "misspelled encoding key", text: '{"encoding": {"chanel": "x"}}', valid: false },
  { name: "unknown color", text: '{"mark": {"fill": {"colorSim": "notacolor"}}}', valid: false },
  { name: "unknown orientation", text: '{"encoding": {"axis": {"orient": "diagonal"}}}', valid: false },
  { name: "string in numeric compare", text: '{"data": {"values": {"count": {"gt": "three"}}}}', valid: false },
  { name: "bad variable name", text: '{"encoding": {"field": "$9bad"}}', valid: false },
  { name: "regex that cannot compile", text: '{"mark": "["}', valid: false },
];

let server: LiveServer;
let validator: QueryValidator;

beforeAll(async () => {
  server = await startServer(PORT, 7, 40);
  const response = await fetch(`${server.baseUrl}/api/schema`);
  expect(response.ok).toBe(true);
  validator = new QueryValidator((await response.json()) as Record<string, unknown>);
});

afterAll(async () => {
  await server.stop();
});

interface ServerVerdict {
  valid: boolean;
  kind?: string;
  path?: string;
}

async function serverVerdict(text: string): Promise<ServerVerdict> {
  const response = await fetch(`${server.baseUrl}/api/search`, {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify({ query: text, limit: 1 }),
  });
  const body = (await response.json()) as { error?: string; path?: string };
  if (response.status === 400) {
    return { valid: false, kind: body.error, path: body.path };
  }
  // 200 is a normal outcome; 422 means the query was accepted but every
  // chart errored during evaluation. Both count as schema-valid.
  expect([200, 422]).toContain(response.status);
  return { valid: true };
}

it.each(BATTERY)("verdicts agree: $name", async ({ text, valid }) => {
  const client = validator.verdict(text);
  const server_ = await serverVerdict(text);

  expect(client.ok).toBe(valid);
  expect(server_.valid).toBe(valid);
  expect(client.ok).toBe(server_.valid);

  if (!client.ok && server_.kind !== undefined) {
    expect(client.issue.kind).toBe(server_.kind);
    if (client.issue.kind === "schema") {
      expect(client.issue.path).toBe(server_.path);
    }
  }
});

it("agrees on the whole battery", async () => {
  let agreements = 0;
  for (const entry of BATTERY) {
    const client = validator.verdict(entry.text).ok;
    const server_ = (await serverVerdict(entry.text)).valid;
    if (client === server_) agreements += 1;
  }
  expect(agreements).toBe(BATTERY.length);
});
