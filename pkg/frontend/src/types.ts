// Shapes of the server's JSON payloads. The UI never interprets chart
// structure beyond displaying it; matching happens server-side.

export interface ChartMetadata {
  url: string;
  domain: string;
  title: string;
  pageText: string;
  timestamp?: string;
  thumbnailPath?: string;
}

export interface DataFieldDoc {
  name: string;
  dtype: string;
  values: unknown[];
}

export interface EncodingDoc {
  fieldName: string;
  dtype: string;
  mtype: string;
  channel: string;
}

export interface ChartDoc {
  id: string;
  fields: DataFieldDoc[];
  marks: unknown[];
  encodings: EncodingDoc[];
  axes: unknown[];
  metadata: ChartMetadata;
  background?: string;
}

export interface ResultRow {
  chartId: string;
  matched: boolean;
  binding: Record<string, string>;
  matchedEncodingCount: number;
  unmatchedChartEncodingCount: number;
  metadata: ChartMetadata | null;
  thumbnailUrl: string;
}

export interface SearchResponse {
  total: number;
  strategy: string;
  seed: number;
  limit: number | null;
  offset: number;
  results: ResultRow[];
  diagnostics: unknown[];
  warnings: { path: string; message: string }[];
}

export interface ByExampleResponse extends SearchResponse {
  query: unknown;
  sourceChartId: string;
}

export interface ApiError {
  error: string;
  message?: string;
  path?: string;
  position?: number;
  line?: number;
  column?: number;
}

export type Strategy = "ranked" | "randomized";

export interface SearchRequest {
  query: string | object;
  strategy?: Strategy;
  seed?: number;
  limit?: number;
  offset?: number;
}
