// Thin fetch client for the search service. Queries travel as text, not
// as re-serialized objects, so the server syntax-checks the same bytes
// the editor validated.

import type {
  ApiError,
  ByExampleResponse,
  ChartDoc,
  SearchRequest,
  SearchResponse,
} from "./types.js";

export type ApiResult<T> =
  | { ok: true; data: T }
  | { ok: false; status: number; error: ApiError }
  | { ok: false; status: 0; error: null; aborted: boolean };

async function toResult<T>(promise: Promise<Response>): Promise<ApiResult<T>> {
  let response: Response;
  try {
    response = await promise;
  } catch (e) {
    const aborted = e instanceof DOMException && e.name === "AbortError";
    return { ok: false, status: 0, error: null, aborted };
  }
  let body: unknown = null;
  try {
    body = await response.json();
  } catch {
    body = null;
  }
  if (!response.ok) {
    const error = (body ?? { error: "request", message: `HTTP ${response.status}` }) as ApiError;
    return { ok: false, status: response.status, error };
  }
  return { ok: true, data: body as T };
}

export class SearchApi {
  private inflight: AbortController | null = null;

  constructor(readonly baseUrl: string = "") {}

  async health(): Promise<ApiResult<{ status: string; corpusSize: number }>> {
    return toResult(fetch(`${this.baseUrl}/health`));
  }

  async schema(): Promise<ApiResult<Record<string, unknown>>> {
    return toResult(fetch(`${this.baseUrl}/api/schema`));
  }

  // Only one search runs at a time; a new one cancels its predecessor so
  // slow responses cannot land on top of newer results.
  async search(request: SearchRequest): Promise<ApiResult<SearchResponse>> {
    this.inflight?.abort();
    const controller = new AbortController();
    this.inflight = controller;
    const result = await toResult<SearchResponse>(
      fetch(`${this.baseUrl}/api/search`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(request),
        signal: controller.signal,
      }),
    );
    if (this.inflight === controller) this.inflight = null;
    return result;
  }

  async searchByExample(
    chartId: string,
    limit?: number,
    offset?: number,
  ): Promise<ApiResult<ByExampleResponse>> {
    this.inflight?.abort();
    const controller = new AbortController();
    this.inflight = controller;
    const body: Record<string, unknown> = { chartId };
    if (limit !== undefined) body.limit = limit;
    if (offset !== undefined) body.offset = offset;
    const result = await toResult<ByExampleResponse>(
      fetch(`${this.baseUrl}/api/search/by-example`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(body),
        signal: controller.signal,
      }),
    );
    if (this.inflight === controller) this.inflight = null;
    return result;
  }

  async chart(chartId: string): Promise<ApiResult<ChartDoc>> {
    return toResult(fetch(`${this.baseUrl}/api/charts/${encodeURIComponent(chartId)}`));
  }

  async demographics(report: string): Promise<ApiResult<Record<string, unknown>>> {
    const qs = new URLSearchParams({ report });
    return toResult(fetch(`${this.baseUrl}/api/demographics?${qs}`));
  }

  previewUrl(thumbnailUrl: string, width?: number): string {
    if (width === undefined) return `${this.baseUrl}${thumbnailUrl}`;
    return `${this.baseUrl}${thumbnailUrl}?width=${width}`;
  }
}
