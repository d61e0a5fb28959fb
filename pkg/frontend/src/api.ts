/** Thin typed client for the movekin API. One AbortController per channel
 *  so a superseding request cancels the in-flight one. */

import type {
  AnimalInfo,
  IGSummary,
  Matrix,
  Meta,
  PairSeries,
  Snapshot,
  Trace,
  UncertaintyRows,
  ViewConfig,
} from "./types.js";

export class ApiError extends Error {
  constructor(public status: number, public code: string, message: string) {
    super(message);
  }
}

export class ApiClient {
  private controllers = new Map<string, AbortController>();

  constructor(public baseUrl: string = "") {}

  private async get<T>(path: string, channel?: string): Promise<T> {
    let signal: AbortSignal | undefined;
    if (channel) {
      this.controllers.get(channel)?.abort();
      const controller = new AbortController();
      this.controllers.set(channel, controller);
      signal = controller.signal;
    }
    const resp = await fetch(this.baseUrl + path, { signal });
    const body = await resp.json();
    if (!resp.ok) {
      throw new ApiError(resp.status, body.code ?? "error", body.message ?? "request failed");
    }
    return body as T;
  }

  meta(): Promise<Meta> {
    return this.get<Meta>("/api/meta");
  }

  animals(): Promise<{ animals: AnimalInfo[] }> {
    return this.get("/api/animals");
  }

  snapshot(t: number, dur: number): Promise<Snapshot> {
    return this.get(`/api/snapshot?t=${t}&dur=${dur}`, "snapshot");
  }

  trace(animal: string, t: number, dur: number, mode: string, alpha: number): Promise<Trace> {
    return this.get(
      `/api/trace?animal=${encodeURIComponent(animal)}&t=${t}&dur=${dur}` +
        `&mode=${mode}&alpha=${alpha}`,
      `trace:${animal}`,
    );
  }

  pairSeries(i: string, j: string, from: number, to: number): Promise<PairSeries> {
    return this.get(
      `/api/relatedness/pair?i=${encodeURIComponent(i)}&j=${encodeURIComponent(j)}` +
        `&from=${from}&to=${to}`,
      "pair",
    );
  }

  matrix(from: number, to: number, species?: string[]): Promise<Matrix> {
    let url = `/api/relatedness/matrix?from=${from}&to=${to}`;
    if (species && species.length) {
      url += `&species=${encodeURIComponent(species.join(","))}`;
    }
    return this.get(url, "matrix");
  }

  ig(focal: string, t: number, dur: number): Promise<IGSummary> {
    return this.get(
      `/api/relatedness/ig?focal=${encodeURIComponent(focal)}&t=${t}&dur=${dur}`,
      "ig",
    );
  }

  uncertainty(buckets: number): Promise<UncertaintyRows> {
    return this.get(`/api/uncertainty?buckets=${buckets}`, "uncertainty");
  }

  listViews(): Promise<{ views: Record<string, ViewConfig> }> {
    return this.get("/api/views");
  }

  getView(name: string): Promise<ViewConfig> {
    return this.get(`/api/views/${encodeURIComponent(name)}`);
  }

  async putView(config: ViewConfig): Promise<ViewConfig> {
    const resp = await fetch(
      `${this.baseUrl}/api/views/${encodeURIComponent(config.name)}`,
      {
        method: "PUT",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(config),
      },
    );
    const body = await resp.json();
    if (!resp.ok) {
      throw new ApiError(resp.status, body.code ?? "error", body.message ?? "request failed");
    }
    return body as ViewConfig;
  }
}
