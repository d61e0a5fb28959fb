import { afterEach, describe, expect, it, vi } from "vitest";

import { ApiClient } from "../src/api.js";

function captureFetch(body: unknown = {}) {
  const urls: string[] = [];
  vi.stubGlobal("fetch", async (url: string | URL, init?: RequestInit) => {
    urls.push(String(url));
    void init;
    return new Response(JSON.stringify(body), { status: 200 });
  });
  return urls;
}

afterEach(() => vi.unstubAllGlobals());

describe("api client", () => {
  it("builds the documented query strings", async () => {
    const urls = captureFetch();
    const api = new ApiClient("http://s");
    await api.snapshot(120, 12);
    await api.trace("lion-1", 120, 24, "bundle", 0.5);
    await api.pairSeries("lion-1", "lion-2", 0, 359);
    await api.matrix(100, 120, ["lion", "zebra"]);
    await api.ig("lion-1", 120, 12);
    await api.uncertainty(240);
    expect(urls).toEqual([
      "http://s/api/snapshot?t=120&dur=12",
      "http://s/api/trace?animal=lion-1&t=120&dur=24&mode=bundle&alpha=0.5",
      "http://s/api/relatedness/pair?i=lion-1&j=lion-2&from=0&to=359",
      "http://s/api/relatedness/matrix?from=100&to=120&species=lion%2Czebra",
      "http://s/api/relatedness/ig?focal=lion-1&t=120&dur=12",
      "http://s/api/uncertainty?buckets=240",
    ]);
  });

  it("aborts the in-flight request when a channel is superseded", async () => {
    const seen: (AbortSignal | undefined)[] = [];
    vi.stubGlobal("fetch", (url: string | URL, init?: RequestInit) => {
      void url;
      seen.push(init?.signal ?? undefined);
      return new Promise<Response>((resolve) => {
        setTimeout(() => resolve(new Response("{}", { status: 200 })), 5);
      });
    });
    const api = new ApiClient("http://s");
    const first = api.snapshot(1, 1);
    const second = api.snapshot(2, 1);
    await Promise.allSettled([first, second]);
    expect(seen).toHaveLength(2);
    expect(seen[0]!.aborted).toBe(true);
    expect(seen[1]!.aborted).toBe(false);
  });

  it("raises ApiError with the service's code on 4xx", async () => {
    vi.stubGlobal("fetch", async () =>
      new Response(JSON.stringify({ code: "self_pair", message: "i and j must differ" }),
        { status: 400 }));
    const api = new ApiClient("http://s");
    await expect(api.pairSeries("a", "a", 0, 1)).rejects.toMatchObject({
      status: 400,
      code: "self_pair",
    });
  });
});
