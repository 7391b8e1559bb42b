import { afterEach, expect, test, vi } from "vitest";

import { ApiError, Client } from "../src/api.js";

afterEach(() => {
  vi.unstubAllGlobals();
});

function jsonResponse(body: string, status = 200): Response {
  return new Response(body, {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

test("bound posts the selection and keeps the raw bytes", async () => {
  const raw = '{"vhat":2,"dhat":1,"fdp_bound":0.6666666666666666}';
  const fetchMock = vi.fn(async () => jsonResponse(raw));
  vi.stubGlobal("fetch", fetchMock);

  const client = new Client("http://api");
  const result = await client.bound("abc", [0, 2, 1], "simes", 0.1);

  expect(result.raw).toBe(raw);
  expect(result.data).toEqual({ vhat: 2, dhat: 1, fdp_bound: 0.6666666666666666 });
  const [url, init] = fetchMock.mock.calls[0] as unknown as [string, RequestInit];
  expect(url).toBe("http://api/datasets/abc/bound");
  expect(JSON.parse(init.body as string)).toEqual({
    selection: [0, 2, 1],
    method: "simes",
    alpha: 0.1,
  });
});

test("envelope query string carries method and alpha", async () => {
  const raw =
    '{"method":"dkw","alpha":0.2,"k":[1],"p_k":[0.5],"vhat":[1],"dhat":[0]}';
  const fetchMock = vi.fn(async () => jsonResponse(raw));
  vi.stubGlobal("fetch", fetchMock);

  const client = new Client();
  const result = await client.envelope("d1", "dkw", 0.2);
  expect(fetchMock.mock.calls[0]?.[0]).toBe(
    "/datasets/d1/envelope?method=dkw&alpha=0.2",
  );
  expect(result.data.vhat).toEqual([1]);
  expect(result.data.m0_hat).toBeUndefined();
});

test("error detail is surfaced with status and field", async () => {
  vi.stubGlobal(
    "fetch",
    vi.fn(async () =>
      jsonResponse(
        '{"detail":{"message":"unknown method \'bogus\'","field":"method"}}',
        422,
      ),
    ),
  );
  const client = new Client();
  const err = await client
    .bound("d1", [], "bogus", 0.1)
    .then(() => null)
    .catch((e: unknown) => e);
  expect(err).toBeInstanceOf(ApiError);
  expect((err as ApiError).status).toBe(422);
  expect((err as ApiError).field).toBe("method");
  expect((err as ApiError).message).toContain("bogus");
});

test("schema mismatch rejects instead of passing junk through", async () => {
  vi.stubGlobal(
    "fetch",
    vi.fn(async () => jsonResponse('{"vhat":"two","dhat":1,"fdp_bound":0.5}')),
  );
  const client = new Client();
  await expect(client.bound("d1", [0], "simes", 0.1)).rejects.toThrow();
});
