import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { afterEach, expect, test, vi } from "vitest";

import { Client } from "../src/api.js";
import { stepPath } from "../src/chart.js";
import { fdxPrefix } from "../src/fdx.js";
import { BoundPanel, fieldText } from "../src/panel.js";
import { SelectionStore } from "../src/state.js";

// Responses recorded verbatim from the Python service (exact bytes);
// regenerate with tests/fixtures/generate.py.
interface Fixture {
  dataset: { pvalues: number[] };
  upload_raw: string;
  envelope_raw: string;
  m0_raw: string;
  bounds: Array<{
    selection: number[];
    method: string;
    alpha: number;
    raw: string;
  }>;
  fdx: Array<{ gamma: number; k: number }>;
}

const here = dirname(fileURLToPath(import.meta.url));
const fixture: Fixture = JSON.parse(
  readFileSync(join(here, "fixtures", "passthrough.json"), "utf8"),
);

afterEach(() => {
  vi.unstubAllGlobals();
});

function serveFixture(): void {
  vi.stubGlobal(
    "fetch",
    vi.fn(async (url: string, init?: RequestInit) => {
      if (url.endsWith("/bound")) {
        const body = JSON.parse(init!.body as string) as {
          selection: number[];
          method: string;
          alpha: number;
        };
        const rec = fixture.bounds.find(
          (r) =>
            r.method === body.method &&
            r.alpha === body.alpha &&
            JSON.stringify(r.selection) === JSON.stringify(body.selection),
        );
        if (rec === undefined) {
          throw new Error(`unscripted request ${init!.body as string}`);
        }
        return new Response(rec.raw, { status: 200 });
      }
      if (url.includes("/envelope")) {
        return new Response(fixture.envelope_raw, { status: 200 });
      }
      if (url.includes("/m0")) {
        return new Response(fixture.m0_raw, { status: 200 });
      }
      throw new Error(`unexpected url ${url}`);
    }),
  );
}

test("20 scripted selections: panel bytes equal the API response bytes", async () => {
  serveFixture();
  const client = new Client();
  const panel = new BoundPanel();
  expect(fixture.bounds.length).toBe(20);

  for (const rec of fixture.bounds) {
    const store = new SelectionStore(client, "ds", rec.method, rec.alpha, {
      onBound: (result) => panel.update(result.raw, result.data),
    });
    store.setSelection(rec.selection);
    await store.flush();

    const view = panel.view()!;
    // reassembling the panel fields must reproduce the response verbatim
    expect(
      `{"vhat":${view.vhat},"dhat":${view.dhat},"fdp_bound":${view.fdp_bound}}`,
    ).toBe(rec.raw);
    expect(panel.current).toEqual(JSON.parse(rec.raw));
  }
});

test("fdx highlight equals the server-side selection rule", async () => {
  serveFixture();
  const client = new Client();
  const envelope = await client.envelope("ds", "simes-adaptive", 0.1);
  expect(envelope.raw).toBe(fixture.envelope_raw);
  for (const { gamma, k } of fixture.fdx) {
    expect(fdxPrefix(envelope.data.vhat, gamma)).toBe(k);
  }
});

test("envelope renders as a step series, never interpolated", async () => {
  serveFixture();
  const client = new Client();
  const { data } = await client.envelope("ds", "simes-adaptive", 0.1);
  const d = stepPath(data.k, data.vhat, (x) => x, (y) => y);
  expect(d.startsWith("M")).toBe(true);
  expect(d).not.toMatch(/[LCQSTA]/); // H/V steps only
  // one horizontal move per k after the first
  expect((d.match(/H/g) ?? []).length).toBe(data.k.length - 1);
  // dhat is the server's k - vhat, displayed as-is
  data.dhat.forEach((dh, i) => expect(dh).toBe(data.k[i]! - data.vhat[i]!));
});

test("m0 panel field shows the server value bytes", () => {
  const panel = new BoundPanel();
  panel.update('{"vhat":0,"dhat":0,"fdp_bound":0.0}', {
    vhat: 0,
    dhat: 0,
    fdp_bound: 0.0,
  });
  panel.updateM0(fixture.m0_raw);
  expect(panel.view()!.m0_hat).toBe(fieldText(fixture.m0_raw, "m0_hat"));
  expect(fieldText(fixture.m0_raw, "m0_hat")).toMatch(/^\d+$|^null$/);
});

test("fieldText slices exact value bytes from flat JSON", () => {
  const raw = '{"vhat":3,"dhat":2,"fdp_bound":0.6000000000000001}';
  expect(fieldText(raw, "vhat")).toBe("3");
  expect(fieldText(raw, "fdp_bound")).toBe("0.6000000000000001");
  expect(() => fieldText(raw, "missing")).toThrow();
});
