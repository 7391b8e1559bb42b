import { afterEach, beforeEach, expect, test, vi } from "vitest";

import type { BoundResponse, WithRaw } from "../src/api.js";
import type { BoundClient } from "../src/state.js";
import { SelectionStore } from "../src/state.js";

beforeEach(() => {
  vi.useFakeTimers();
});

afterEach(() => {
  vi.useRealTimers();
});

// Deterministic stub: vhat = selection size, so distinct selections give
// distinct (and repeatable) responses.
function stubClient(log: number[][]): BoundClient {
  return {
    async bound(_id, selection) {
      log.push(selection);
      const vhat = selection.length;
      const raw = `{"vhat":${vhat},"dhat":0,"fdp_bound":1.0}`;
      return { raw, data: { vhat, dhat: 0, fdp_bound: 1.0 } };
    },
  };
}

test("a burst of edits inside the debounce window sends one request", async () => {
  const log: number[][] = [];
  const store = new SelectionStore(stubClient(log), "d1", "simes", 0.1);
  store.toggleRow(3);
  vi.advanceTimersByTime(100);
  store.toggleRow(1);
  vi.advanceTimersByTime(100);
  store.toggleRow(2);
  expect(log).toEqual([]);
  await vi.advanceTimersByTimeAsync(150);
  expect(log).toEqual([[1, 2, 3]]);
});

test("gamma changes never trigger a bound query", async () => {
  const log: number[][] = [];
  const store = new SelectionStore(stubClient(log), "d1", "simes", 0.1);
  store.setGamma(0.5);
  await vi.advanceTimersByTimeAsync(1000);
  expect(log).toEqual([]);
  expect(store.state.gamma).toBe(0.5);
});

test("stale responses are discarded, even if they resolve last", async () => {
  const resolvers: Array<(r: WithRaw<BoundResponse>) => void> = [];
  const client: BoundClient = {
    bound: () => new Promise((resolve) => resolvers.push(resolve)),
  };
  const seen: number[] = [];
  const store = new SelectionStore(client, "d1", "simes", 0.1, {
    onBound: (result) => seen.push(result.data.vhat),
  });

  store.setSelection([0]);
  await vi.advanceTimersByTimeAsync(150); // request 1 in flight
  store.setSelection([0, 1]);
  await vi.advanceTimersByTimeAsync(150); // request 2 in flight
  expect(resolvers.length).toBe(2);

  const fresh = { raw: '{"vhat":2,"dhat":0,"fdp_bound":1.0}', data: { vhat: 2, dhat: 0, fdp_bound: 1.0 } };
  const stale = { raw: '{"vhat":1,"dhat":0,"fdp_bound":1.0}', data: { vhat: 1, dhat: 0, fdp_bound: 1.0 } };
  resolvers[1]!(fresh);
  await vi.runAllTimersAsync();
  resolvers[0]!(stale); // the older request lands after the newer one
  await vi.runAllTimersAsync();

  expect(seen).toEqual([2]);
  expect(store.latest).toBe(fresh);
});

test("toggling a row twice restores the previous bound exactly", async () => {
  const log: number[][] = [];
  const store = new SelectionStore(stubClient(log), "d1", "simes", 0.1);
  store.setSelection([0, 4]);
  await vi.advanceTimersByTimeAsync(150);
  const before = store.latest!.raw;

  store.toggleRow(2);
  await vi.advanceTimersByTimeAsync(150);
  expect(store.latest!.raw).not.toBe(before);

  store.toggleRow(2);
  await vi.advanceTimersByTimeAsync(150);
  expect(store.latest!.raw).toBe(before);
  expect(log).toEqual([[0, 4], [0, 2, 4], [0, 4]]);
});

test("method or alpha changes re-query with the same selection", async () => {
  const log: number[][] = [];
  const store = new SelectionStore(stubClient(log), "d1", "simes", 0.1);
  store.setSelection([1, 2]);
  await vi.advanceTimersByTimeAsync(150);
  store.setMethod("dkw");
  await vi.advanceTimersByTimeAsync(150);
  store.setAlpha(0.2);
  await vi.advanceTimersByTimeAsync(150);
  expect(log).toEqual([[1, 2], [1, 2], [1, 2]]);
  expect(store.state.method).toBe("dkw");
  expect(store.state.alpha).toBe(0.2);
});

test("request failures reach onError without clobbering the last good bound", async () => {
  let fail = false;
  const client: BoundClient = {
    async bound(_id, selection) {
      if (fail) throw new Error("boom");
      const vhat = selection.length;
      return { raw: `{"vhat":${vhat}}`, data: { vhat, dhat: 0, fdp_bound: 1.0 } };
    },
  };
  const errors: string[] = [];
  const store = new SelectionStore(client, "d1", "simes", 0.1, {
    onError: (message) => errors.push(message),
  });
  store.setSelection([3]);
  await vi.advanceTimersByTimeAsync(150);
  const good = store.latest;
  fail = true;
  store.toggleRow(5);
  await vi.advanceTimersByTimeAsync(150);
  expect(errors).toEqual(["Error: boom"]);
  expect(store.latest).toBe(good);
});
