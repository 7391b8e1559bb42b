import type { BoundResponse } from "./api.js";

// This module must not do arithmetic on bound values: everything shown is
// either a verbatim server value or a byte slice of the server response.

/**
 * Exact bytes of a top-level scalar value in a JSON object body.
 *
 * Only valid for flat number/null fields (which is all the bound endpoint
 * returns); throws if the key is missing.
 */
export function fieldText(raw: string, key: string): string {
  const marker = `"${key}":`;
  const at = raw.indexOf(marker);
  if (at < 0) {
    throw new Error(`field ${key} not in response`);
  }
  let start = at + marker.length;
  while (raw[start] === " ") start += 1;
  let end = start;
  while (end < raw.length && raw[end] !== "," && raw[end] !== "}") end += 1;
  return raw.slice(start, end).trim();
}

export interface PanelView {
  vhat: string;
  dhat: string;
  fdp_bound: string;
  m0_hat: string | null;
}

/** Latest bound shown to the analyst, kept as raw server bytes. */
export class BoundPanel {
  private raw: string | null = null;
  private parsed: BoundResponse | null = null;
  private m0Raw: string | null = null;
  error: string | null = null;

  update(raw: string, parsed: BoundResponse): void {
    this.raw = raw;
    this.parsed = parsed;
    this.error = null;
  }

  updateM0(raw: string): void {
    this.m0Raw = raw;
  }

  fail(message: string): void {
    this.error = message;
  }

  get current(): BoundResponse | null {
    return this.parsed;
  }

  view(): PanelView | null {
    if (this.raw === null) {
      return null;
    }
    return {
      vhat: fieldText(this.raw, "vhat"),
      dhat: fieldText(this.raw, "dhat"),
      fdp_bound: fieldText(this.raw, "fdp_bound"),
      m0_hat: this.m0Raw === null ? null : fieldText(this.m0Raw, "m0_hat"),
    };
  }
}
