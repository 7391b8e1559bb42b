import type { EnvelopeResponse } from "./api.js";

export interface Scale {
  (value: number): number;
}

export function linearScale(
  domain: [number, number],
  range: [number, number],
): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 || 1;
  return (value) => r0 + ((value - d0) / span) * (r1 - r0);
}

/**
 * SVG path for a step-after series: horizontal to the next k, then
 * vertical to its value. The bounds are integers per k, so there are no
 * sloped segments — only M/H/V commands.
 */
export function stepPath(
  xs: readonly number[],
  ys: readonly number[],
  sx: Scale,
  sy: Scale,
): string {
  if (xs.length !== ys.length) {
    throw new Error("xs and ys must have equal length");
  }
  if (xs.length === 0) {
    return "";
  }
  const parts = [`M${sx(xs[0]!)} ${sy(ys[0]!)}`];
  for (let i = 1; i < xs.length; i += 1) {
    parts.push(`H${sx(xs[i]!)}`);
    if (ys[i] !== ys[i - 1]) {
      parts.push(`V${sy(ys[i]!)}`);
    }
  }
  return parts.join("");
}

export interface HoverInfo {
  k: number;
  p_k: number;
  vhat: number;
  dhat: number;
}

/** Series point under the cursor: the last k whose x is <= the cursor. */
export function hoverInfo(
  curve: EnvelopeResponse,
  kAtCursor: number,
): HoverInfo | null {
  let best = -1;
  for (let i = 0; i < curve.k.length; i += 1) {
    if (curve.k[i]! <= kAtCursor) {
      best = i;
    }
  }
  if (best < 0) {
    return null;
  }
  return {
    k: curve.k[best]!,
    p_k: curve.p_k[best]!,
    vhat: curve.vhat[best]!,
    dhat: curve.dhat[best]!,
  };
}
