/**
 * Largest top-k prefix whose server-reported bound satisfies
 * vhat_k <= gamma * k; 0 if none. Pure comparison over server values —
 * no bound is computed here.
 */
export function fdxPrefix(vhat: readonly number[], gamma: number): number {
  if (gamma < 0 || gamma > 1) {
    throw new Error("gamma must be in [0, 1]");
  }
  let best = 0;
  for (let k = 1; k <= vhat.length; k += 1) {
    if (vhat[k - 1]! <= gamma * k) {
      best = k;
    }
  }
  return best;
}
