export interface Row {
  index: number;
  p: number;
  label?: string;
}

export type SortKey = "p" | "label" | "index";

/** Stable sort on a copy; ties keep the incoming order. */
export function sortRows(
  rows: readonly Row[],
  key: SortKey,
  ascending = true,
): Row[] {
  const out = [...rows];
  const sign = ascending ? 1 : -1;
  out.sort((a, b) => {
    const va = key === "label" ? (a.label ?? "") : a[key];
    const vb = key === "label" ? (b.label ?? "") : b[key];
    if (va < vb) return -sign;
    if (va > vb) return sign;
    return 0;
  });
  return out;
}

/** Threshold brush: indices with p_i <= t. */
export function thresholdSelect(rows: readonly Row[], t: number): number[] {
  return rows.filter((row) => row.p <= t).map((row) => row.index);
}
