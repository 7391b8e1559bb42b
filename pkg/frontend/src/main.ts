import { Client } from "./api.js";
import type { EnvelopeResponse } from "./api.js";
import { hoverInfo, linearScale, stepPath } from "./chart.js";
import { fdxPrefix } from "./fdx.js";
import { BoundPanel } from "./panel.js";
import { SelectionStore } from "./state.js";
import { sortRows, thresholdSelect } from "./table.js";
import type { Row, SortKey } from "./table.js";

const WIDTH = 640;
const HEIGHT = 320;
const PAD = 36;

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  parent: Element,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (text !== undefined) node.textContent = text;
  parent.appendChild(node);
  return node;
}

function renderPanel(root: HTMLElement, panel: BoundPanel): void {
  root.textContent = "";
  if (panel.error !== null) {
    el("p", root, panel.error).className = "error";
    return;
  }
  const view = panel.view();
  if (view === null) {
    el("p", root, "no selection yet");
    return;
  }
  el("div", root, `false discoveries ≤ ${view.vhat}`);
  el("div", root, `true discoveries ≥ ${view.dhat}`);
  el("div", root, `FDP ≤ ${view.fdp_bound}`);
  if (view.m0_hat !== null && view.m0_hat !== "null") {
    el("div", root, `estimated nulls: ${view.m0_hat}`);
  }
}

function renderChart(
  svg: SVGSVGElement,
  tooltip: HTMLElement,
  curve: EnvelopeResponse,
  highlightK: number,
): void {
  svg.textContent = "";
  const m = curve.k.length;
  const vmax = Math.max(1, ...curve.vhat);
  const sx = linearScale([1, m], [PAD, WIDTH - PAD]);
  const sy = linearScale([0, vmax], [HEIGHT - PAD, PAD]);
  const path = document.createElementNS("http://www.w3.org/2000/svg", "path");
  path.setAttribute("d", stepPath(curve.k, curve.vhat, sx, sy));
  path.setAttribute("fill", "none");
  path.setAttribute("stroke", "steelblue");
  svg.appendChild(path);
  if (highlightK > 0) {
    const rect = document.createElementNS(
      "http://www.w3.org/2000/svg",
      "rect",
    );
    rect.setAttribute("x", String(PAD));
    rect.setAttribute("y", String(PAD));
    rect.setAttribute("width", String(sx(highlightK) - PAD));
    rect.setAttribute("height", String(HEIGHT - 2 * PAD));
    rect.setAttribute("fill", "gold");
    rect.setAttribute("opacity", "0.2");
    svg.appendChild(rect);
  }
  svg.onmousemove = (event) => {
    const box = svg.getBoundingClientRect();
    const kAt = 1 + ((event.clientX - box.left - PAD) / (WIDTH - 2 * PAD)) * (m - 1);
    const info = hoverInfo(curve, kAt);
    tooltip.textContent = info
      ? `k=${info.k} p=${info.p_k} vhat=${info.vhat} dhat=${info.dhat}`
      : "";
  };
}

async function boot(): Promise<void> {
  const root = document.getElementById("app");
  if (root === null) return;
  const client = new Client(
    (document.body.dataset["apiBase"] ?? "").replace(/\/$/, ""),
  );

  const controls = el("div", root);
  const input = el("textarea", controls);
  input.value = '{"pvalues": [0.001, 0.02, 0.04, 0.3, 0.8]}';
  const methodSel = el("select", controls);
  for (const info of await client.listMethods()) {
    el("option", methodSel, info.name);
  }
  const alphaInput = el("input", controls);
  alphaInput.value = "0.1";
  const gammaInput = el("input", controls);
  gammaInput.type = "range";
  gammaInput.min = "0";
  gammaInput.max = "1";
  gammaInput.step = "0.01";
  const loadBtn = el("button", controls, "load dataset");

  const tableDiv = el("div", root);
  const panelDiv = el("div", root);
  const svg = document.createElementNS("http://www.w3.org/2000/svg", "svg");
  svg.setAttribute("width", String(WIDTH));
  svg.setAttribute("height", String(HEIGHT));
  root.appendChild(svg);
  const tooltip = el("div", root);

  const panel = new BoundPanel();
  let store: SelectionStore | null = null;
  let rows: Row[] = [];
  let curve: EnvelopeResponse | null = null;
  let sortKey: SortKey = "index";
  let sortAsc = true;

  const refreshChart = () => {
    if (curve !== null && store !== null) {
      renderChart(
        svg,
        tooltip,
        curve,
        fdxPrefix(curve.vhat, store.state.gamma),
      );
    }
  };

  const refreshCurve = async () => {
    if (store === null) return;
    try {
      const env = await client.envelope(
        store.state.datasetId,
        store.state.method,
        store.state.alpha,
      );
      curve = env.data;
      const m0 = await client.m0(
        store.state.datasetId,
        store.state.method,
        store.state.alpha,
      );
      panel.updateM0(m0.raw);
    } catch (err) {
      panel.fail(String(err));
    }
    refreshChart();
    renderPanel(panelDiv, panel);
  };

  const refreshTable = () => {
    if (store === null) return;
    tableDiv.textContent = "";
    const table = el("table", tableDiv);
    const head = el("tr", el("thead", table));
    for (const key of ["index", "p", "label"] as SortKey[]) {
      const th = el("th", head, key);
      th.onclick = () => {
        sortAsc = key === sortKey ? !sortAsc : true;
        sortKey = key;
        refreshTable();
      };
    }
    const body = el("tbody", table);
    for (const row of sortRows(rows, sortKey, sortAsc)) {
      const tr = el("tr", body);
      tr.className = store.state.selection.has(row.index) ? "selected" : "";
      el("td", tr, String(row.index));
      el("td", tr, String(row.p));
      el("td", tr, row.label ?? "");
      tr.onclick = () => {
        store?.toggleRow(row.index);
        refreshTable();
      };
      const brush = el("td", tr, "≤");
      brush.onclick = (event) => {
        event.stopPropagation();
        store?.setSelection(thresholdSelect(rows, row.p));
        refreshTable();
      };
    }
  };

  loadBtn.onclick = async () => {
    try {
      const payload: unknown = JSON.parse(input.value);
      const uploaded = await client.uploadDataset(payload);
      const pvalues = (payload as { pvalues?: number[] }).pvalues ?? [];
      rows = pvalues.map((p, index) => ({ index, p }));
      store = new SelectionStore(
        client,
        uploaded.data.id,
        methodSel.value,
        Number(alphaInput.value),
        {
          onBound: (result) => {
            panel.update(result.raw, result.data);
            renderPanel(panelDiv, panel);
          },
          onError: (message) => {
            panel.fail(message);
            renderPanel(panelDiv, panel);
          },
        },
      );
      refreshTable();
      await refreshCurve();
    } catch (err) {
      panel.fail(String(err));
      renderPanel(panelDiv, panel);
    }
  };
  methodSel.onchange = () => {
    store?.setMethod(methodSel.value);
    void refreshCurve();
  };
  alphaInput.onchange = () => {
    store?.setAlpha(Number(alphaInput.value));
    void refreshCurve();
  };
  gammaInput.oninput = () => {
    store?.setGamma(Number(gammaInput.value));
    refreshChart();
  };
}

if (typeof document !== "undefined") {
  void boot();
}
