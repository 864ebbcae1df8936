import { beforeAll, describe, expect, inject, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { renderClusterGrid } from "../src/clusterGrid.js";
import { Store } from "../src/state.js";
import type { ClustersPayload, OverviewPayload } from "../src/types.js";

const base = inject("base");
const sid = inject("sid");

let overview: OverviewPayload;
let clusters: ClustersPayload;

beforeAll(async () => {
  const api = new ApiClient(base);
  overview = await api.overview(sid);
  clusters = await api.clusters(sid, overview.cluster_curve.default_m, null);
});

function render(payload: ClustersPayload): { root: HTMLElement; store: Store } {
  const root = document.createElement("div");
  const store = new Store();
  renderClusterGrid(root, payload, overview.distributions.length, overview.dataset.classes.length, store);
  return { root, store };
}

describe("cluster grid", () => {
  it("lays cards out in payload order (descending size)", () => {
    const { root } = render(clusters);
    const sizes = [...root.querySelectorAll<HTMLElement>(".cluster-card")].map((c) =>
      Number(c.dataset.size),
    );
    expect(sizes).toEqual(clusters.clusters.map((c) => c.size));
    for (let i = 1; i < sizes.length; i++) expect(sizes[i]).toBeLessThanOrEqual(sizes[i - 1]);
    expect(sizes.length).toBeGreaterThan(0);
  });

  it("feature plot overlays cover exactly the inactive fraction", () => {
    const { root } = render(clusters);
    const cells = root.querySelectorAll<HTMLElement>(".fp-cell");
    expect(cells.length).toBeGreaterThan(0);
    for (const cell of cells) {
      const frac = Number(cell.dataset.activeFraction);
      const overlay = cell.querySelector<HTMLElement>(".fp-overlay")!;
      expect(overlay.style.height).toBe(`${(1 - frac) * 100}%`);
    }
  });

  it("heat rows reproduce each column's coverage segments", () => {
    const { root } = render(clusters);
    const entry = clusters.clusters[0];
    const card = root.querySelector<HTMLElement>(`[data-cluster="${entry.cluster}"]`)!;
    const columns = card.querySelectorAll<HTMLElement>(".rule-column");
    expect(columns).toHaveLength(entry.rule_plot.columns.length);
    entry.rule_plot.columns.forEach((col, i) => {
      const rows = columns[i].querySelectorAll<HTMLElement>(".heat-row");
      expect(rows).toHaveLength(overview.distributions.length);
      rows.forEach((row, f) => {
        const segs = [...row.querySelectorAll<HTMLElement>(".heat-seg")];
        expect(segs.map((s) => Number(s.dataset.value))).toEqual(col.coverage[f].values);
      });
    });
  });

  it("column visibility from a filtered payload maps to the hidden-column class", async () => {
    const api = new ApiClient(base);
    const [fmin, fmax] = overview.distributions[0].range;
    const filtered = await api.clusters(sid, overview.cluster_curve.default_m, {
      ranges: [[0, fmin, fmin + 0.25 * (fmax - fmin)]],
      cells: [],
    });
    const { root } = render(filtered);
    let hiddenSeen = 0;
    for (const entry of filtered.clusters) {
      const card = root.querySelector<HTMLElement>(`[data-cluster="${entry.cluster}"]`)!;
      const columns = card.querySelectorAll<HTMLElement>(".rule-column");
      entry.rule_plot.columns.forEach((col, i) => {
        expect(columns[i].classList.contains("hidden-column")).toBe(!col.visible);
        if (!col.visible) hiddenSeen++;
      });
    }
    expect(hiddenSeen).toBeGreaterThan(0);
  });

  it("draws one separator per change of predicted class", () => {
    const { root } = render(clusters);
    for (const entry of clusters.clusters) {
      const preds = entry.rule_plot.columns.map((c) => c.predicted_class);
      const changes = preds.filter((p, i) => i > 0 && p !== preds[i - 1]).length;
      const card = root.querySelector<HTMLElement>(`[data-cluster="${entry.cluster}"]`)!;
      expect(card.querySelectorAll(".class-separator")).toHaveLength(changes);
    }
  });

  it("clicking a card selects that cluster", () => {
    const { root, store } = render(clusters);
    const last = clusters.clusters[clusters.clusters.length - 1];
    root.querySelector<HTMLElement>(`[data-cluster="${last.cluster}"]`)!.click();
    expect(store.get().selectedCluster).toBe(last.cluster);
  });
});
