import { classColor, coverageOpacity, featureColor } from "./scales.js";
import type { Store } from "./state.js";
import type { ClusterEntry, ClustersPayload, RulePlot } from "./types.js";

const CELL_H = 14;
const ROW_W = 200;
const COL_BASE_W = 10;
const HEAT_CELL_H = 10;

function renderFeaturePlot(entry: ClusterEntry, nFeatures: number): HTMLElement {
  const div = document.createElement("div");
  div.className = "feature-plot";
  for (const level of entry.feature_plot.levels) {
    const row = document.createElement("div");
    row.className = "fp-level";
    row.style.height = `${CELL_H}px`;
    let x = 0;
    for (const cell of level) {
      const width = cell.proportion * ROW_W;
      const rect = document.createElement("div");
      rect.className = "fp-cell";
      rect.dataset.feature = String(cell.feature);
      rect.dataset.activeFraction = String(cell.active_fraction);
      rect.style.cssText = `left:${x}px;width:${width}px;height:${CELL_H}px;background:${featureColor(cell.feature, nFeatures)}`;
      // white overlay covers the filtered-out fraction, growing from the top
      const overlay = document.createElement("div");
      overlay.className = "fp-overlay";
      overlay.style.cssText = `width:100%;height:${(1 - cell.active_fraction) * 100}%;background:#fff;opacity:0.85`;
      rect.appendChild(overlay);
      row.appendChild(rect);
      x += width;
    }
    div.appendChild(row);
  }
  return div;
}

function renderRuleColumn(
  plot: RulePlot,
  index: number,
  nFeatures: number,
  nClasses: number,
): HTMLElement {
  const col = plot.columns[index];
  const div = document.createElement("div");
  div.className = "rule-column";
  div.dataset.repLeaf = String(col.rep_leaf);
  div.dataset.class = String(col.predicted_class);
  if (!col.visible) div.classList.add("hidden-column");
  div.style.width = `${COL_BASE_W * col.width_scale}px`;

  for (let f = 0; f < nFeatures; f++) {
    const row = document.createElement("div");
    row.className = "heat-row";
    row.dataset.feature = String(f);
    row.style.height = `${HEAT_CELL_H}px`;
    const { breaks, values } = col.coverage[f];
    for (let i = 0; i < values.length; i++) {
      const seg = document.createElement("div");
      seg.className = "heat-seg";
      seg.dataset.value = String(values[i]);
      seg.style.cssText =
        `left:${breaks[i] * 100}%;width:${(breaks[i + 1] - breaks[i]) * 100}%;` +
        `background:${featureColor(f, nFeatures)};opacity:${coverageOpacity(values[i])}`;
      row.appendChild(seg);
    }
    div.appendChild(row);
  }

  // confusion bar: per true class test counts under the column
  const bar = document.createElement("div");
  bar.className = "confusion-bar";
  const total = Object.values(col.confusion).reduce((a, b) => a + b, 0);
  for (const [trueClass, count] of Object.entries(col.confusion)) {
    const seg = document.createElement("div");
    seg.className = "confusion-seg";
    seg.dataset.true = trueClass;
    seg.title = `${count} test samples of class ${trueClass}`;
    seg.style.cssText = `width:${total ? (count / total) * 100 : 0}%;background:${classColor(Number(trueClass), nClasses)}`;
    bar.appendChild(seg);
  }
  div.appendChild(bar);
  return div;
}

function renderRulePlot(plot: RulePlot, nFeatures: number, nClasses: number): HTMLElement {
  const div = document.createElement("div");
  div.className = "rule-plot";
  for (let i = 0; i < plot.columns.length; i++) {
    // black separator between runs of different predicted classes
    if (i > 0 && plot.columns[i].predicted_class !== plot.columns[i - 1].predicted_class) {
      const sep = document.createElement("div");
      sep.className = "class-separator";
      div.appendChild(sep);
    }
    div.appendChild(renderRuleColumn(plot, i, nFeatures, nClasses));
  }
  if (plot.unmapped_count > 0) {
    const badge = document.createElement("span");
    badge.className = "unmapped-badge";
    badge.textContent = `${plot.unmapped_count} unmapped`;
    div.appendChild(badge);
  }
  return div;
}

export function renderClusterGrid(
  container: HTMLElement,
  payload: ClustersPayload,
  nFeatures: number,
  nClasses: number,
  store: Store,
): void {
  container.textContent = "";
  container.classList.add("cluster-grid");
  // payload order is already by descending size
  for (const entry of payload.clusters) {
    const card = document.createElement("div");
    card.className = "cluster-card";
    card.dataset.cluster = String(entry.cluster);
    card.dataset.size = String(entry.size);
    const title = document.createElement("h3");
    title.textContent = `Cluster ${entry.cluster} (${entry.size} trees)`;
    card.appendChild(title);
    card.appendChild(renderFeaturePlot(entry, nFeatures));
    card.appendChild(renderRulePlot(entry.rule_plot, nFeatures, nClasses));
    card.addEventListener("click", () => store.update({ selectedCluster: entry.cluster }));
    container.appendChild(card);
  }
}
