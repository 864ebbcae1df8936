import { featureColor, classColor } from "./scales.js";
import type { Store } from "./state.js";
import type { Distribution, OverviewPayload, ProjectionPayload } from "./types.js";

const SVG = "http://www.w3.org/2000/svg";
const WIDGET_W = 180;
const WIDGET_H = 48;

function svgEl<K extends keyof SVGElementTagNameMap>(tag: K): SVGElementTagNameMap[K] {
  return document.createElementNS(SVG, tag);
}

function densityPath(grid: number[], density: number[], xmin: number, xmax: number): string {
  const peak = Math.max(...density, 1e-12);
  const px = (v: number) => ((v - xmin) / (xmax - xmin || 1)) * WIDGET_W;
  const py = (d: number) => WIDGET_H - (d / peak) * (WIDGET_H - 4);
  let d = `M ${px(grid[0])} ${WIDGET_H}`;
  for (let i = 0; i < grid.length; i++) d += ` L ${px(grid[i])} ${py(density[i])}`;
  d += ` L ${px(grid[grid.length - 1])} ${WIDGET_H} Z`;
  return d;
}

function renderWidget(dist: Distribution, nFeatures: number, store: Store): HTMLElement {
  const widget = document.createElement("div");
  widget.className = "feature-widget";
  widget.dataset.feature = String(dist.feature);
  const label = document.createElement("span");
  label.className = "feature-name";
  label.textContent = dist.name;
  widget.appendChild(label);

  const svg = svgEl("svg");
  svg.setAttribute("width", String(WIDGET_W));
  svg.setAttribute("height", String(WIDGET_H));
  const color = featureColor(dist.feature, nFeatures);
  if (dist.kind === "quantitative") {
    const path = svgEl("path");
    path.setAttribute("d", densityPath(dist.grid, dist.density, dist.grid[0], dist.grid[dist.grid.length - 1]));
    path.setAttribute("fill", color);
    path.classList.add("density-area");
    svg.appendChild(path);
  } else {
    const peak = Math.max(...dist.counts, 1);
    const bw = WIDGET_W / dist.counts.length;
    dist.counts.forEach((c, i) => {
      const rect = svgEl("rect");
      rect.setAttribute("x", String(i * bw + 1));
      rect.setAttribute("width", String(bw - 2));
      const h = (c / peak) * (WIDGET_H - 4);
      rect.setAttribute("y", String(WIDGET_H - h));
      rect.setAttribute("height", String(h));
      rect.setAttribute("fill", color);
      rect.classList.add("hist-bar");
      svg.appendChild(rect);
    });
  }
  widget.appendChild(svg);

  const [lo, hi] = dist.range;
  const valueAt = (clientX: number) => {
    const rect = svg.getBoundingClientRect();
    const t = Math.min(1, Math.max(0, (clientX - rect.left) / (rect.width || WIDGET_W)));
    return lo + t * (hi - lo);
  };
  let dragStart: number | null = null;
  svg.addEventListener("pointerdown", (e) => {
    dragStart = valueAt(e.clientX);
  });
  svg.addEventListener("pointermove", (e) => {
    if (dragStart === null) return;
    const v = valueAt(e.clientX);
    store.brushFeature(dist.feature, [Math.min(dragStart, v), Math.max(dragStart, v)]);
  });
  svg.addEventListener("pointerup", () => {
    dragStart = null;
  });
  svg.addEventListener("dblclick", () => store.brushFeature(dist.feature, null));

  widget.addEventListener("mouseenter", () => store.setHoveredFeature(dist.feature));
  widget.addEventListener("mouseleave", () => store.setHoveredFeature(null));
  return widget;
}

function renderConfusion(overview: OverviewPayload, store: Store): HTMLElement {
  const classes = overview.dataset.classes;
  const table = document.createElement("table");
  table.className = "confusion-matrix";
  const head = table.insertRow();
  head.insertCell();
  for (const name of classes) {
    const th = document.createElement("th");
    th.textContent = name;
    head.appendChild(th);
  }
  overview.confusion.counts.forEach((row, t) => {
    const tr = table.insertRow();
    const label = document.createElement("th");
    label.className = "row-label";
    label.textContent = classes[t];
    label.addEventListener("click", () => store.selectClassRow(t, classes.length));
    tr.appendChild(label);
    row.forEach((count, p) => {
      const td = tr.insertCell();
      td.className = "confusion-cell";
      td.dataset.true = String(t);
      td.dataset.pred = String(p);
      td.textContent = String(count);
      td.title = `${classes[t]} predicted as ${classes[p]}: ${count}`;
      td.style.background = classColor(p, classes.length);
      td.style.opacity = String(count === 0 ? 0.12 : 0.3 + 0.7 * Math.min(1, count / 25));
      td.addEventListener("click", () => store.toggleCell(t, p));
    });
  });
  return table;
}

function renderSlider(overview: OverviewPayload, store: Store): HTMLElement {
  const wrap = document.createElement("div");
  wrap.className = "cluster-slider";
  const samples = overview.cluster_curve.samples;
  const ms = samples.map(([m]) => m);
  const slider = document.createElement("input");
  slider.type = "range";
  slider.min = String(Math.min(...ms));
  slider.max = String(Math.max(...ms));
  slider.value = String(overview.cluster_curve.default_m);
  slider.addEventListener("input", () => {
    // snap to the sampled m values only
    const raw = Number(slider.value);
    const snapped = ms.reduce((best, m) => (Math.abs(m - raw) < Math.abs(best - raw) ? m : best), ms[0]);
    slider.value = String(snapped);
    store.update({ m: snapped });
  });
  wrap.appendChild(slider);

  // scented curve behind the slider: cluster count per m
  const svg = svgEl("svg");
  svg.setAttribute("width", "180");
  svg.setAttribute("height", "32");
  svg.classList.add("scent-curve");
  const peak = Math.max(...samples.map(([, c]) => c), 1);
  samples.forEach(([m, c], i) => {
    const rect = svgEl("rect");
    rect.dataset.m = String(m);
    rect.setAttribute("x", String((i / samples.length) * 180));
    rect.setAttribute("width", String(180 / samples.length - 1));
    const h = (c / peak) * 30;
    rect.setAttribute("y", String(32 - h));
    rect.setAttribute("height", String(h));
    rect.setAttribute("fill", "#9aa7b5");
    svg.appendChild(rect);
  });
  wrap.appendChild(svg);
  return wrap;
}

export function renderProjection(projection: ProjectionPayload, nClasses: number): SVGSVGElement {
  const size = 220;
  const svg = svgEl("svg");
  svg.classList.add("mds-scatter");
  svg.setAttribute("width", String(size));
  svg.setAttribute("height", String(size));
  const xs = projection.points.map((p) => p.x);
  const ys = projection.points.map((p) => p.y);
  const xmin = Math.min(...xs), xmax = Math.max(...xs);
  const ymin = Math.min(...ys), ymax = Math.max(...ys);
  const px = (x: number) => 10 + ((x - xmin) / (xmax - xmin || 1)) * (size - 20);
  const py = (y: number) => 10 + ((y - ymin) / (ymax - ymin || 1)) * (size - 20);
  const pos = new Map(projection.points.map((p) => [p.tree, [px(p.x), py(p.y)] as const]));

  for (const hull of projection.hulls) {
    const poly = svgEl("polygon");
    poly.classList.add("cluster-hull");
    poly.dataset.cluster = String(hull.cluster);
    poly.setAttribute(
      "points",
      hull.vertices.map((t) => pos.get(t)!.join(",")).join(" "),
    );
    poly.setAttribute("fill", "none");
    poly.setAttribute("stroke", "#667");
    svg.appendChild(poly);
  }
  const medoids = new Set(projection.medoids);
  for (const p of projection.points) {
    const circle = svgEl("circle");
    circle.classList.add("tree-point");
    if (medoids.has(p.tree)) circle.classList.add("medoid");
    circle.dataset.tree = String(p.tree);
    circle.dataset.cluster = String(projection.labels[p.tree]);
    const [cx, cy] = pos.get(p.tree)!;
    circle.setAttribute("cx", String(cx));
    circle.setAttribute("cy", String(cy));
    circle.setAttribute("r", medoids.has(p.tree) ? "5" : "3");
    circle.setAttribute("fill", classColor(projection.labels[p.tree], nClasses));
    svg.appendChild(circle);
  }
  return svg;
}

export function renderSidebar(
  container: HTMLElement,
  overview: OverviewPayload,
  projection: ProjectionPayload | null,
  store: Store,
): void {
  container.textContent = "";
  container.classList.add("sidebar");

  const widgets = document.createElement("div");
  widgets.className = "feature-widgets";
  const n = overview.distributions.length;
  for (const dist of overview.distributions) widgets.appendChild(renderWidget(dist, n, store));
  container.appendChild(widgets);

  container.appendChild(renderConfusion(overview, store));
  container.appendChild(renderSlider(overview, store));
  if (projection) {
    container.appendChild(renderProjection(projection, Math.max(...projection.labels) + 1));
  }
}
