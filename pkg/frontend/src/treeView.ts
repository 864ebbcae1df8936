import { classColor, featureColor } from "./scales.js";
import type { TreeLayoutPayload } from "./types.js";

const SVG = "http://www.w3.org/2000/svg";
const MAX_EDGE_PX = 12;

function svgEl<K extends keyof SVGElementTagNameMap>(tag: K): SVGElementTagNameMap[K] {
  return document.createElementNS(SVG, tag);
}

/** Node ids to fade out: everything with no visible leaf beneath it. Paths to
 * visible leaves stay fully drawn, so a filtered leaf dims exactly its own
 * branch. Derived purely from payload structure plus the service's
 * visibility flags. */
export function computeDimmed(
  layout: TreeLayoutPayload,
  visibleLeaves: Set<number> | null,
): Set<number> {
  if (visibleLeaves === null) return new Set();
  const children = new Map<number, number[]>();
  for (const e of layout.edges) {
    const kids = children.get(e.parent) ?? [];
    kids.push(e.child);
    children.set(e.parent, kids);
  }
  const dimmed = new Set<number>();
  const hasVisible = (id: number): boolean => {
    const kids = children.get(id);
    let visible: boolean;
    if (!kids || kids.length === 0) {
      visible = visibleLeaves.has(id);
    } else {
      visible = false;
      for (const k of kids) if (hasVisible(k)) visible = true;
    }
    if (!visible) dimmed.add(id);
    return visible;
  };
  const roots = layout.nodes.filter((n) => !layout.edges.some((e) => e.child === n.id));
  for (const r of roots) hasVisible(r.id);
  return dimmed;
}

export function renderTree(
  layout: TreeLayoutPayload,
  nFeatures: number,
  nClasses: number,
  classNames: string[],
  visibleLeaves: Set<number> | null = null,
): SVGSVGElement {
  const dimmed = computeDimmed(layout, visibleLeaves);
  const width = Math.max(...layout.nodes.map((n) => n.x + n.width / 2)) + 10;
  const height = Math.max(...layout.nodes.map((n) => n.y + n.height)) + 10;
  const svg = svgEl("svg");
  svg.classList.add("tree-view");
  svg.dataset.tree = String(layout.tree);
  svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
  svg.setAttribute("width", String(Math.min(width, 900)));

  const nodesById = new Map(layout.nodes.map((n) => [n.id, n]));
  for (const e of layout.edges) {
    const [p0, p1, p2, p3] = e.bezier;
    const path = svgEl("path");
    path.classList.add("tree-edge");
    if (dimmed.has(e.child)) path.classList.add("dimmed");
    path.dataset.parent = String(e.parent);
    path.dataset.child = String(e.child);
    path.setAttribute(
      "d",
      `M ${p0[0]} ${p0[1]} C ${p1[0]} ${p1[1]}, ${p2[0]} ${p2[1]}, ${p3[0]} ${p3[1]}`,
    );
    path.setAttribute("fill", "none");
    path.setAttribute("stroke", classColor(e.dominant_class, nClasses));
    path.setAttribute("stroke-width", String(Math.max(1, e.thickness * MAX_EDGE_PX)));
    const child = nodesById.get(e.child)!;
    const routed = child.train_count + child.test_count;
    const tip = svgEl("title");
    tip.textContent = `${routed} samples`;
    path.appendChild(tip);
    svg.appendChild(path);
  }

  for (const node of layout.nodes) {
    const g = svgEl("g");
    g.classList.add("tree-node", node.kind === "leaf" ? "leaf-node" : "split-node");
    if (dimmed.has(node.id)) g.classList.add("dimmed");
    g.dataset.node = String(node.id);
    const rect = svgEl("rect");
    rect.setAttribute("x", String(node.x - node.width / 2));
    rect.setAttribute("y", String(node.y));
    rect.setAttribute("width", String(node.width));
    rect.setAttribute("height", String(node.height));
    rect.setAttribute("rx", "3");
    if (node.kind === "leaf") {
      rect.setAttribute("fill", classColor(node.predicted_class!, nClasses));
      const text = svgEl("text");
      text.textContent = classNames[node.predicted_class!] ?? String(node.predicted_class);
      text.setAttribute("x", String(node.x));
      text.setAttribute("y", String(node.y + node.height / 2));
      text.setAttribute("text-anchor", "middle");
      g.appendChild(rect);
      g.appendChild(text);
    } else {
      g.dataset.feature = String(node.feature);
      rect.setAttribute("fill", "#fff");
      rect.setAttribute("stroke", featureColor(node.feature!, nFeatures));
      g.appendChild(rect);
      // gray out the parts of the split feature's range cut off by ancestors
      const boxLeft = node.x - node.width / 2;
      const grays = node.gray_intervals ?? [];
      const [alo, ahi] = node.active_interval!;
      const flo = Math.min(alo, ...grays.map(([lo]) => lo));
      const fhi = Math.max(ahi, ...grays.map(([, hi]) => hi));
      const toX = (u: number) => boxLeft + ((u - flo) / (fhi - flo || 1)) * node.width;
      for (const [lo, hi] of grays) {
        const gray = svgEl("rect");
        gray.classList.add("gray-zone");
        gray.dataset.lo = String(lo);
        gray.dataset.hi = String(hi);
        gray.setAttribute("y", String(node.y));
        gray.setAttribute("height", String(node.height));
        gray.setAttribute("x", String(toX(lo)));
        gray.setAttribute("width", String(toX(hi) - toX(lo)));
        gray.setAttribute("fill", "#ccc");
        gray.setAttribute("opacity", "0.35");
        g.appendChild(gray);
      }
      // split anchor line at the threshold position
      const anchor = svgEl("line");
      anchor.classList.add("split-anchor");
      anchor.setAttribute("x1", String(node.anchor_x));
      anchor.setAttribute("x2", String(node.anchor_x));
      anchor.setAttribute("y1", String(node.y));
      anchor.setAttribute("y2", String(node.y + node.height));
      anchor.setAttribute("stroke", "#222");
      const tip = svgEl("title");
      tip.textContent = `split at ${node.threshold}`;
      anchor.appendChild(tip);
      g.appendChild(anchor);
    }
    svg.appendChild(g);
  }
  return svg;
}

export function renderTreeList(
  container: HTMLElement,
  layouts: TreeLayoutPayload[],
  representative: number,
  nFeatures: number,
  nClasses: number,
  classNames: string[],
  visibleLeavesForRep: Set<number> | null = null,
): void {
  container.textContent = "";
  container.classList.add("tree-list");
  for (const layout of layouts) {
    const wrap = document.createElement("div");
    wrap.className = "tree-wrap";
    if (layout.tree === representative) wrap.classList.add("representative");
    const caption = document.createElement("div");
    caption.className = "tree-caption";
    caption.textContent =
      `Tree ${layout.tree}` +
      (layout.tree === representative ? " (representative)" : "") +
      ` — test accuracy ${(layout.test_accuracy * 100).toFixed(1)}%`;
    wrap.appendChild(caption);
    const leaves = layout.tree === representative ? visibleLeavesForRep : null;
    wrap.appendChild(renderTree(layout, nFeatures, nClasses, classNames, leaves));
    container.appendChild(wrap);
  }
}
