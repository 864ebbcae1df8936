/** Linked highlighting: one hovered feature id drives every view. Elements
 * tag themselves with data-feature; this walks the app root and toggles a
 * single class, so all views stay consistent by construction. */
export function applyFeatureHighlight(root: ParentNode, feature: number | null): void {
  for (const el of root.querySelectorAll<HTMLElement | SVGElement>("[data-feature]")) {
    const mine = Number(el.getAttribute("data-feature"));
    el.classList.toggle("highlighted", feature !== null && mine === feature);
    el.classList.toggle("de-emphasized", feature !== null && mine !== feature);
  }
}
