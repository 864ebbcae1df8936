/** Sequential multi-hue scales built client-side from counts alone. Features
 * and classes use different hue ramps so the two encodings never collide. */

function hsl(h: number, s: number, l: number): string {
  return `hsl(${Math.round(h)}, ${Math.round(s)}%, ${Math.round(l)}%)`;
}

/** Teal-to-indigo ramp for features. */
export function featureColor(index: number, count: number): string {
  const t = count <= 1 ? 0 : index / (count - 1);
  return hsl(170 + 80 * t, 55, 62 - 22 * t);
}

/** Orange-to-magenta ramp for classes. */
export function classColor(index: number, count: number): string {
  const t = count <= 1 ? 0 : index / (count - 1);
  return hsl(25 + 65 * t, 70, 58 - 18 * t);
}

/** Opacity for heatmap cells: value in [0, 1] with a visible floor for
 * nonzero coverage. */
export function coverageOpacity(value: number): number {
  if (value <= 0) return 0;
  return 0.15 + 0.85 * Math.min(1, value);
}
