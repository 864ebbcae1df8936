import type { FilterDoc } from "./types.js";

export interface ViewState {
  sessionId: string | null;
  m: number;
  selectedCluster: number;
  ranges: Map<number, [number, number]>;
  cells: Set<string>; // "true,pred"
  hoveredFeature: number | null;
  hoveredClass: number | null;
}

export type Listener = (state: ViewState) => void;

export class Store {
  private state: ViewState = {
    sessionId: null,
    m: 2,
    selectedCluster: 0,
    ranges: new Map(),
    cells: new Set(),
    hoveredFeature: null,
    hoveredClass: null,
  };
  private listeners: Listener[] = [];

  get(): ViewState {
    return this.state;
  }

  subscribe(fn: Listener): () => void {
    this.listeners.push(fn);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== fn);
    };
  }

  update(patch: Partial<ViewState>): void {
    this.state = { ...this.state, ...patch };
    for (const fn of this.listeners) fn(this.state);
  }

  /** Brush one feature to a raw-unit range; null clears the brush. */
  brushFeature(feature: number, range: [number, number] | null): void {
    const ranges = new Map(this.state.ranges);
    if (range === null) ranges.delete(feature);
    else ranges.set(feature, range);
    this.update({ ranges });
  }

  toggleCell(trueClass: number, predClass: number): void {
    const key = `${trueClass},${predClass}`;
    const cells = new Set(this.state.cells);
    if (cells.has(key)) cells.delete(key);
    else cells.add(key);
    this.update({ cells });
  }

  /** Clicking a row label selects every cell of that true class. */
  selectClassRow(trueClass: number, nClasses: number): void {
    const cells = new Set(this.state.cells);
    for (let p = 0; p < nClasses; p++) cells.add(`${trueClass},${p}`);
    this.update({ cells });
  }

  clearFilter(): void {
    this.update({ ranges: new Map(), cells: new Set() });
  }

  setHoveredFeature(feature: number | null): void {
    this.update({ hoveredFeature: feature });
  }

  /** The exact document sent to the service; the UI never filters locally. */
  filterDoc(): FilterDoc | null {
    if (this.state.ranges.size === 0 && this.state.cells.size === 0) return null;
    const ranges: [number, number, number][] = [...this.state.ranges.entries()]
      .map(([f, [lo, hi]]): [number, number, number] => [f, lo, hi])
      .sort((a, b) => a[0] - b[0]);
    const cells: [number, number][] = [...this.state.cells]
      .map((key): [number, number] => {
        const [t, p] = key.split(",").map(Number);
        return [t, p];
      })
      .sort((a, b) => a[0] - b[0] || a[1] - b[1]);
    return { ranges, cells };
  }
}
