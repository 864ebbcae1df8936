import { describe, expect, it } from "vitest";

import { Store } from "../src/state.js";

describe("view state", () => {
  it("starts with an empty filter", () => {
    const store = new Store();
    expect(store.filterDoc()).toBeNull();
  });

  it("builds a canonical filter document", () => {
    const store = new Store();
    store.brushFeature(3, [1.0, 2.0]);
    store.brushFeature(0, [0.5, 0.9]);
    store.toggleCell(1, 0);
    expect(store.filterDoc()).toEqual({
      ranges: [
        [0, 0.5, 0.9],
        [3, 1.0, 2.0],
      ],
      cells: [[1, 0]],
    });
  });

  it("re-brushing a feature replaces its range; null clears it", () => {
    const store = new Store();
    store.brushFeature(2, [0, 1]);
    store.brushFeature(2, [5, 6]);
    expect(store.filterDoc()!.ranges).toEqual([[2, 5, 6]]);
    store.brushFeature(2, null);
    expect(store.filterDoc()).toBeNull();
  });

  it("toggling a cell twice removes it", () => {
    const store = new Store();
    store.toggleCell(0, 1);
    store.toggleCell(0, 1);
    expect(store.filterDoc()).toBeNull();
  });

  it("selecting a class row selects every cell in the row", () => {
    const store = new Store();
    store.selectClassRow(2, 4);
    expect(store.filterDoc()!.cells).toEqual([
      [2, 0],
      [2, 1],
      [2, 2],
      [2, 3],
    ]);
  });

  it("notifies subscribers and supports unsubscribe", () => {
    const store = new Store();
    let calls = 0;
    const off = store.subscribe(() => calls++);
    store.update({ m: 5 });
    off();
    store.update({ m: 6 });
    expect(calls).toBe(1);
    expect(store.get().m).toBe(6);
  });
});
