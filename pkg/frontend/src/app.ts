import { ApiClient } from "./api.js";
import { renderClusterGrid } from "./clusterGrid.js";
import { applyFeatureHighlight } from "./highlight.js";
import { renderSidebar } from "./sidebar.js";
import { Store } from "./state.js";
import { renderTreeList } from "./treeView.js";
import type { OverviewPayload } from "./types.js";

export interface App {
  store: Store;
  api: ApiClient;
  root: HTMLElement;
  overview: OverviewPayload | null;
  refresh: () => Promise<void>;
}

function showError(root: HTMLElement, message: string): void {
  let banner = root.querySelector<HTMLElement>(".error-banner");
  if (!banner) {
    banner = document.createElement("div");
    banner.className = "error-banner";
    root.prepend(banner);
  }
  banner.textContent = message;
}

export interface AppOptions {
  builtin?: string;
  params?: { n_trees?: number };
  /** Attach to an existing session instead of training a fresh forest. */
  sessionId?: string;
}

/** Boot the explorer against a running service: create (or attach to) a
 * session for the chosen built-in dataset and wire the linked views. */
export async function createApp(
  root: HTMLElement,
  base: string,
  options: AppOptions = {},
): Promise<App> {
  const api = new ApiClient(base);
  const store = new Store();

  const sidebar = document.createElement("div");
  const grid = document.createElement("div");
  const trees = document.createElement("div");
  root.append(sidebar, grid, trees);

  const session_id =
    options.sessionId ??
    (await api.createSession({ builtin: options.builtin ?? "glass" }, options.params ?? {}))
      .session_id;
  const overview = await api.overview(session_id);
  store.update({ sessionId: session_id, m: overview.cluster_curve.default_m });

  const app: App = { store, api, root, overview, refresh: async () => {} };

  const refresh = async (): Promise<void> => {
    const state = store.get();
    if (!state.sessionId) return;
    try {
      const [projection, clusters] = await Promise.all([
        api.projection(state.sessionId, state.m),
        api.clusters(state.sessionId, state.m, store.filterDoc()),
      ]);
      renderSidebar(sidebar, overview, projection, store);
      renderClusterGrid(
        grid,
        clusters,
        overview.distributions.length,
        overview.dataset.classes.length,
        store,
      );
      const selected = clusters.clusters.find((c) => c.cluster === state.selectedCluster);
      if (selected) {
        const treesPayload = await api.trees(state.sessionId, selected.cluster, state.m);
        const visibleLeaves = new Set(
          selected.rule_plot.columns.filter((c) => c.visible).map((c) => c.rep_leaf),
        );
        renderTreeList(
          trees,
          treesPayload.layouts,
          treesPayload.representative,
          overview.distributions.length,
          overview.dataset.classes.length,
          overview.dataset.classes,
          store.filterDoc() ? visibleLeaves : null,
        );
      }
      applyFeatureHighlight(root, state.hoveredFeature);
    } catch (err) {
      if ((err as Error).name === "AbortError") return; // superseded by a newer filter
      showError(root, String(err));
    }
  };
  app.refresh = refresh;

  let lastHover: number | null = null;
  store.subscribe((state) => {
    if (state.hoveredFeature !== lastHover) {
      // hover only re-applies highlight classes; no re-fetch
      lastHover = state.hoveredFeature;
      applyFeatureHighlight(root, state.hoveredFeature);
      return;
    }
    void refresh();
  });

  await refresh();
  return app;
}
