import type {
  ClustersPayload,
  FilterDoc,
  OverviewPayload,
  ProjectionPayload,
  TreesPayload,
} from "./types.js";

export interface TrainParams {
  n_trees?: number;
  max_depth?: number | null;
  seed?: number;
}

/** Thin typed client over the service API. Filtered cluster requests are
 * cancelled when a newer filter supersedes them. */
export class ApiClient {
  private clustersAbort: AbortController | null = null;

  constructor(readonly base: string) {}

  private async getJson<T>(path: string, signal?: AbortSignal): Promise<T> {
    const resp = await fetch(this.base + path, { signal });
    if (!resp.ok) {
      const body = await resp.text();
      throw new Error(`GET ${path}: ${resp.status} ${body}`);
    }
    return (await resp.json()) as T;
  }

  async createSession(
    source: { builtin?: string; csv?: string },
    params: TrainParams = {},
  ): Promise<{ session_id: string; n_trees: number }> {
    const resp = await fetch(this.base + "/api/sessions", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ ...source, params }),
    });
    if (!resp.ok) throw new Error(`create session: ${resp.status} ${await resp.text()}`);
    return (await resp.json()) as { session_id: string; n_trees: number };
  }

  overview(sid: string): Promise<OverviewPayload> {
    return this.getJson(`/api/sessions/${sid}/overview`);
  }

  projection(sid: string, m: number): Promise<ProjectionPayload> {
    return this.getJson(`/api/sessions/${sid}/projection?m=${m}`);
  }

  /** Cancels any in-flight clusters request: only the newest filter wins. */
  clusters(sid: string, m: number, filter: FilterDoc | null): Promise<ClustersPayload> {
    this.clustersAbort?.abort();
    this.clustersAbort = new AbortController();
    const q = filter ? `&filter=${encodeURIComponent(JSON.stringify(filter))}` : "";
    return this.getJson(`/api/sessions/${sid}/clusters?m=${m}${q}`, this.clustersAbort.signal);
  }

  trees(sid: string, cluster: number, m: number): Promise<TreesPayload> {
    return this.getJson(`/api/sessions/${sid}/trees?cluster=${cluster}&m=${m}`);
  }
}
