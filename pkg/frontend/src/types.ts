// Payload shapes mirrored from the service's canonical JSON documents.

export interface QuantDistribution {
  feature: number;
  name: string;
  kind: "quantitative";
  range: [number, number];
  grid: number[];
  density: number[];
  bandwidth: number;
}

export interface CatDistribution {
  feature: number;
  name: string;
  kind: "categorical";
  range: [number, number];
  categories: string[];
  counts: number[];
}

export type Distribution = QuantDistribution | CatDistribution;

export interface OverviewPayload {
  schema: string;
  dataset: {
    name: string;
    classes: string[];
    n_rows: number;
    n_train: number;
    n_test: number;
  };
  distributions: Distribution[];
  confusion: { counts: number[][]; accuracy: number };
  cluster_curve: { samples: [number, number][]; default_m: number };
  n_trees: number;
}

export interface ProjectionPayload {
  schema: string;
  m: number;
  points: { tree: number; x: number; y: number }[];
  labels: number[];
  hulls: { cluster: number; vertices: number[] }[];
  medoids: number[];
}

export interface FeaturePlotCell {
  feature: number;
  proportion: number;
  active_fraction: number;
}

export interface FeaturePlot {
  schema: string;
  cluster: number;
  max_depth: number;
  levels: FeaturePlotCell[][];
}

export interface RuleColumn {
  rep_leaf: number;
  predicted_class: number;
  width_scale: number;
  visible: boolean;
  mapped_count: number;
  visible_count: number;
  coverage: { breaks: number[]; values: number[] }[];
  confusion: Record<string, number>;
}

export interface RulePlot {
  schema: string;
  cluster: number;
  representative: number;
  columns: RuleColumn[];
  unmapped_count: number;
  unmapped_confusion: Record<string, number>;
}

export interface ClusterEntry {
  cluster: number;
  size: number;
  members: number[];
  medoid: number;
  feature_plot: FeaturePlot;
  rule_plot: RulePlot;
}

export interface ClustersPayload {
  m: number;
  clusters: ClusterEntry[];
}

export interface LayoutNode {
  id: number;
  kind: "leaf" | "split";
  x: number;
  y: number;
  width: number;
  height: number;
  depth: number;
  train_count: number;
  test_count: number;
  predicted_class?: number;
  test_confusion?: Record<string, number>;
  feature?: number;
  threshold?: number;
  anchor_x?: number;
  active_interval?: [number, number];
  gray_intervals?: [number, number][];
}

export interface LayoutEdge {
  parent: number;
  child: number;
  bezier: [number, number][];
  thickness: number;
  dominant_class: number;
}

export interface TreeLayoutPayload {
  schema: string;
  tree: number;
  train_accuracy: number;
  test_accuracy: number;
  nodes: LayoutNode[];
  edges: LayoutEdge[];
}

export interface TreesPayload {
  m: number;
  cluster: number;
  representative: number;
  layouts: TreeLayoutPayload[];
}

export interface FilterDoc {
  ranges: [number, number, number][];
  cells: [number, number][];
}
