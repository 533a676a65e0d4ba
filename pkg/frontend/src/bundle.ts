/**
 * GraphBundle loader: the on-disk contract with the graph construction CLI.
 * Verifies the format version and the SHA-256 of features.csv before use.
 */
import * as crypto from "crypto";
import * as fs from "fs";
import * as path from "path";

export interface BundleMeta {
  format_version: number;
  n_nodes: number;
  n_edges: number;
  feature_dim: number;
  directed: boolean;
  has_labels: boolean;
  has_weights: boolean;
  dedup_applied: boolean;
  features_sha256: string;
  provenance: { config?: Record<string, unknown>; dataset_checksum?: string };
}

export interface LoadedBundle {
  meta: BundleMeta;
  nNodes: number;
  featureDim: number;
  /** Row-major node features, row order = node id. */
  features: Float64Array[];
  rowIds: Int32Array;
  /** Edge endpoints; undirected edges appear once with u < v. */
  edgesU: Int32Array;
  edgesV: Int32Array;
  labels: string[] | null;
}

const SUPPORTED_VERSION = 1;

export function loadBundle(dir: string): LoadedBundle {
  const metaPath = path.join(dir, "meta.json");
  if (!fs.existsSync(metaPath)) {
    throw new Error(`not a bundle (missing meta.json): ${dir}`);
  }
  const meta = JSON.parse(fs.readFileSync(metaPath, "utf8")) as BundleMeta;
  if (meta.format_version !== SUPPORTED_VERSION) {
    throw new Error(`unsupported bundle format_version ${meta.format_version}`);
  }

  const featuresPath = path.join(dir, "features.csv");
  const rawFeatures = fs.readFileSync(featuresPath);
  const digest = crypto.createHash("sha256").update(rawFeatures).digest("hex");
  if (digest !== meta.features_sha256) {
    throw new Error(`features.csv checksum mismatch in ${dir}`);
  }

  const featureLines = rawFeatures.toString("utf8").split("\n").filter((l) => l.length > 0);
  const n = meta.n_nodes;
  const d = meta.feature_dim;
  if (featureLines.length - 1 !== n) {
    throw new Error(`features.csv has ${featureLines.length - 1} rows, meta says ${n}`);
  }
  const features: Float64Array[] = new Array(n);
  const rowIds = new Int32Array(n);
  for (let i = 0; i < n; i++) {
    const parts = featureLines[i + 1].split(",");
    if (parts.length !== d + 1) {
      throw new Error(`features.csv row ${i}: expected ${d + 1} fields, got ${parts.length}`);
    }
    rowIds[i] = Number(parts[0]);
    const row = new Float64Array(d);
    for (let c = 0; c < d; c++) row[c] = Number(parts[c + 1]);
    features[i] = row;
  }

  const edgeLines = fs
    .readFileSync(path.join(dir, "edges.csv"), "utf8")
    .split("\n")
    .filter((l) => l.length > 0);
  const m = edgeLines.length - 1;
  if (m !== meta.n_edges) {
    throw new Error(`edges.csv has ${m} rows, meta says ${meta.n_edges}`);
  }
  const edgesU = new Int32Array(m);
  const edgesV = new Int32Array(m);
  for (let e = 0; e < m; e++) {
    const [u, v] = edgeLines[e + 1].split(",").map(Number);
    if (!(u >= 0 && u < n && v >= 0 && v < n)) {
      throw new Error(`edges.csv row ${e} references a node outside 0..${n - 1}`);
    }
    edgesU[e] = u;
    edgesV[e] = v;
  }

  let labels: string[] | null = null;
  if (meta.has_labels) {
    const labelLines = fs
      .readFileSync(path.join(dir, "labels.csv"), "utf8")
      .split("\n")
      .filter((l) => l.length > 0);
    labels = labelLines.slice(1);
    if (labels.length !== n) {
      throw new Error(`labels.csv has ${labels.length} rows, expected ${n}`);
    }
  }

  return { meta, nNodes: n, featureDim: d, features, rowIds, edgesU, edgesV, labels };
}

/** Undirected adjacency lists (directed bundles are symmetrized for message passing). */
export function adjacencyLists(bundle: LoadedBundle): number[][] {
  const adj: number[][] = Array.from({ length: bundle.nNodes }, () => []);
  for (let e = 0; e < bundle.edgesU.length; e++) {
    const u = bundle.edgesU[e];
    const v = bundle.edgesV[e];
    adj[u].push(v);
    adj[v].push(u);
  }
  return adj;
}
