/**
 * Method comparison: train one classifier per graph bundle built from the
 * same latent dataset and split, with identical seeds, and tabulate the
 * resulting metrics.
 */
import { LoadedBundle, adjacencyLists } from "./bundle.js";
import { GatClassifier, GatConfig } from "./gat.js";
import { MetricsReport } from "./metrics.js";

export interface ComparisonRow {
  method: string;
  bundleDir: string;
  metrics: MetricsReport;
  lossTrace: number[];
}

export interface Split {
  trainIdx: number[];
  testIdx: number[];
}

export function methodName(bundle: LoadedBundle): string {
  const config = bundle.meta.provenance?.config as { method?: string } | undefined;
  return config?.method ?? "unknown";
}

/** Fail fast when bundles were not built from the same latent dataset. */
export function assertComparable(bundles: { dir: string; data: LoadedBundle }[]): void {
  if (bundles.length === 0) throw new Error("no bundles given");
  const reference = bundles[0].data;
  for (const { dir, data } of bundles.slice(1)) {
    if (data.nNodes !== reference.nNodes) {
      throw new Error(`${dir}: node count ${data.nNodes} != ${reference.nNodes}`);
    }
    if (data.meta.features_sha256 !== reference.meta.features_sha256) {
      throw new Error(`${dir}: features checksum differs from ${bundles[0].dir}`);
    }
  }
}

export function compareMethods(
  bundles: { dir: string; data: LoadedBundle }[],
  split: Split,
  config: GatConfig,
): ComparisonRow[] {
  assertComparable(bundles);
  const rows: ComparisonRow[] = [];
  for (const { dir, data } of bundles) {
    if (!data.labels) throw new Error(`${dir}: bundle has no labels`);
    const classes = [...new Set(data.labels)].sort();
    const adj = adjacencyLists(data);
    const model = new GatClassifier(data.featureDim, classes, config);
    const trace = model.fit(data.features, adj, data.labels, split.trainIdx);
    const metrics = model.evaluate(data.features, adj, data.labels, split.testIdx);
    model.dispose();
    rows.push({
      method: methodName(data),
      bundleDir: dir,
      metrics,
      lossTrace: trace.map((t) => t.loss),
    });
  }
  return rows;
}

export function comparisonCsv(rows: ComparisonRow[]): string {
  const lines = ["method,accuracy,macro_precision,macro_recall,macro_f1"];
  for (const row of rows) {
    const m = row.metrics;
    lines.push(
      [row.method, m.accuracy, m.macro.precision, m.macro.recall, m.macro.f1].join(","),
    );
  }
  return lines.join("\n") + "\n";
}

export function perClassCsv(rows: ComparisonRow[]): string {
  const lines = ["method,class,precision,recall,f1,support"];
  for (const row of rows) {
    for (const cls of row.metrics.classes) {
      const s = row.metrics.perClass[cls];
      lines.push([row.method, cls, s.precision, s.recall, s.f1, s.support].join(","));
    }
  }
  return lines.join("\n") + "\n";
}
