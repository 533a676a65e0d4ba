/**
 * Method comparison CLI: train one classifier per bundle (same seed, same
 * split) and write the comparison tables plus bar-chart SVGs.
 *
 *   node dist/compare-cli.js --bundles b1,b2,b3 --split split.json --out-dir cmp/
 */
import * as fs from "fs";
import * as path from "path";
import { parseArgs } from "util";

import { initBackend } from "./backend.js";
import { loadBundle } from "./bundle.js";
import { accuracyChart, perClassChart } from "./charts.js";
import { compareMethods, comparisonCsv, perClassCsv } from "./compare.js";
import { DEFAULT_GAT, stratifiedMasks } from "./gat.js";

async function main(): Promise<void> {
  const { values } = parseArgs({
    options: {
      bundles: { type: "string" },
      split: { type: "string" },
      epochs: { type: "string", default: String(DEFAULT_GAT.epochs) },
      seed: { type: "string", default: "0" },
      "test-fraction": { type: "string", default: "0.2" },
      "out-dir": { type: "string" },
    },
  });
  if (!values.bundles || !values["out-dir"]) {
    console.error("usage: compare-cli --bundles DIR,DIR,... --out-dir DIR [--split split.json]");
    process.exit(2);
  }

  const dirs = values.bundles.split(",");
  const bundles = dirs.map((dir) => ({ dir, data: loadBundle(dir) }));
  const labels = bundles[0].data.labels;
  if (!labels) {
    console.error("bundles must carry labels");
    process.exit(3);
  }
  const split = values.split
    ? (JSON.parse(fs.readFileSync(values.split, "utf8")) as { trainIdx: number[]; testIdx: number[] })
    : stratifiedMasks(labels, Number(values["test-fraction"]), Number(values.seed));

  const config = { ...DEFAULT_GAT, epochs: Number(values.epochs), seed: Number(values.seed) };
  const rows = compareMethods(bundles, split, config);

  const outDir = values["out-dir"]!;
  fs.mkdirSync(outDir, { recursive: true });
  fs.writeFileSync(path.join(outDir, "comparison.csv"), comparisonCsv(rows));
  fs.writeFileSync(path.join(outDir, "per_class.csv"), perClassCsv(rows));
  fs.writeFileSync(path.join(outDir, "accuracy.svg"), accuracyChart(rows));
  fs.writeFileSync(path.join(outDir, "per_class.svg"), perClassChart(rows));
  fs.writeFileSync(
    path.join(outDir, "manifest.json"),
    JSON.stringify({ tool: "graphforge-harness compare", bundles: dirs, config }, null, 2) + "\n",
  );
  for (const row of rows) {
    console.log(`${row.method}: accuracy ${row.metrics.accuracy.toFixed(4)}`);
  }
}

await initBackend();
main();
