/**
 * Minimal CSV helpers for the harness's controlled files: headered,
 * comma-separated, no quoting (labels never contain commas).
 */
import * as fs from "fs";

export interface NumericTable {
  header: string[];
  /** Row-major numeric matrix for every non-label column. */
  features: Float64Array[];
  labels: string[] | null;
}

export function readTable(path: string, labelColumn: string | null): NumericTable {
  const text = fs.readFileSync(path, "utf8");
  const lines = text.split("\n").filter((line) => line.length > 0);
  if (lines.length < 2) {
    throw new Error(`${path}: expected a header and at least one data row`);
  }
  const header = lines[0].split(",");
  const labelIdx = labelColumn === null ? -1 : header.indexOf(labelColumn);
  if (labelColumn !== null && labelIdx < 0) {
    throw new Error(`${path}: label column '${labelColumn}' not found in [${header.join(", ")}]`);
  }
  const featureIdx = header.map((_, i) => i).filter((i) => i !== labelIdx);
  const features: Float64Array[] = [];
  const labels: string[] = [];
  for (let r = 1; r < lines.length; r++) {
    const parts = lines[r].split(",");
    if (parts.length !== header.length) {
      throw new Error(`${path}: row ${r - 1} has ${parts.length} fields, header has ${header.length}`);
    }
    const row = new Float64Array(featureIdx.length);
    for (let c = 0; c < featureIdx.length; c++) {
      const value = Number(parts[featureIdx[c]]);
      if (!Number.isFinite(value)) {
        throw new Error(`${path}: non-finite value '${parts[featureIdx[c]]}' at row ${r - 1}`);
      }
      row[c] = value;
    }
    features.push(row);
    if (labelIdx >= 0) labels.push(parts[labelIdx]);
  }
  return {
    header: featureIdx.map((i) => header[i]),
    features,
    labels: labelIdx >= 0 ? labels : null,
  };
}

export function writeTable(
  path: string,
  featureNames: string[],
  features: ArrayLike<number>[],
  labels: string[] | null,
): void {
  const header = labels ? [...featureNames, "label"] : featureNames;
  const lines = [header.join(",")];
  for (let i = 0; i < features.length; i++) {
    const row = Array.from(features[i], (v) => String(v));
    if (labels) row.push(labels[i]);
    lines.push(row.join(","));
  }
  fs.writeFileSync(path, lines.join("\n") + "\n");
}
