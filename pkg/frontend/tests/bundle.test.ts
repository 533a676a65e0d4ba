/**
 * Interchange contract: load bundles produced by the construction CLI,
 * verify checksums, and fail loudly on tampering.
 */
import { execFileSync } from "child_process";
import * as fs from "fs";
import * as os from "os";
import * as path from "path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { adjacencyLists, loadBundle } from "../src/bundle.js";
import { Rng } from "../src/rng.js";

let workDir: string;
let bundleDir: string;

beforeAll(() => {
  workDir = fs.mkdtempSync(path.join(os.tmpdir(), "harness-bundle-"));
  const csv = path.join(workDir, "points.csv");
  const rng = new Rng(31);
  const lines = ["f0,f1,label"];
  for (let i = 0; i < 50; i++) {
    lines.push(`${rng.next()},${rng.next()},${i % 2 ? "attack" : "benign"}`);
  }
  fs.writeFileSync(csv, lines.join("\n") + "\n");
  bundleDir = path.join(workDir, "knn-bundle");
  execFileSync("graphforge", [
    "build", "--input", csv, "--method", "knn", "--k", "3", "--symmetrize", "union",
    "--label-col", "label", "--out", bundleDir,
  ]);
});

afterAll(() => {
  fs.rmSync(workDir, { recursive: true, force: true });
});

describe("bundle loading", () => {
  it("loads a CLI-built bundle with verified checksum", () => {
    const bundle = loadBundle(bundleDir);
    expect(bundle.nNodes).toBe(50);
    expect(bundle.featureDim).toBe(2);
    expect(bundle.labels).toHaveLength(50);
    expect(bundle.meta.directed).toBe(false);
    expect(bundle.meta.provenance.config?.method).toBe("knn");
    expect(bundle.edgesU.length).toBe(bundle.meta.n_edges);
    // undirected storage: u < v everywhere
    for (let e = 0; e < bundle.edgesU.length; e++) {
      expect(bundle.edgesU[e]).toBeLessThan(bundle.edgesV[e]);
    }
  });

  it("builds symmetric adjacency lists covering every union-kNN node", () => {
    const bundle = loadBundle(bundleDir);
    const adj = adjacencyLists(bundle);
    expect(adj).toHaveLength(50);
    for (let u = 0; u < adj.length; u++) {
      expect(adj[u].length).toBeGreaterThan(0); // union kNN leaves no isolated nodes
      for (const v of adj[u]) expect(adj[v]).toContain(u);
    }
  });

  it("rejects a tampered features file", () => {
    const copy = path.join(workDir, "tampered");
    fs.cpSync(bundleDir, copy, { recursive: true });
    const featuresPath = path.join(copy, "features.csv");
    const text = fs.readFileSync(featuresPath, "utf8");
    fs.writeFileSync(featuresPath, text.replace("0.", "9."));
    expect(() => loadBundle(copy)).toThrow(/checksum/);
  });

  it("rejects unknown format versions", () => {
    const copy = path.join(workDir, "version");
    fs.cpSync(bundleDir, copy, { recursive: true });
    const metaPath = path.join(copy, "meta.json");
    const meta = JSON.parse(fs.readFileSync(metaPath, "utf8"));
    meta.format_version = 99;
    fs.writeFileSync(metaPath, JSON.stringify(meta));
    expect(() => loadBundle(copy)).toThrow(/format_version/);
  });

  it("rejects a directory that is not a bundle", () => {
    expect(() => loadBundle(workDir)).toThrow(/meta.json/);
  });
});
