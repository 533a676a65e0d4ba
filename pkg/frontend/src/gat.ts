/**
 * Two-layer graph attention classifier.
 *
 * Each layer projects node features (values), scores every target/neighbor
 * pair from the target's query term plus the neighbor's key term, softmaxes
 * the scores over the neighborhood (self included) and aggregates the
 * neighbors' values with those weights; eight heads concatenated feed one
 * output head. Training follows the evaluation protocol: Adam at lr 0.01
 * with 5e-4 coupled L2 weight decay, mini-batches of 128 seed nodes with
 * capped neighbor sampling, loss on seed nodes only.
 *
 * Implementation note: differentiable tf.gather is pathologically slow on
 * the pure-JS backend, so the batch is laid out as one layer-1 instance per
 * (seed, neighbor-slot). Gathers then touch only the constant feature
 * tensor and layer 2 consumes layer-1 output via reshape; everything on the
 * gradient tape is matmuls, broadcasts and softmax.
 */
import * as tf from "@tensorflow/tfjs";

import { MetricsReport, computeMetrics } from "./metrics.js";
import { Rng } from "./rng.js";

export interface GatConfig {
  epochs: number;
  batchSize: number;
  learningRate: number;
  weightDecay: number;
  heads: number;
  hiddenPerHead: number;
  /** Sampled neighbors per node per layer during training. */
  neighborCap: number;
  /** Sampled neighbors per node during inference (deterministic seed). */
  inferenceCap: number;
  seed: number;
}

export const DEFAULT_GAT: GatConfig = {
  epochs: 100,
  batchSize: 128,
  learningRate: 0.01,
  weightDecay: 5e-4,
  heads: 8,
  hiddenPerHead: 16,
  neighborCap: 10,
  inferenceCap: 30,
  seed: 0,
};

interface AttentionLayer {
  w: tf.Variable;
  bias: tf.Variable;
  attnQuery: tf.Variable;
  attnKey: tf.Variable;
  heads: number;
  width: number;
}

/**
 * Padded neighbor tables for one batch. Slot 0 of every row is the target
 * itself; tables hold node ids, masks flag real (1) vs padded (0) slots.
 */
interface Block {
  /** (seeds, w2) seed-level neighborhood. */
  table2: number[][];
  mask2: number[][];
  /** (seeds*w2, w1) neighborhood of each layer-1 instance. */
  table1: number[][];
  mask1: number[][];
  seeds: number[];
  w2: number;
}

function attentionLayer(inDim: number, heads: number, width: number, seed: number): AttentionLayer {
  const init = tf.initializers.glorotUniform({ seed });
  return {
    w: tf.variable(init.apply([inDim, heads * width]) as tf.Tensor),
    bias: tf.variable(tf.zeros([heads * width])),
    attnQuery: tf.variable(init.apply([heads, width]) as tf.Tensor),
    attnKey: tf.variable(init.apply([heads, width]) as tf.Tensor),
    heads,
    width,
  };
}

export interface EpochLoss {
  epoch: number;
  loss: number;
}

export class GatClassifier {
  readonly config: GatConfig;
  readonly classes: string[];
  private readonly layer1: AttentionLayer;
  private readonly layer2: AttentionLayer;
  private featureTensor: tf.Tensor2D | null = null;

  constructor(featureDim: number, classes: string[], config: GatConfig = DEFAULT_GAT) {
    if (classes.length < 2) throw new Error("need at least two classes");
    this.config = config;
    this.classes = [...classes].sort();
    this.layer1 = attentionLayer(
      featureDim, config.heads, config.hiddenPerHead, config.seed * 31 + 1,
    );
    this.layer2 = attentionLayer(
      config.heads * config.hiddenPerHead, 1, this.classes.length, config.seed * 31 + 2,
    );
  }

  private variables(): tf.Variable[] {
    return [this.layer1, this.layer2].flatMap((l) => [l.w, l.bias, l.attnQuery, l.attnKey]);
  }

  dispose(): void {
    for (const v of this.variables()) v.dispose();
    this.featureTensor?.dispose();
    this.featureTensor = null;
  }

  private buildBlock(seeds: number[], adj: number[][], cap: number, rng: Rng): Block {
    const sampleRow = (node: number): number[] => {
      const neighbors = adj[node].length > cap ? rng.sample(adj[node], cap) : adj[node];
      return [node, ...neighbors];
    };
    const rows2 = seeds.map(sampleRow);
    const w2 = Math.max(...rows2.map((r) => r.length));
    const table2 = rows2.map((r) => [...r, ...Array(w2 - r.length).fill(0)]);
    const mask2 = rows2.map((r) => [...r.map(() => 1), ...Array(w2 - r.length).fill(0)]);

    const rows1 = table2.flat().map(sampleRow);
    const w1 = Math.max(...rows1.map((r) => r.length));
    const table1 = rows1.map((r) => [...r, ...Array(w1 - r.length).fill(0)]);
    const mask1 = rows1.map((r) => [...r.map(() => 1), ...Array(w1 - r.length).fill(0)]);
    return { table2, mask2, table1, mask1, seeds, w2 };
  }

  /**
   * One attention layer over per-slot inputs.
   * slots: (targets, width, inDim); mask: (targets, width).
   * Returns (targets, heads*headWidth).
   */
  private attend(layer: AttentionLayer, slots: tf.Tensor, mask: tf.Tensor): tf.Tensor {
    const [targets, width, inDim] = slots.shape as [number, number, number];
    const { heads, width: out } = layer;
    const values = tf
      .add(tf.matMul(slots.reshape([targets * width, inDim]), layer.w as unknown as tf.Tensor2D), layer.bias)
      .reshape([targets, width, heads, out]);
    const query = tf.sum(
      tf.mul(tf.slice(values, [0, 0, 0, 0], [targets, 1, heads, out]), layer.attnQuery), 3,
    );
    const keys = tf.sum(tf.mul(values, layer.attnKey), 3);
    // (targets, heads, width): tfjs softmax wants the reduced axis last
    const scores = tf.transpose(tf.leakyRelu(tf.add(query, keys), 0.2), [0, 2, 1]);
    const masked = tf.add(scores, tf.mul(tf.sub(mask.expandDims(1), 1), 1e9));
    const alpha = tf.softmax(masked);
    const valuesT = tf.transpose(values, [0, 2, 1, 3]);
    const aggregated = tf.sum(tf.mul(alpha.expandDims(3), valuesT), 2);
    return aggregated.reshape([targets, heads * out]);
  }

  /** Logits for the block's seed nodes. */
  private forwardBlock(block: Block): tf.Tensor {
    const nSeeds = block.seeds.length;
    const table1 = tf.tensor2d(block.table1, undefined, "int32");
    const mask1 = tf.tensor2d(block.mask1, undefined, "float32");
    const mask2 = tf.tensor2d(block.mask2, undefined, "float32");
    // gather on the constant feature tensor only: stays off the gradient tape
    const slots1 = tf.gather(this.featureTensor!, table1);
    const hidden = tf.relu(this.attend(this.layer1, slots1, mask1));
    const slots2 = hidden.reshape([nSeeds, block.w2, this.config.heads * this.config.hiddenPerHead]);
    return this.attend(this.layer2, slots2, mask2);
  }

  private uploadFeatures(features: Float64Array[]): void {
    this.featureTensor?.dispose();
    this.featureTensor = tf.keep(
      tf.tensor2d(
        features.map((r) => Array.from(r)),
        [features.length, features[0].length],
        "float32",
      ),
    );
  }

  /**
   * Train on the given seed nodes; only their labels contribute to the loss,
   * so masked-out (test) labels never influence the model.
   */
  fit(
    features: Float64Array[],
    adj: number[][],
    labels: string[],
    trainIdx: number[],
  ): EpochLoss[] {
    const cfg = this.config;
    this.uploadFeatures(features);
    const classIndex = new Map(this.classes.map((c, i) => [c, i]));
    for (const i of trainIdx) {
      if (!classIndex.has(labels[i])) throw new Error(`label '${labels[i]}' not in classes`);
    }
    const optimizer = tf.train.adam(cfg.learningRate);
    const rng = new Rng(cfg.seed);
    const trace: EpochLoss[] = [];
    for (let epoch = 1; epoch <= cfg.epochs; epoch++) {
      const order = rng.shuffle([...trainIdx]);
      let epochLoss = 0;
      let batches = 0;
      for (let start = 0; start < order.length; start += cfg.batchSize) {
        const seeds = order.slice(start, start + cfg.batchSize);
        const block = this.buildBlock(seeds, adj, cfg.neighborCap, rng.fork(epoch * 10_007 + batches));
        const lossValue = tf.tidy(() => {
          const target = tf.oneHot(
            tf.tensor1d(seeds.map((s) => classIndex.get(labels[s])!), "int32"),
            this.classes.length,
          );
          const loss = optimizer.minimize(
            () => {
              const logits = this.forwardBlock(block);
              const ce = tf.losses.softmaxCrossEntropy(target, logits);
              const l2 = this.variables()
                .map((v) => tf.sum(tf.square(v)))
                .reduce((a, b) => tf.add(a, b));
              return tf.add(ce, tf.mul(l2, cfg.weightDecay * 0.5)) as tf.Scalar;
            },
            true,
            this.variables(),
          )!;
          return loss.dataSync()[0];
        });
        if (!Number.isFinite(lossValue)) {
          throw new Error(`non-finite training loss at epoch ${epoch}`);
        }
        epochLoss += lossValue;
        batches += 1;
      }
      trace.push({ epoch, loss: epochLoss / Math.max(1, batches) });
    }
    optimizer.dispose();
    return trace;
  }

  /** Predicted class labels for the given nodes (deterministic sampling seed). */
  predict(features: Float64Array[], adj: number[][], nodeIdx: number[]): string[] {
    if (!this.featureTensor) this.uploadFeatures(features);
    const rng = new Rng(this.config.seed ^ 0x5eed);
    const out: string[] = [];
    const chunk = 256;
    for (let start = 0; start < nodeIdx.length; start += chunk) {
      const seeds = nodeIdx.slice(start, start + chunk);
      const block = this.buildBlock(seeds, adj, this.config.inferenceCap, rng.fork(start + 1));
      const picks = tf.tidy(() => this.forwardBlock(block).argMax(1).dataSync());
      for (let i = 0; i < seeds.length; i++) out.push(this.classes[picks[i]]);
    }
    return out;
  }

  evaluate(
    features: Float64Array[],
    adj: number[][],
    labels: string[],
    testIdx: number[],
  ): MetricsReport {
    const predicted = this.predict(features, adj, testIdx);
    return computeMetrics(this.classes, testIdx.map((i) => labels[i]), predicted);
  }
}

/** Stratified node-index split used when a bundle has no recorded split. */
export function stratifiedMasks(
  labels: string[],
  testFraction: number,
  seed: number,
): { trainIdx: number[]; testIdx: number[] } {
  const byClass = new Map<string, number[]>();
  labels.forEach((label, i) => {
    const bucket = byClass.get(label) ?? [];
    bucket.push(i);
    byClass.set(label, bucket);
  });
  const rng = new Rng(seed);
  const trainIdx: number[] = [];
  const testIdx: number[] = [];
  for (const cls of [...byClass.keys()].sort()) {
    const members = rng.shuffle([...byClass.get(cls)!]);
    const nTest = Math.floor(members.length * testFraction);
    testIdx.push(...members.slice(0, nTest));
    trainIdx.push(...members.slice(nTest));
  }
  trainIdx.sort((a, b) => a - b);
  testIdx.sort((a, b) => a - b);
  return { trainIdx, testIdx };
}
