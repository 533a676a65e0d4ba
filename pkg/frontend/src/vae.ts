/**
 * Variational autoencoder for tabular feature reduction.
 *
 * Encoder maps each row to a diagonal-Gaussian posterior (mu, logvar);
 * training maximizes the evidence lower bound: a unit-variance Gaussian
 * reconstruction term minus the KL divergence to a standard-normal prior,
 * with reparameterized sampling. Downstream consumers use the posterior
 * means, so the reduced representation is deterministic.
 */
import * as tf from "@tensorflow/tfjs";

import { Rng } from "./rng.js";

export interface VaeConfig {
  inputDim: number;
  latentDim: number;
  hidden: number[];
  epochs: number;
  batchSize: number;
  learningRate: number;
  validationFraction: number;
  seed: number;
}

export const DEFAULT_VAE: Omit<VaeConfig, "inputDim"> = {
  latentDim: 6,
  hidden: [64, 32],
  epochs: 20,
  batchSize: 128,
  learningRate: 1e-3,
  validationFraction: 0.1,
  seed: 0,
};

export interface EpochStats {
  epoch: number;
  /** Mean per-row ELBO on the training rows (reconstruction - KL). */
  trainElbo: number;
  valElbo: number;
  reconstruction: number;
  kl: number;
}

interface Dense {
  w: tf.Variable;
  b: tf.Variable;
}

function dense(inDim: number, outDim: number, seed: number): Dense {
  const init = tf.initializers.glorotUniform({ seed });
  return {
    w: tf.variable(init.apply([inDim, outDim]) as tf.Tensor),
    b: tf.variable(tf.zeros([outDim])),
  };
}

function apply(layer: Dense, x: tf.Tensor): tf.Tensor {
  return tf.add(tf.matMul(x as tf.Tensor2D, layer.w as unknown as tf.Tensor2D), layer.b);
}

export class Vae {
  readonly config: VaeConfig;
  private readonly encoderHidden: Dense[] = [];
  private readonly muHead: Dense;
  private readonly logvarHead: Dense;
  private readonly decoderHidden: Dense[] = [];
  private readonly outputHead: Dense;

  constructor(config: VaeConfig) {
    if (config.latentDim >= config.inputDim) {
      throw new Error(`latentDim ${config.latentDim} must be below inputDim ${config.inputDim}`);
    }
    if (config.epochs < 1) throw new Error("epochs must be >= 1");
    this.config = config;
    let width = config.inputDim;
    let seed = config.seed * 7919 + 1;
    for (const h of config.hidden) {
      this.encoderHidden.push(dense(width, h, seed++));
      width = h;
    }
    this.muHead = dense(width, config.latentDim, seed++);
    this.logvarHead = dense(width, config.latentDim, seed++);
    width = config.latentDim;
    for (const h of [...config.hidden].reverse()) {
      this.decoderHidden.push(dense(width, h, seed++));
      width = h;
    }
    this.outputHead = dense(width, config.inputDim, seed++);
  }

  private variables(): tf.Variable[] {
    const layers = [
      ...this.encoderHidden,
      this.muHead,
      this.logvarHead,
      ...this.decoderHidden,
      this.outputHead,
    ];
    return layers.flatMap((l) => [l.w, l.b]);
  }

  private encoderForward(x: tf.Tensor): { mu: tf.Tensor; logvar: tf.Tensor } {
    let h = x;
    for (const layer of this.encoderHidden) h = tf.relu(apply(layer, h));
    return { mu: apply(this.muHead, h), logvar: apply(this.logvarHead, h) };
  }

  private decoderForward(z: tf.Tensor): tf.Tensor {
    let h = z;
    for (const layer of this.decoderHidden) h = tf.relu(apply(layer, h));
    return apply(this.outputHead, h);
  }

  /**
   * Per-batch loss terms (means over rows):
   * reconstruction = 0.5 * sum_d (x - xhat)^2, kl = analytic Gaussian KL.
   */
  private lossTerms(x: tf.Tensor, sampleSeed: number): { recon: tf.Tensor; kl: tf.Tensor } {
    const { mu, logvar } = this.encoderForward(x);
    const eps = tf.randomNormal(mu.shape as [number, number], 0, 1, "float32", sampleSeed);
    const z = tf.add(mu, tf.mul(tf.exp(tf.mul(logvar, 0.5)), eps));
    const xhat = this.decoderForward(z);
    const recon = tf.mean(tf.mul(tf.sum(tf.square(tf.sub(x, xhat)), 1), 0.5));
    const kl = tf.mean(
      tf.mul(tf.sum(tf.sub(tf.add(tf.square(mu), tf.exp(logvar)), tf.add(logvar, 1)), 1), 0.5),
    );
    return { recon, kl };
  }

  /** Train on row-major features (already scaled to a bounded range). */
  fit(features: Float64Array[]): EpochStats[] {
    const cfg = this.config;
    const n = features.length;
    if (n < cfg.batchSize) {
      throw new Error(`need at least batchSize=${cfg.batchSize} rows, got ${n}`);
    }
    const rng = new Rng(cfg.seed);
    const order = rng.shuffle(Array.from({ length: n }, (_, i) => i));
    const nVal = Math.floor(n * cfg.validationFraction);
    const valIdx = order.slice(0, nVal);
    const trainIdx = order.slice(nVal);

    const all = tf.tensor2d(
      features.map((row) => Array.from(row)),
      [n, cfg.inputDim],
      "float32",
    );
    const trainTensor = tf.gather(all, trainIdx);
    const valTensor = nVal > 0 ? tf.gather(all, valIdx) : null;
    all.dispose();

    const optimizer = tf.train.adam(cfg.learningRate);
    const trace: EpochStats[] = [];
    let step = 0;
    for (let epoch = 1; epoch <= cfg.epochs; epoch++) {
      const epochOrder = rng.shuffle(Array.from({ length: trainIdx.length }, (_, i) => i));
      for (let start = 0; start + cfg.batchSize <= epochOrder.length; start += cfg.batchSize) {
        const batchIdx = epochOrder.slice(start, start + cfg.batchSize);
        const sampleSeed = cfg.seed * 1_000_003 + step;
        step += 1;
        tf.tidy(() => {
          const batch = tf.gather(trainTensor, batchIdx);
          optimizer.minimize(() => {
            const { recon, kl } = this.lossTerms(batch, sampleSeed);
            return tf.add(recon, kl) as tf.Scalar;
          }, false, this.variables());
        });
      }
      const stats = tf.tidy(() => {
        const { recon, kl } = this.lossTerms(trainTensor, cfg.seed * 1_000_003 + step);
        const reconVal = recon.dataSync()[0];
        const klVal = kl.dataSync()[0];
        let valElbo = NaN;
        if (valTensor) {
          const v = this.lossTerms(valTensor, cfg.seed * 1_000_003 + step + 1);
          valElbo = -(v.recon.dataSync()[0] + v.kl.dataSync()[0]);
        }
        return {
          epoch,
          trainElbo: -(reconVal + klVal),
          valElbo,
          reconstruction: -reconVal,
          kl: klVal,
        };
      });
      if (!Number.isFinite(stats.trainElbo)) {
        trainTensor.dispose();
        valTensor?.dispose();
        throw new Error(`non-finite loss at epoch ${epoch}: ${JSON.stringify(stats)}`);
      }
      trace.push(stats);
    }
    trainTensor.dispose();
    valTensor?.dispose();
    return trace;
  }

  /** Posterior means for each row; deterministic (no sampling). */
  encode(features: Float64Array[]): Float64Array[] {
    const out: Float64Array[] = [];
    const chunk = 4096;
    for (let start = 0; start < features.length; start += chunk) {
      const rows = features.slice(start, start + chunk);
      const values = tf.tidy(() => {
        const x = tf.tensor2d(
          rows.map((r) => Array.from(r)),
          [rows.length, this.config.inputDim],
          "float32",
        );
        return this.encoderForward(x).mu.dataSync();
      });
      for (let i = 0; i < rows.length; i++) {
        out.push(Float64Array.from(values.slice(i * this.config.latentDim, (i + 1) * this.config.latentDim)));
      }
    }
    return out;
  }

  /** Mean per-row reconstruction MSE using the posterior mean (no sampling). */
  reconstructionMse(features: Float64Array[]): number {
    return tf.tidy(() => {
      const x = tf.tensor2d(
        features.map((r) => Array.from(r)),
        [features.length, this.config.inputDim],
        "float32",
      );
      const { mu } = this.encoderForward(x);
      const xhat = this.decoderForward(mu);
      return tf.mean(tf.square(tf.sub(x, xhat))).dataSync()[0];
    });
  }

  dispose(): void {
    for (const v of this.variables()) v.dispose();
  }
}
