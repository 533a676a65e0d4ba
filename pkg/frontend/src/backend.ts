/**
 * Backend selection: prefer the WASM kernels (roughly an order of magnitude
 * faster than the pure-JS CPU backend for this workload), fall back to CPU.
 * Threads are pinned to 1 so reductions are bit-reproducible run to run.
 */
import * as tf from "@tensorflow/tfjs";

let initialized: string | null = null;

export async function initBackend(): Promise<string> {
  if (initialized) return initialized;
  try {
    const wasm = await import("@tensorflow/tfjs-backend-wasm");
    wasm.setThreadsCount(1);
    if (await tf.setBackend("wasm")) {
      await tf.ready();
      initialized = "wasm";
      return initialized;
    }
  } catch {
    // wasm unavailable; fall through to cpu
  }
  await tf.setBackend("cpu");
  await tf.ready();
  initialized = "cpu";
  return initialized;
}
