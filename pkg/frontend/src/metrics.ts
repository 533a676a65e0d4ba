/**
 * Classification metrics derived from a confusion matrix: accuracy plus
 * per-class precision/recall/F1 with macro and support-weighted aggregates.
 * Zero denominators yield 0 (deterministic, conservative).
 */

export interface ClassScores {
  precision: number;
  recall: number;
  f1: number;
  support: number;
}

export interface MetricsReport {
  accuracy: number;
  classes: string[];
  /** counts[trueClass][predictedClass] */
  confusion: number[][];
  perClass: Record<string, ClassScores>;
  macro: { precision: number; recall: number; f1: number };
  weighted: { precision: number; recall: number; f1: number };
}

function safeDiv(num: number, den: number): number {
  return den === 0 ? 0 : num / den;
}

export function confusionMatrix(
  classes: string[],
  trueLabels: string[],
  predicted: string[],
): number[][] {
  if (trueLabels.length !== predicted.length) {
    throw new Error(`label/prediction length mismatch: ${trueLabels.length} vs ${predicted.length}`);
  }
  const index = new Map(classes.map((c, i) => [c, i]));
  const counts = classes.map(() => classes.map(() => 0));
  for (let i = 0; i < trueLabels.length; i++) {
    const t = index.get(trueLabels[i]);
    const p = index.get(predicted[i]);
    if (t === undefined) throw new Error(`unknown true label '${trueLabels[i]}'`);
    if (p === undefined) throw new Error(`unknown predicted label '${predicted[i]}'`);
    counts[t][p] += 1;
  }
  return counts;
}

export function metricsFromConfusion(classes: string[], confusion: number[][]): MetricsReport {
  const n = classes.length;
  let total = 0;
  let correct = 0;
  for (let t = 0; t < n; t++) {
    for (let p = 0; p < n; p++) total += confusion[t][p];
    correct += confusion[t][t];
  }
  const perClass: Record<string, ClassScores> = {};
  let macroP = 0;
  let macroR = 0;
  let macroF = 0;
  let weightedP = 0;
  let weightedR = 0;
  let weightedF = 0;
  for (let c = 0; c < n; c++) {
    const tp = confusion[c][c];
    let predicted = 0;
    let actual = 0;
    for (let i = 0; i < n; i++) {
      predicted += confusion[i][c];
      actual += confusion[c][i];
    }
    const precision = safeDiv(tp, predicted);
    const recall = safeDiv(tp, actual);
    const f1 = safeDiv(2 * precision * recall, precision + recall);
    perClass[classes[c]] = { precision, recall, f1, support: actual };
    macroP += precision / n;
    macroR += recall / n;
    macroF += f1 / n;
    weightedP += precision * safeDiv(actual, total);
    weightedR += recall * safeDiv(actual, total);
    weightedF += f1 * safeDiv(actual, total);
  }
  return {
    accuracy: safeDiv(correct, total),
    classes,
    confusion,
    perClass,
    macro: { precision: macroP, recall: macroR, f1: macroF },
    weighted: { precision: weightedP, recall: weightedR, f1: weightedF },
  };
}

export function computeMetrics(
  classes: string[],
  trueLabels: string[],
  predicted: string[],
): MetricsReport {
  return metricsFromConfusion(classes, confusionMatrix(classes, trueLabels, predicted));
}
