/**
 * Dependency-free SVG bar charts for the comparison tables: one chart of
 * accuracy per construction method, one grouped grid of per-class
 * precision/recall/F1.
 */
import { ComparisonRow } from "./compare.js";

const PALETTE = ["#4c78a8", "#f58518", "#54a24b", "#e45756", "#72b7b2", "#b279a2"];

function bar(x: number, y: number, w: number, h: number, fill: string, title: string): string {
  return (
    `<rect x="${x.toFixed(1)}" y="${y.toFixed(1)}" width="${w.toFixed(1)}" ` +
    `height="${h.toFixed(1)}" fill="${fill}"><title>${title}</title></rect>`
  );
}

function text(x: number, y: number, value: string, size = 11, anchor = "middle"): string {
  return (
    `<text x="${x.toFixed(1)}" y="${y.toFixed(1)}" font-size="${size}" ` +
    `font-family="sans-serif" text-anchor="${anchor}">${value}</text>`
  );
}

export function accuracyChart(rows: ComparisonRow[]): string {
  const width = 80 + rows.length * 90;
  const height = 280;
  const plotH = 200;
  const parts = [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}">`,
    text(width / 2, 20, "Classification accuracy by construction method", 13),
  ];
  rows.forEach((row, i) => {
    const h = row.metrics.accuracy * plotH;
    const x = 60 + i * 90;
    parts.push(bar(x, 40 + plotH - h, 60, h, PALETTE[i % PALETTE.length],
      `${row.method}: ${row.metrics.accuracy.toFixed(4)}`));
    parts.push(text(x + 30, 36 + plotH - h, row.metrics.accuracy.toFixed(3)));
    parts.push(text(x + 30, 40 + plotH + 16, row.method));
  });
  parts.push(`<line x1="55" y1="${40 + plotH}" x2="${width - 15}" y2="${40 + plotH}" stroke="#333"/>`);
  parts.push("</svg>");
  return parts.join("\n");
}

export function perClassChart(rows: ComparisonRow[]): string {
  const metrics: Array<"precision" | "recall" | "f1"> = ["precision", "recall", "f1"];
  const classes = rows[0]?.metrics.classes ?? [];
  const groupW = 18 * rows.length + 24;
  const panelW = Math.max(200, classes.length * groupW + 60);
  const panelH = 160;
  const width = panelW;
  const height = metrics.length * (panelH + 40) + 30;
  const parts = [`<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}">`];
  metrics.forEach((metric, mi) => {
    const top = 30 + mi * (panelH + 40);
    parts.push(text(width / 2, top - 8, metric, 13));
    classes.forEach((cls, ci) => {
      const baseX = 40 + ci * groupW;
      rows.forEach((row, ri) => {
        const value = row.metrics.perClass[cls][metric];
        const h = value * (panelH - 20);
        parts.push(bar(baseX + ri * 18, top + panelH - 20 - h, 14, h,
          PALETTE[ri % PALETTE.length], `${row.method} ${cls} ${metric}=${value.toFixed(4)}`));
      });
      parts.push(text(baseX + (rows.length * 18) / 2, top + panelH - 2, cls));
    });
    parts.push(`<line x1="35" y1="${top + panelH - 20}" x2="${width - 15}" y2="${top + panelH - 20}" stroke="#333"/>`);
  });
  rows.forEach((row, ri) => {
    parts.push(bar(40 + ri * 110, height - 16, 10, 10, PALETTE[ri % PALETTE.length], row.method));
    parts.push(text(56 + ri * 110, height - 7, row.method, 11, "start"));
  });
  parts.push("</svg>");
  return parts.join("\n");
}
