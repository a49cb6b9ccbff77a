// Spell card and matrix heatmap view models plus their DOM rendering.
// Axis labels are presentation only; all values come straight from the API.

import type { ForgeResponse } from "./types.js";

export const TRIGGER_LABELS = ["T0 enemy hit", "T1 any player", "T2 ally hit", "T3 area"];
export const STAT_LABELS = ["S0 Health", "S1 Speed", "S2 Defense", "S3 Mana"];

export interface MatrixCellView {
  row: number;
  col: number;
  value: number;
  cls: "neg" | "zero" | "pos";
  title: string;
}

export function matrixView(effects: number[][]): MatrixCellView[][] {
  return effects.map((cells, row) =>
    cells.map((value, col) => ({
      row,
      col,
      value,
      cls: value < 0 ? "neg" : value > 0 ? "pos" : "zero",
      title: `${TRIGGER_LABELS[row]} / ${STAT_LABELS[col]}: ${value}`,
    }))
  );
}

export interface CardView {
  typeName: string;
  cost: number;
  breakdown: { base: number; statuses: number; effects: number };
  statuses: { power: number; speed: number; area: number };
  colorCss: string;
  prompt: string;
  matrix: MatrixCellView[][];
  forgedMs: number;
}

export function cardView(forged: ForgeResponse): CardView {
  const [r, g, b] = forged.spec.statuses.color;
  return {
    typeName: forged.type_name,
    cost: forged.spec.cost,
    breakdown: forged.cost_breakdown,
    statuses: {
      power: forged.spec.statuses.power,
      speed: forged.spec.statuses.speed,
      area: forged.spec.statuses.area,
    },
    colorCss: `rgb(${r}, ${g}, ${b})`,
    prompt: forged.spec.prompt,
    matrix: matrixView(forged.spec.effects),
    forgedMs: forged.timing.total_ms,
  };
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  cls?: string,
  text?: string
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (cls) node.className = cls;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function renderMatrix(view: MatrixCellView[][]): HTMLElement {
  const table = el("table", "matrix");
  const head = el("tr");
  head.appendChild(el("th"));
  for (const label of STAT_LABELS) head.appendChild(el("th", "", label));
  table.appendChild(head);
  view.forEach((cells, row) => {
    const tr = el("tr");
    tr.appendChild(el("th", "", TRIGGER_LABELS[row]));
    for (const cell of cells) {
      const td = el("td", `cell ${cell.cls}`, cell.value === 0 ? "·" : `${cell.value > 0 ? "+" : ""}${cell.value}`);
      td.title = cell.title;
      td.dataset.row = String(cell.row);
      td.dataset.col = String(cell.col);
      tr.appendChild(td);
    }
    table.appendChild(tr);
  });
  return table;
}

export function renderSpellCard(view: CardView): HTMLElement {
  const card = el("div", "spell-card");

  const header = el("div", "card-header");
  const swatch = el("span", "color-swatch");
  swatch.style.backgroundColor = view.colorCss;
  header.appendChild(swatch);
  header.appendChild(el("span", "type-name", view.typeName));
  header.appendChild(el("span", "cost", `${view.cost.toFixed(2)} mana`));
  card.appendChild(header);

  const stats = el("div", "card-statuses");
  stats.appendChild(el("span", "", `power ${view.statuses.power.toFixed(1)}`));
  stats.appendChild(el("span", "", `speed ${view.statuses.speed.toFixed(1)}`));
  stats.appendChild(el("span", "", `area ${view.statuses.area.toFixed(1)}`));
  card.appendChild(stats);

  const breakdown = el("div", "cost-breakdown");
  breakdown.appendChild(el("span", "", `base ${view.breakdown.base.toFixed(2)}`));
  breakdown.appendChild(el("span", "", `statuses +${view.breakdown.statuses.toFixed(2)}`));
  const effectPart = view.breakdown.effects;
  breakdown.appendChild(
    el("span", "", `effects ${effectPart >= 0 ? "+" : ""}${effectPart.toFixed(2)}`)
  );
  card.appendChild(breakdown);

  card.appendChild(renderMatrix(view.matrix));
  card.appendChild(el("div", "forge-time", `forged in ${view.forgedMs.toFixed(1)} ms`));
  return card;
}
