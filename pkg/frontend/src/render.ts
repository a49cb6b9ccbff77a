// Canvas drawing for the duel replay: a top-down arena with entities as
// team-colored circles (health arcs) and live spells as area rings.

import type { ReplayState } from "./replay.js";

const ARENA_HALF_EXTENT = 20;
const TEAM_COLORS = ["#4f8ef7", "#f75f4f"];
const SPELL_COLORS = ["#ffd166", "#ef6351", "#9b5de5", "#52b788", "#00b4d8"];

export interface Viewport {
  width: number;
  height: number;
}

function toScreen(pos: [number, number], view: Viewport): [number, number] {
  const scale = Math.min(view.width, view.height) / (2 * ARENA_HALF_EXTENT);
  return [view.width / 2 + pos[0] * scale, view.height / 2 + pos[1] * scale];
}

function worldScale(view: Viewport): number {
  return Math.min(view.width, view.height) / (2 * ARENA_HALF_EXTENT);
}

export function drawState(ctx: CanvasRenderingContext2D, state: ReplayState, view: Viewport): void {
  ctx.clearRect(0, 0, view.width, view.height);
  const scale = worldScale(view);

  // arena bounds
  ctx.strokeStyle = "#39405a";
  ctx.lineWidth = 1;
  ctx.strokeRect(
    view.width / 2 - ARENA_HALF_EXTENT * scale,
    view.height / 2 - ARENA_HALF_EXTENT * scale,
    2 * ARENA_HALF_EXTENT * scale,
    2 * ARENA_HALF_EXTENT * scale
  );

  for (const spell of state.spells) {
    const [x, y] = toScreen(spell.pos, view);
    const color = SPELL_COLORS[spell.type % SPELL_COLORS.length];
    ctx.beginPath();
    ctx.arc(x, y, Math.max(2, spell.area * scale), 0, Math.PI * 2);
    ctx.strokeStyle = color;
    ctx.setLineDash(spell.phase === "armed" ? [4, 3] : []);
    ctx.lineWidth = 1.5;
    ctx.stroke();
    ctx.setLineDash([]);
    ctx.beginPath();
    ctx.arc(x, y, 3, 0, Math.PI * 2);
    ctx.fillStyle = color;
    ctx.fill();
  }

  for (const entity of state.entities) {
    const [x, y] = toScreen(entity.pos, view);
    const radius = Math.max(4, 0.5 * scale);
    ctx.beginPath();
    ctx.arc(x, y, radius, 0, Math.PI * 2);
    ctx.fillStyle = entity.alive ? TEAM_COLORS[entity.id % TEAM_COLORS.length] : "#555a6e";
    ctx.fill();
    // health arc around the body
    ctx.beginPath();
    ctx.arc(x, y, radius + 3, -Math.PI / 2, -Math.PI / 2 + (entity.health / 100) * Math.PI * 2);
    ctx.strokeStyle = "#6fe3a0";
    ctx.lineWidth = 2;
    ctx.stroke();
  }
}
