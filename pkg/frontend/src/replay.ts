// Trace playback. The authoritative state is always the frame list from
// the API; the only client-side math is linear interpolation between
// adjacent frames for smooth scrubbing.

import type { DuelResult, EntitySnapshot, Frame, SimEventData, SpellSnapshot } from "./types.js";

export interface ReplayState {
  tick: number;
  entities: EntitySnapshot[];
  spells: SpellSnapshot[];
}

function lerp(a: number, b: number, t: number): number {
  return a + (b - a) * t;
}

export class Replay {
  readonly result: DuelResult;

  constructor(result: DuelResult) {
    this.result = result;
  }

  /** Number of executed ticks; frames[i] is the state at the end of tick i. */
  get tickSpan(): number {
    return this.result.frames.length;
  }

  get lastTick(): number {
    return Math.max(0, this.tickSpan - 1);
  }

  frameAt(tick: number): Frame {
    const index = Math.min(Math.max(Math.round(tick), 0), this.lastTick);
    return this.result.frames[index];
  }

  /** State at a possibly fractional tick, positions lerped between frames. */
  stateAt(tick: number): ReplayState {
    const clamped = Math.min(Math.max(tick, 0), this.lastTick);
    const lower = Math.floor(clamped);
    const upper = Math.min(lower + 1, this.lastTick);
    const t = clamped - lower;
    const from = this.result.frames[lower];
    const to = this.result.frames[upper];
    const entities = from.entities.map((entity) => {
      const next = to.entities.find((e) => e.id === entity.id);
      if (!next || t === 0) return { ...entity };
      return {
        ...entity,
        pos: [lerp(entity.pos[0], next.pos[0], t), lerp(entity.pos[1], next.pos[1], t)] as [
          number,
          number,
        ],
        health: lerp(entity.health, next.health, t),
        mana: lerp(entity.mana, next.mana, t),
      };
    });
    // spells appear/vanish between frames; show the lower frame's set and
    // lerp only those alive in both
    const spells = from.spells.map((spell) => {
      const next = to.spells.find((s) => s.id === spell.id);
      if (!next || t === 0) return { ...spell };
      return {
        ...spell,
        pos: [lerp(spell.pos[0], next.pos[0], t), lerp(spell.pos[1], next.pos[1], t)] as [
          number,
          number,
        ],
      };
    });
    return { tick: clamped, entities, spells };
  }

  eventsAt(tick: number): SimEventData[] {
    const index = Math.floor(Math.min(Math.max(tick, 0), this.lastTick));
    return this.result.trace.filter((e) => e.tick === index);
  }

  eventsUpTo(tick: number): SimEventData[] {
    const index = Math.floor(Math.min(Math.max(tick, 0), this.lastTick));
    return this.result.trace.filter((e) => e.tick <= index);
  }

  defeatTick(): number | null {
    const defeat = this.result.trace.find((e) => e.kind === "EntityDefeated");
    return defeat ? defeat.tick : null;
  }
}
