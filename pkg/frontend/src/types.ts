// Mirrors docs/api.md. The client renders what the API returns and never
// re-derives game values.

export interface SpellStatuses {
  power: number;
  speed: number;
  area: number;
  color: [number, number, number];
}

export interface SpellSpec {
  type: number;
  statuses: SpellStatuses;
  effects: number[][];
  cost: number;
  prompt: string;
  model_id: string;
}

export interface BoundEffect {
  stat: string;
  sign: number;
  magnitude_per_second: number;
  duration: number;
}

export interface Binding {
  trigger: string;
  effects: BoundEffect[];
}

export interface CostBreakdown {
  base: number;
  statuses: number;
  effects: number;
}

export interface ForgeResponse {
  spec: SpellSpec;
  cost_breakdown: CostBreakdown;
  bindings: Binding[];
  timing: { predict_ms: number; total_ms: number };
  model_id: string;
  type_name: string;
}

export interface SimEventData {
  tick: number;
  kind: string;
  [field: string]: unknown;
}

export interface EntitySnapshot {
  id: number;
  pos: [number, number];
  health: number;
  speed: number;
  defense: number;
  mana: number;
  alive: boolean;
}

export interface SpellSnapshot {
  id: number;
  type: number;
  pos: [number, number];
  phase: string;
  area: number;
}

export interface Frame {
  tick: number;
  entities: EntitySnapshot[];
  spells: SpellSnapshot[];
}

export interface EntityFinalStats {
  health: number;
  speed: number;
  defense: number;
  mana: number;
}

export interface DuelResult {
  winner: number | null;
  ticks: number;
  final_stats: Record<string, EntityFinalStats>;
  trace: SimEventData[];
  frames: Frame[];
}

export interface SimulateRequest {
  spell_a: SpellSpec;
  spell_b: SpellSpec;
  seed: number;
  max_ticks?: number;
  policy?: "chase" | { a: unknown[]; b: unknown[] };
}
