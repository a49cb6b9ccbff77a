// Arsenal persistence: forged spells saved in browser local storage,
// with SpellSpec JSON export/import.

import type { ForgeResponse, SpellSpec } from "./types.js";

const STORAGE_KEY = "spellforge.arsenal.v1";

export interface SavedSpell {
  id: string;
  name: string;
  spec: SpellSpec;
  typeName: string;
  savedAt: number;
}

function readAll(): SavedSpell[] {
  const raw = localStorage.getItem(STORAGE_KEY);
  if (!raw) return [];
  try {
    const parsed = JSON.parse(raw);
    return Array.isArray(parsed) ? (parsed as SavedSpell[]) : [];
  } catch {
    return [];
  }
}

function writeAll(spells: SavedSpell[]): void {
  localStorage.setItem(STORAGE_KEY, JSON.stringify(spells));
}

function freshId(): string {
  return `spell-${Date.now().toString(36)}-${Math.random().toString(36).slice(2, 8)}`;
}

export function listSpells(): SavedSpell[] {
  return readAll();
}

export function saveSpell(forged: ForgeResponse, name?: string): SavedSpell {
  const saved: SavedSpell = {
    id: freshId(),
    name: name ?? forged.spec.prompt.slice(0, 48) ?? "unnamed spell",
    spec: forged.spec,
    typeName: forged.type_name,
    savedAt: Date.now(),
  };
  writeAll([...readAll(), saved]);
  return saved;
}

export function renameSpell(id: string, name: string): void {
  writeAll(readAll().map((s) => (s.id === id ? { ...s, name } : s)));
}

export function deleteSpell(id: string): void {
  writeAll(readAll().filter((s) => s.id !== id));
}

export function getSpell(id: string): SavedSpell | undefined {
  return readAll().find((s) => s.id === id);
}

export function exportSpellJson(saved: SavedSpell): string {
  return JSON.stringify(saved.spec);
}

function isTernaryMatrix(effects: unknown): effects is number[][] {
  return (
    Array.isArray(effects) &&
    effects.length === 4 &&
    effects.every(
      (row) =>
        Array.isArray(row) && row.length === 4 && row.every((v) => v === -1 || v === 0 || v === 1)
    )
  );
}

/** Parse exported SpellSpec JSON back into a saved arsenal entry. */
export function importSpellJson(json: string, name?: string): SavedSpell {
  let data: SpellSpec;
  try {
    data = JSON.parse(json);
  } catch {
    throw new Error("not valid JSON");
  }
  if (
    typeof data !== "object" ||
    data === null ||
    typeof data.type !== "number" ||
    typeof data.cost !== "number" ||
    !data.statuses ||
    !isTernaryMatrix(data.effects)
  ) {
    throw new Error("not a spell spec: expected type, statuses, effects, cost");
  }
  const saved: SavedSpell = {
    id: freshId(),
    name: name ?? (data.prompt ? data.prompt.slice(0, 48) : `imported type ${data.type}`),
    spec: data,
    typeName: `type ${data.type}`,
    savedAt: Date.now(),
  };
  writeAll([...readAll(), saved]);
  return saved;
}
