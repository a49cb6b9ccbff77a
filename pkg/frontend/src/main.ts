// App wiring: forge panel, arsenal, and duel replay. All game logic lives
// server-side; this file only moves data between the API, local storage,
// and the DOM.

import { ApiError, forgeSpell, health, simulate } from "./api.js";
import {
  deleteSpell,
  exportSpellJson,
  getSpell,
  importSpellJson,
  listSpells,
  renameSpell,
  saveSpell,
} from "./arsenal.js";
import { cardView, renderSpellCard } from "./card.js";
import { Replay } from "./replay.js";
import { drawState } from "./render.js";
import type { ForgeResponse } from "./types.js";

function byId<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

// ---------------------------------------------------------------------------
// forge panel

let lastForged: ForgeResponse | null = null;

function promptFromUrl(): string {
  const match = /[#&]p=([^&]*)/.exec(location.hash);
  return match ? decodeURIComponent(match[1]) : "";
}

function promptToUrl(prompt: string): void {
  history.replaceState(null, "", `#p=${encodeURIComponent(prompt)}`);
}

async function onForge(): Promise<void> {
  const input = byId<HTMLInputElement>("prompt-input");
  const button = byId<HTMLButtonElement>("forge-button");
  const errorBox = byId<HTMLElement>("forge-error");
  const cardBox = byId<HTMLElement>("card-container");
  const prompt = input.value;
  errorBox.textContent = "";
  button.disabled = true;
  try {
    const forged = await forgeSpell(prompt);
    lastForged = forged;
    promptToUrl(prompt);
    cardBox.replaceChildren(renderSpellCard(cardView(forged)));
    byId<HTMLButtonElement>("save-button").disabled = false;
  } catch (error) {
    // keep the prompt for editing; surface the API message inline
    errorBox.textContent =
      error instanceof ApiError ? `${error.code}: ${error.message}` : String(error);
  } finally {
    button.disabled = false;
  }
}

function onSave(): void {
  if (!lastForged) return;
  saveSpell(lastForged);
  refreshArsenal();
}

// ---------------------------------------------------------------------------
// arsenal panel

function refreshArsenal(): void {
  const list = byId<HTMLElement>("arsenal-list");
  const spells = listSpells();
  list.replaceChildren();
  for (const saved of spells) {
    const row = document.createElement("li");
    const label = document.createElement("span");
    label.className = "spell-name";
    label.textContent = `${saved.name} (${saved.typeName}, ${saved.spec.cost.toFixed(1)} mana)`;
    row.appendChild(label);

    const rename = document.createElement("button");
    rename.textContent = "rename";
    rename.addEventListener("click", () => {
      const name = window.prompt("New name", saved.name);
      if (name) {
        renameSpell(saved.id, name);
        refreshArsenal();
      }
    });
    row.appendChild(rename);

    const exportButton = document.createElement("button");
    exportButton.textContent = "export";
    exportButton.addEventListener("click", () => {
      byId<HTMLTextAreaElement>("io-text").value = exportSpellJson(saved);
    });
    row.appendChild(exportButton);

    const remove = document.createElement("button");
    remove.textContent = "delete";
    remove.addEventListener("click", () => {
      deleteSpell(saved.id);
      refreshArsenal();
    });
    row.appendChild(remove);
    list.appendChild(row);
  }
  refreshDuelSelectors(spells.map((s) => ({ id: s.id, label: s.name })));
}

function onImport(): void {
  const errorBox = byId<HTMLElement>("io-error");
  errorBox.textContent = "";
  try {
    importSpellJson(byId<HTMLTextAreaElement>("io-text").value);
    refreshArsenal();
  } catch (error) {
    errorBox.textContent = String(error instanceof Error ? error.message : error);
  }
}

// ---------------------------------------------------------------------------
// duel panel

let replay: Replay | null = null;
let playing = false;
let playHandle: number | null = null;
let scrubPosition = 0;

function refreshDuelSelectors(options: { id: string; label: string }[]): void {
  for (const selectId of ["duel-a", "duel-b"]) {
    const select = byId<HTMLSelectElement>(selectId);
    const current = select.value;
    select.replaceChildren();
    for (const option of options) {
      const node = document.createElement("option");
      node.value = option.id;
      node.textContent = option.label;
      select.appendChild(node);
    }
    if (options.some((o) => o.id === current)) select.value = current;
  }
}

function drawReplayAt(tick: number): void {
  if (!replay) return;
  scrubPosition = Math.min(Math.max(tick, 0), replay.lastTick);
  const canvas = byId<HTMLCanvasElement>("arena-canvas");
  const ctx = canvas.getContext("2d");
  if (ctx) drawState(ctx, replay.stateAt(scrubPosition), { width: canvas.width, height: canvas.height });
  byId<HTMLInputElement>("scrubber").value = String(Math.floor(scrubPosition));
  byId<HTMLElement>("tick-label").textContent =
    `tick ${Math.floor(scrubPosition)} / ${replay.lastTick}`;
  const events = replay.eventsAt(scrubPosition);
  byId<HTMLElement>("tick-events").textContent = events
    .map((e) => `${e.kind}${e.kind === "Cast" ? ` (spell ${e.spell})` : ""}`)
    .join(", ");
}

function stopPlayback(): void {
  playing = false;
  if (playHandle !== null) {
    cancelAnimationFrame(playHandle);
    playHandle = null;
  }
  byId<HTMLButtonElement>("play-button").textContent = "play";
}

function startPlayback(): void {
  if (!replay) return;
  playing = true;
  byId<HTMLButtonElement>("play-button").textContent = "pause";
  const step = () => {
    if (!playing || !replay) return;
    if (scrubPosition >= replay.lastTick) {
      stopPlayback();
      return;
    }
    drawReplayAt(scrubPosition + 0.5); // half-tick steps, lerped
    playHandle = requestAnimationFrame(step);
  };
  playHandle = requestAnimationFrame(step);
}

function renderTimeline(): void {
  if (!replay) return;
  const list = byId<HTMLElement>("timeline");
  list.replaceChildren();
  for (const event of replay.result.trace) {
    if (event.kind !== "Cast" && event.kind !== "TriggerFired" && event.kind !== "EntityDefeated")
      continue;
    const item = document.createElement("li");
    item.textContent = `t${event.tick} ${event.kind}`;
    item.addEventListener("click", () => {
      stopPlayback();
      drawReplayAt(event.tick);
    });
    list.appendChild(item);
  }
}

async function onDuel(): Promise<void> {
  const button = byId<HTMLButtonElement>("duel-button");
  const errorBox = byId<HTMLElement>("duel-error");
  const summary = byId<HTMLElement>("duel-summary");
  errorBox.textContent = "";
  const first = getSpell(byId<HTMLSelectElement>("duel-a").value);
  const second = getSpell(byId<HTMLSelectElement>("duel-b").value);
  if (!first || !second) {
    errorBox.textContent = "pick two arsenal spells first";
    return;
  }
  const seed = Number(byId<HTMLInputElement>("seed-input").value) || 0;
  button.disabled = true;
  try {
    const result = await simulate({
      spell_a: first.spec,
      spell_b: second.spec,
      seed,
      max_ticks: 2400,
    });
    stopPlayback();
    replay = new Replay(result);
    const scrubber = byId<HTMLInputElement>("scrubber");
    scrubber.max = String(replay.lastTick);
    scrubber.disabled = false;
    byId<HTMLButtonElement>("play-button").disabled = false;
    const outcome =
      result.winner === null ? "draw" : result.winner === 0 ? `${first.name} wins` : `${second.name} wins`;
    summary.textContent = `${outcome} after ${result.ticks} ticks`;
    renderTimeline();
    drawReplayAt(0);
  } catch (error) {
    errorBox.textContent =
      error instanceof ApiError ? `${error.code}: ${error.message}` : String(error);
  } finally {
    button.disabled = false;
  }
}

// ---------------------------------------------------------------------------
// boot

export function boot(): void {
  byId<HTMLButtonElement>("forge-button").addEventListener("click", () => void onForge());
  byId<HTMLInputElement>("prompt-input").addEventListener("keydown", (event) => {
    if (event.key === "Enter") void onForge();
  });
  byId<HTMLButtonElement>("save-button").addEventListener("click", onSave);
  byId<HTMLButtonElement>("import-button").addEventListener("click", onImport);
  byId<HTMLButtonElement>("duel-button").addEventListener("click", () => void onDuel());
  byId<HTMLButtonElement>("play-button").addEventListener("click", () => {
    if (playing) stopPlayback();
    else startPlayback();
  });
  byId<HTMLInputElement>("scrubber").addEventListener("input", (event) => {
    stopPlayback();
    drawReplayAt(Number((event.target as HTMLInputElement).value));
  });

  const initial = promptFromUrl();
  if (initial) byId<HTMLInputElement>("prompt-input").value = initial;
  refreshArsenal();
  health()
    .then((h) => {
      byId<HTMLElement>("model-label").textContent = `model: ${h.model_id}`;
    })
    .catch(() => {
      byId<HTMLElement>("model-label").textContent = "service unreachable";
    });
}

if (typeof document !== "undefined" && document.getElementById("forge-button")) {
  boot();
}
