/** Browser wiring: one session per tab, strict request/response (no
 * optimistic updates), all state replaced by the latest server
 * snapshot. */

import { ApiClient, ApiError } from "./api.js";
import {
  renderBoard,
  renderError,
  renderMatrices,
  renderPebbles,
  renderShadows,
  renderStatus,
  renderTraces,
} from "./render.js";
import type { SessionSnapshot } from "./types.js";

const baseUrl =
  new URLSearchParams(location.search).get("server") ??
  "http://127.0.0.1:8765";
const api = new ApiClient(baseUrl);

let session: SessionSnapshot | null = null;
let busy = false;

function el(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node;
}

async function refreshAnalysis(): Promise<void> {
  if (!session) return;
  const a = await api.analysis(session.id);
  el("matrices").innerHTML = renderMatrices(a);
  el("shadows").innerHTML = renderShadows(a);
  el("verdict").textContent = a.verdict ?? `solver verdict omitted (${a.verdict_omitted ?? ""})`;
}

function redraw(): void {
  if (!session) return;
  el("status").innerHTML = renderStatus(session);
  el("left-board").innerHTML = renderBoard(
    session.left,
    "left",
    session.pairs.map((p) => p[0]),
  );
  el("right-board").innerHTML = renderBoard(
    session.right,
    "right",
    session.pairs.map((p) => p[1]),
  );
  el("pebbles").innerHTML = renderPebbles(session);
  el("traces").innerHTML = renderTraces(session);
}

async function clickVertex(side: "left" | "right", vertex: number) {
  if (!session || busy || session.status !== "active") return;
  busy = true;
  try {
    const reply = await api.move(side === "left" ? session.id : session.id, side, vertex);
    session = reply.session;
    redraw();
    await refreshAnalysis();
  } catch (err) {
    if (err instanceof ApiError) {
      el("status").innerHTML = renderError(err.code, err.reason);
    } else {
      throw err;
    }
  } finally {
    busy = false;
  }
}

async function newGame(ev: Event) {
  ev.preventDefault();
  const form = ev.target as HTMLFormElement;
  const data = new FormData(form);
  try {
    session = await api.createSession({
      left: String(data.get("left")),
      right: String(data.get("right")),
      rounds: Number(data.get("rounds")),
      engine: data.get("engine") as "minimax" | "lm-key",
      human: "spoiler",
    });
    el("form-error").innerHTML = "";
    redraw();
    await refreshAnalysis();
  } catch (err) {
    if (err instanceof ApiError) {
      el("form-error").innerHTML = renderError(err.code, err.reason);
    } else {
      throw err;
    }
  }
}

export function init(): void {
  el("new-game").addEventListener("submit", newGame);
  for (const id of ["left-board", "right-board"]) {
    el(id).addEventListener("click", (ev) => {
      const t = ev.target as HTMLElement;
      if (t.dataset.vertex !== undefined && t.dataset.side !== undefined) {
        void clickVertex(
          t.dataset.side as "left" | "right",
          Number(t.dataset.vertex),
        );
      }
    });
  }
}

if (typeof document !== "undefined") {
  document.addEventListener("DOMContentLoaded", init);
}
