/** Pure snapshot-to-HTML renderers. Every game fact shown (turn,
 * legality, winner, matrices, shadows, traces) is copied verbatim from
 * the last server response; nothing is computed client-side. */

import type {
  Analysis,
  GraphJson,
  MatrixJson,
  MoveRecord,
  ResponseTrace,
  SessionSnapshot,
  ShadowJson,
} from "./types.js";

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function neighborKey(g: GraphJson, v: number): string {
  const ns = g.edges
    .filter(([a, b]) => a === v || b === v)
    .map(([a, b]) => (a === v ? b : a))
    .sort((x, y) => x - y);
  return ns.join(",");
}

/** Bipartite board: A-vertices grouped by neighborhood pattern (so twin
 * fans sit together and universality is visible), B-vertices in one
 * column. Non-bipartite graphs fall back to a flat vertex list. */
export function renderBoard(
  g: GraphJson,
  side: "left" | "right",
  pebbled: number[],
): string {
  const peb = new Set(pebbled);
  const cls = (v: number) =>
    `vertex${peb.has(v) ? " pebbled" : ""}`;
  const button = (v: number) =>
    `<button class="${cls(v)}" data-side="${side}" data-vertex="${v}">${v}</button>`;
  if (!g.bipartition) {
    const all = Array.from({ length: g.n }, (_, v) => button(v)).join("");
    return `<div class="board" data-side="${side}">${all}</div>`;
  }
  const groups = new Map<string, number[]>();
  for (const v of g.bipartition.A) {
    const key = neighborKey(g, v);
    const bucket = groups.get(key) ?? [];
    bucket.push(v);
    groups.set(key, bucket);
  }
  const aCol = [...groups.entries()]
    .sort((x, y) => x[0].localeCompare(y[0]))
    .map(([, vs]) => `<div class="fan">${vs.map(button).join("")}</div>`)
    .join("");
  const bCol = g.bipartition.B.map(button).join("");
  return (
    `<div class="board bipartite" data-side="${side}">` +
    `<div class="col-a">${aCol}</div><div class="col-b">${bCol}</div></div>`
  );
}

export function renderPebbles(s: SessionSnapshot): string {
  const rows = s.pairs
    .map(
      (p, i) =>
        `<li>round ${i + 1}: left ${p[0]} &harr; right ${p[1]}</li>`,
    )
    .join("");
  return `<ol class="pebbles">${rows}</ol>`;
}

export function renderStatus(s: SessionSnapshot): string {
  if (s.status === "finished") {
    const reason = s.reason ? ` (${esc(s.reason)})` : "";
    return `<div class="banner winner">${esc(s.winner ?? "")} wins${reason}</div>`;
  }
  return `<div class="banner active">round ${s.rounds - s.rounds_left + 1} of ${s.rounds} &mdash; your move</div>`;
}

function renderMatrix(m: MatrixJson | null): string {
  if (m === null) return `<p class="empty">no bipartition</p>`;
  if (m.rows.length === 0 || m.cols.length === 0) {
    return `<p class="empty">${m.rows.length}&times;${m.cols.length}</p>`;
  }
  const head =
    `<tr><th></th>${m.cols.map((c) => `<th>${c}</th>`).join("")}</tr>`;
  const body = m.rows
    .map(
      (r, i) =>
        `<tr><th>${r}</th>${m.entries[i]!
          .map((e) => `<td>${e}</td>`)
          .join("")}</tr>`,
    )
    .join("");
  return `<table class="matrix">${head}${body}</table>`;
}

export function renderMatrices(a: Analysis): string {
  return (
    `<div class="matrices"><div>${renderMatrix(a.matrices.left)}</div>` +
    `<div>${renderMatrix(a.matrices.right)}</div></div>`
  );
}

function renderShadow(s: ShadowJson): string {
  const items = s.vectors
    .map(
      (v) =>
        `<li><code>${v.pattern === "" ? "()" : esc(v.pattern)}</code> &times;${v.multiplicity}</li>`,
    )
    .join("");
  return `<ul class="shadow" data-basis="${s.basis.join(",")}">${items}</ul>`;
}

export function renderShadows(a: Analysis): string {
  if (a.shadows === null) return `<p class="empty">no bipartition</p>`;
  const eq = a.shadows.equal ? "equal" : "NOT equal";
  return (
    `<div class="shadows"><p>multiplicity cap ${a.shadows.cap}: ${eq}</p>` +
    renderShadow(a.shadows.left) +
    renderShadow(a.shadows.right) +
    `</div>`
  );
}

export function renderTrace(move: MoveRecord): string {
  const t: ResponseTrace | undefined = move.trace;
  if (!t) {
    return `<p class="trace">round ${move.round}: ${move.side} ${move.vertex} &rarr; ${move.response}</p>`;
  }
  let detail = "";
  if (t.case === "a-side" && t.classes.length > 0) {
    const rows = t.classes
      .map(
        (c) =>
          `<tr><td><code>${esc(c.u)}</code></td><td>${c.m0}</td><td>${c.m1}</td><td>${esc(c.case)}</td></tr>`,
      )
      .join("");
    detail =
      `<table class="classes"><tr><th>u</th><th>m0</th><th>m1</th><th>case</th></tr>${rows}</table>` +
      `<p>row: ${t.row.map(([v, b]) => `${v}:${b}`).join(" ")}</p>`;
  } else if (t.case === "b-side") {
    detail = `<p>column ${t.column.join("")}</p>`;
  }
  return (
    `<div class="trace"><p>round ${move.round}: ${move.side} ${move.vertex} ` +
    `&rarr; ${t.response} [${esc(t.case)}]</p>${detail}</div>`
  );
}

export function renderTraces(s: SessionSnapshot): string {
  return `<div class="traces">${s.transcript.map(renderTrace).join("")}</div>`;
}

export function renderError(code: string, reason: string): string {
  return `<div class="banner error">${esc(code)}: ${esc(reason)}</div>`;
}
