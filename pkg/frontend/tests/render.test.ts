/** Render functions against recorded server fixtures: the view must
 * echo server facts verbatim and never compute its own. */

import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import {
  renderBoard,
  renderError,
  renderMatrices,
  renderPebbles,
  renderShadows,
  renderStatus,
  renderTrace,
  renderTraces,
} from "../src/render.js";
import type { Analysis, MoveReply, SessionSnapshot, ErrorBody } from "../src/types.js";

function fixture<T>(name: string): T {
  const url = new URL(`./fixtures/${name}.json`, import.meta.url);
  return JSON.parse(readFileSync(url, "utf8")) as T;
}

describe("board", () => {
  const fresh = fixture<SessionSnapshot>("session-fresh");

  it("renders every vertex exactly once", () => {
    const html = renderBoard(fresh.left, "left", []);
    for (let v = 0; v < fresh.left.n; v++) {
      expect(html).toContain(`data-vertex="${v}"`);
    }
    expect(html.match(/data-vertex=/g)).toHaveLength(fresh.left.n);
  });

  it("groups A-vertices into twin fans", () => {
    const html = renderBoard(fresh.left, "left", []);
    // H_4: 16 neighborhood patterns over A, each a fan of 4
    expect(html.match(/class="fan"/g)).toHaveLength(16);
  });

  it("marks pebbled vertices from the snapshot only", () => {
    const done = fixture<SessionSnapshot>("session-finished");
    const html = renderBoard(done.left, "left", done.pairs.map((p) => p[0]));
    for (const [v] of done.pairs) {
      expect(html).toContain(`class="vertex pebbled" data-side="left" data-vertex="${v}"`);
    }
  });
});

describe("status and pebbles", () => {
  it("active banner shows the server round counters", () => {
    const fresh = fixture<SessionSnapshot>("session-fresh");
    expect(renderStatus(fresh)).toContain("round 1 of 3");
  });

  it("winner banner echoes the server winner verbatim", () => {
    const done = fixture<SessionSnapshot>("session-finished");
    expect(renderStatus(done)).toContain(`${done.winner} wins`);
    // no client-side game logic: a tampered snapshot is rendered as-is
    const tampered = { ...done, winner: "nobody" };
    expect(renderStatus(tampered)).toContain("nobody wins");
  });

  it("pebble list follows pairs in order", () => {
    const done = fixture<SessionSnapshot>("session-finished");
    const html = renderPebbles(done);
    done.pairs.forEach((p, i) => {
      expect(html).toContain(`round ${i + 1}: left ${p[0]} &harr; right ${p[1]}`);
    });
  });
});

describe("analysis panels", () => {
  it("fresh session shows 0x0 matrices", () => {
    const a = fixture<Analysis>("analysis-fresh");
    expect(renderMatrices(a)).toContain("0&times;0");
  });

  it("fresh shadows show the null-vector multiplicities and flag", () => {
    const a = fixture<Analysis>("analysis-fresh");
    const html = renderShadows(a);
    expect(html).toContain(`multiplicity cap ${a.shadows!.cap}: NOT equal`);
    expect(html).toContain(`<code>()</code> &times;4`);
    expect(html).toContain(`<code>()</code> &times;5`);
  });

  it("post-game matrices echo every server entry", () => {
    const a = fixture<Analysis>("analysis-finished");
    const html = renderMatrices(a);
    for (const m of [a.matrices.left!, a.matrices.right!]) {
      for (const row of m.entries) {
        for (const e of row) expect(html).toContain(`<td>${e}</td>`);
      }
    }
  });

  it("solver verdict comes from the server, when present", () => {
    const a = fixture<Analysis>("analysis-k1-k2");
    expect(a.verdict).toBe("spoiler wins");
  });

  it("shadow multiplicities sum within cap * 2^dimension", () => {
    const a = fixture<Analysis>("analysis-finished");
    for (const s of [a.shadows!.left, a.shadows!.right]) {
      const total = s.vectors.reduce((acc, v) => acc + v.multiplicity, 0);
      expect(total).toBeLessThanOrEqual(a.shadows!.cap * 2 ** s.basis.length);
    }
  });
});

describe("response traces", () => {
  it("a-side trace renders the per-class records", () => {
    const reply = fixture<MoveReply>("move-a-side");
    const html = renderTrace(reply.move);
    expect(html).toContain("[a-side]");
    for (const c of reply.move.trace!.classes) {
      expect(html).toContain(`<td>${c.m0}</td><td>${c.m1}</td><td>${c.case}</td>`);
    }
  });

  it("b-side trace renders the matched column", () => {
    const reply = fixture<MoveReply>("move-b-side");
    const html = renderTrace(reply.move);
    expect(html).toContain("[b-side]");
    expect(html).toContain(`column ${reply.move.trace!.column.join("")}`);
  });

  it("full transcript renders one trace per move", () => {
    const done = fixture<SessionSnapshot>("session-finished");
    const html = renderTraces(done);
    expect(html.match(/class="trace"/g)).toHaveLength(done.transcript.length);
  });
});

describe("error rendering", () => {
  it("precondition failures surface the server reason inline", () => {
    for (const name of ["error-h3-h4", "error-h2-h5"]) {
      const err = fixture<ErrorBody>(name);
      const html = renderError(err.error, err.reason);
      expect(html).toContain(err.error);
      expect(html).toContain(err.reason);
    }
  });

  it("escapes markup in reasons", () => {
    expect(renderError("x", "<script>")).not.toContain("<script>");
  });
});
