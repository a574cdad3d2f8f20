/** Wire types for the session server. Field-for-field mirrors of the
 * JSON bodies; the client never derives game facts from anything else. */

export interface GraphJson {
  n: number;
  edges: [number, number][];
  bipartition?: { A: number[]; B: number[] };
  roots?: number[];
}

export interface ClassRecord {
  u: string;
  m0: number;
  m1: number;
  case: string;
}

export interface ResponseTrace {
  case: string;
  response: number;
  row: [number, number][];
  column: number[];
  classes: ClassRecord[];
}

export interface MoveRecord {
  index: number;
  round: number;
  side: "left" | "right";
  vertex: number;
  response: number;
  trace?: ResponseTrace;
}

export interface SessionSnapshot {
  id: string;
  status: "active" | "finished";
  engine: string;
  human: string;
  rounds: number;
  rounds_left: number;
  pairs: [number, number][];
  transcript: MoveRecord[];
  left: GraphJson;
  right: GraphJson;
  winner?: string;
  reason?: string;
}

export interface MoveReply {
  move: MoveRecord;
  session: SessionSnapshot;
}

export interface MatrixJson {
  rows: number[];
  cols: number[];
  entries: number[][];
}

export interface ShadowJson {
  basis: number[];
  vectors: { pattern: string; multiplicity: number }[];
}

export interface Analysis {
  matrices: { left: MatrixJson | null; right: MatrixJson | null };
  shadows: {
    cap: number;
    left: ShadowJson;
    right: ShadowJson;
    equal: boolean;
  } | null;
  verdict: string | null;
  verdict_omitted?: string;
}

export interface ErrorBody {
  error: string;
  reason: string;
}
