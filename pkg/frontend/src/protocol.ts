/**
 * Wire protocol types.
 *
 * These mirror the session server's JSON exactly: one op object per client
 * message, one event object per reply. Nothing here is computed client-side;
 * the shapes exist so the rest of the UI can stay typed.
 */

export type ClientOp =
  | { op: 'load'; source: string }
  | { op: 'breakpoints'; token: string; lines: number[] }
  | { op: 'start'; token: string; seed?: number }
  | { op: 'next'; token: string }
  | { op: 'zoom'; token: string; frame: number }
  | { op: 'detail'; token: string; frame: number }
  | { op: 'stop'; token: string }
  | { op: 'realtime'; source: string; seed?: number };

export interface Diagnostic {
  severity: string;
  phase: string;
  line: number;
  col: number;
  message: string;
}

export type MeasValue =
  | { kind: 'expval'; value: number }
  | { kind: 'probs'; values: number[] }
  | { kind: 'state'; values: [number, number][] };

export type FrameKind = 'qnode' | 'subroutine' | 'transform_application';

export interface FrameJson {
  id: number;
  kind: FrameKind;
  name: string;
  parent: number | null;
  args: [string, number][];
  output?: MeasValue[];
}

export type PayloadJson =
  | { type: 'gate'; name: string; wires: number[]; params: number[] }
  | { type: 'midmeasure'; wire: number; bit: number }
  | { type: 'returned'; values: MeasValue[] };

export interface TraceEventJson {
  seq: number;
  frame: number;
  line: number;
  payload: PayloadJson;
}

export interface QnodeOutputJson {
  frame: number;
  values: MeasValue[];
}

export interface SnapshotJson {
  status: 'paused' | 'finished' | 'runtime_error';
  line?: number;
  message?: string;
  frames: FrameJson[];
  events: TraceEventJson[];
  outputs: QnodeOutputJson[];
  unbound_breakpoints: number[];
}

// Circuit view cells carry a "type" discriminator. Boxes stand in for a
// whole subroutine call and are zoomable via their frame id.
export type CellJson =
  | { type: 'gate'; name: string; wires: number[]; params: number[]; line: number }
  | { type: 'box'; frame: number; label: string; wire_min: number; wire_max: number; degenerate?: boolean }
  | { type: 'midmeasure'; wire: number }
  | { type: 'terminal'; kind: 'expval' | 'probs' | 'state'; wires: number[] };

export interface CircuitViewJson {
  wires: number;
  columns: CellJson[][];
}

export type ServerEvent =
  | { ev: 'loaded'; token: string; unbound_breakpoints: number[] }
  | { ev: 'diagnostics'; items: Diagnostic[] }
  | { ev: 'paused'; line: number; snapshot: SnapshotJson }
  | { ev: 'finished'; snapshot: SnapshotJson; views?: { frame: number; circuit: CircuitViewJson }[] }
  | { ev: 'view'; frame: number; circuit: CircuitViewJson }
  | { ev: 'detail'; frame: number; args: [string, number][]; output: MeasValue[] | null }
  | { ev: 'stopped'; token: string }
  | { ev: 'error'; code: string; message: string };

export function parseEvent(text: string): ServerEvent {
  return JSON.parse(text) as ServerEvent;
}
