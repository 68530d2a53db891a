import { CircuitViewJson, Diagnostic, MeasValue, SnapshotJson } from './protocol.js';

export type Mode = 'debugger' | 'realtime';

export interface FrameDetail {
  args: [string, number][];
  output: MeasValue[] | null;
}

/**
 * Everything the panes render from. Invariants:
 *  - realtime mode never holds a session token;
 *  - source edits are locked while a debugger session is active.
 */
export interface UiState {
  mode: Mode;
  source: string;
  breakpoints: number[];
  token: string | null;
  sessionActive: boolean;
  finished: boolean;
  snapshot: SnapshotJson | null;
  pausedLine: number | null;
  selectedFrame: number | null;
  view: CircuitViewJson | null;
  viewFrame: number | null;
  viewStale: boolean; // realtime: last good circuit shown for now-broken source
  diagnostics: Diagnostic[];
  details: Map<number, FrameDetail>; // fetched on demand, per frame
  notices: Map<number, string>; // inline per-frame errors (e.g. transform not run)
  banner: string | null; // realtime "too large" notice
}

export function initialState(source = ''): UiState {
  return {
    mode: 'debugger',
    source,
    breakpoints: [],
    token: null,
    sessionActive: false,
    finished: false,
    snapshot: null,
    pausedLine: null,
    selectedFrame: null,
    view: null,
    viewFrame: null,
    viewStale: false,
    diagnostics: [],
    details: new Map(),
    notices: new Map(),
    banner: null,
  };
}

/** Forget everything produced by a run, keeping source and breakpoints. */
export function clearRunState(s: UiState): void {
  s.sessionActive = false;
  s.finished = false;
  s.snapshot = null;
  s.pausedLine = null;
  s.selectedFrame = null;
  s.view = null;
  s.viewFrame = null;
  s.viewStale = false;
  s.diagnostics = [];
  s.details = new Map();
  s.notices = new Map();
  s.banner = null;
}

export function parseBreakpoints(text: string): number[] {
  const out: number[] = [];
  for (const part of text.split(',')) {
    const n = Number(part.trim());
    if (Number.isInteger(n) && n >= 1 && !out.includes(n)) out.push(n);
  }
  return out.sort((a, b) => a - b);
}
