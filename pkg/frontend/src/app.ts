import { SessionClient, Transport } from './client.js';
import { Diagnostic, ServerEvent } from './protocol.js';
import { Poster, RealtimeLoop } from './realtime.js';
import { renderCircuit, renderDiagnostics, renderGutter, renderTree } from './render.js';
import { Mode, UiState, clearRunState, initialState, parseBreakpoints } from './state.js';

export interface AppOptions {
  transport: Transport;
  post: Poster;
  source?: string;
}

export interface App {
  state: UiState;
  root: HTMLElement;
  refresh(): void;
  startDebugger(): Promise<void>;
  stepNext(): Promise<void>;
  stopSession(): Promise<void>;
  setMode(mode: Mode): Promise<void>;
  requestDetail(frame: number): Promise<void>;
  requestZoom(frame: number): Promise<void>;
  editorInput(text: string): void;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  id?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (id) node.id = id;
  if (text !== undefined) node.textContent = text;
  return node;
}

function protocolError(message: string): Diagnostic {
  return { severity: 'error', phase: 'protocol', line: 0, col: 0, message };
}

export function createApp(root: HTMLElement, opts: AppOptions): App {
  const state = initialState(opts.source ?? '');
  const client = new SessionClient(opts.transport);

  // --- static pane skeleton ---
  root.classList.add('qdbg-app');

  const editorPane = el('section', 'pane-editor');
  const gutterHost = el('div', 'gutter-host');
  const sourceBox = el('textarea', 'source');
  sourceBox.value = state.source;
  sourceBox.spellcheck = false;
  editorPane.append(gutterHost, sourceBox);

  const controlPane = el('section', 'pane-controls');
  const bpInput = el('input', 'breakpoints') as HTMLInputElement;
  bpInput.placeholder = 'breakpoint lines, e.g. 4, 9';
  const seedInput = el('input', 'seed') as HTMLInputElement;
  seedInput.value = '0';
  const startBtn = el('button', 'start', 'Start Debugger');
  const nextBtn = el('button', 'next', 'Next');
  const stopBtn = el('button', 'stop', 'Stop');
  const modeToggle = el('input', 'mode') as HTMLInputElement;
  modeToggle.type = 'checkbox';
  const modeLabel = el('label', undefined, 'real-time');
  modeLabel.prepend(modeToggle);
  const banner = el('div', 'banner');
  controlPane.append(bpInput, seedInput, startBtn, nextBtn, stopBtn, modeLabel, banner);

  const treePane = el('section', 'pane-tree');
  const diagHost = el('div', 'diagnostics');
  const treeHost = el('div', 'tree');
  treePane.append(diagHost, treeHost);

  const circuitPane = el('section', 'pane-circuit');
  const staleBadge = el('div', 'stale', 'stale');
  const circuitHost = el('div', 'circuit');
  circuitPane.append(staleBadge, circuitHost);

  root.append(editorPane, controlPane, treePane, circuitPane);

  // --- rendering ---

  function refresh(): void {
    gutterHost.replaceChildren(
      renderGutter(state.source, state.breakpoints, state.pausedLine),
    );
    if (sourceBox.value !== state.source) sourceBox.value = state.source;
    // Code edits require stopping the debugger first.
    sourceBox.disabled = state.mode === 'debugger' && state.sessionActive;

    startBtn.disabled = state.mode === 'realtime';
    nextBtn.hidden = !(state.mode === 'debugger' && state.sessionActive);
    nextBtn.disabled = state.finished;
    stopBtn.hidden = !state.sessionActive;
    modeToggle.checked = state.mode === 'realtime';
    banner.textContent = state.banner ?? '';
    banner.hidden = state.banner === null;

    const diags = renderDiagnostics(state.diagnostics);
    if (state.snapshot?.status === 'runtime_error' && state.snapshot.message) {
      const row = document.createElement('div');
      row.className = 'diag diag-error';
      row.textContent = `runtime error: ${state.snapshot.message}`;
      diags.appendChild(row);
    }
    diagHost.replaceChildren(diags);

    if (state.snapshot) {
      treeHost.replaceChildren(
        renderTree(state.snapshot, state.details, state.notices, state.selectedFrame, {
          onName: (f) => void requestDetail(f),
          onZoom: (f) => void requestZoom(f),
        }),
      );
    } else {
      treeHost.replaceChildren();
    }

    staleBadge.hidden = !state.viewStale;
    if (state.view) {
      circuitHost.replaceChildren(
        renderCircuit(state.view, { onZoom: (f) => void requestZoom(f) }),
      );
    } else {
      circuitHost.replaceChildren();
    }
  }

  // --- realtime mode ---

  const loop = new RealtimeLoop(opts.post, (ev) => {
    applyRealtimeEvent(ev);
    refresh();
  });

  function applyRealtimeEvent(ev: ServerEvent): void {
    if (ev.ev === 'diagnostics') {
      state.diagnostics = ev.items;
      // Keep the last good circuit on screen, marked stale.
      if (state.view) state.viewStale = true;
      state.banner = null;
      return;
    }
    if (ev.ev === 'finished') {
      state.snapshot = ev.snapshot;
      state.diagnostics = [];
      state.banner = null;
      state.details = new Map();
      state.notices = new Map();
      const views = ev.views ?? [];
      const keep = views.find((v) => v.frame === state.viewFrame) ?? views[0];
      if (keep) {
        state.view = keep.circuit;
        state.viewFrame = keep.frame;
        state.viewStale = false;
      } else if (state.view) {
        state.viewStale = true;
      }
      return;
    }
    if (ev.ev === 'error') {
      if (ev.code === 'budget_exceeded') {
        state.banner = `${ev.message}; switch to debugger mode to step through it`;
      } else {
        state.diagnostics = [protocolError(ev.message)];
      }
      return;
    }
  }

  // --- debugger mode ---

  async function startDebugger(): Promise<void> {
    if (state.mode !== 'debugger') return;
    clearRunState(state);
    state.breakpoints = parseBreakpoints(bpInput.value);
    const seed = Number(seedInput.value) || 0;

    const loaded = await client.request({ op: 'load', source: state.source });
    if (loaded.ev === 'diagnostics') {
      state.diagnostics = loaded.items;
      state.view = null; // syntax errors clear the circuit pane
      state.viewFrame = null;
      refresh();
      return;
    }
    if (loaded.ev !== 'loaded') {
      state.diagnostics = [protocolError(loaded.ev === 'error' ? loaded.message : loaded.ev)];
      refresh();
      return;
    }
    const token = loaded.token;
    state.token = token;
    await client.request({ op: 'breakpoints', token, lines: state.breakpoints });
    const started = await client.request({ op: 'start', token, seed });
    if (started.ev === 'error') {
      state.diagnostics = [protocolError(started.message)];
      refresh();
      return;
    }
    state.sessionActive = true;
    refresh();
  }

  async function stepNext(): Promise<void> {
    if (!state.token || !state.sessionActive || state.finished) return;
    const reply = await client.request({ op: 'next', token: state.token });
    if (reply.ev === 'paused') {
      state.snapshot = reply.snapshot;
      state.pausedLine = reply.line;
    } else if (reply.ev === 'finished') {
      state.snapshot = reply.snapshot;
      state.pausedLine = null;
      state.finished = true;
    } else if (reply.ev === 'error') {
      state.diagnostics = [protocolError(reply.message)];
      refresh();
      return;
    }
    // A selected circuit tracks the run as more events arrive.
    if (state.viewFrame !== null) await requestZoom(state.viewFrame);
    refresh();
  }

  async function stopSession(): Promise<void> {
    if (state.token) {
      await client.request({ op: 'stop', token: state.token });
      state.token = null;
    }
    state.sessionActive = false;
    state.pausedLine = null;
    refresh();
  }

  async function requestZoom(frame: number): Promise<void> {
    if (!state.token) return;
    const reply = await client.request({ op: 'zoom', token: state.token, frame });
    if (reply.ev === 'view') {
      state.view = reply.circuit;
      state.viewFrame = reply.frame;
      state.viewStale = false;
      state.selectedFrame = reply.frame;
      state.notices.delete(frame);
    } else if (reply.ev === 'error') {
      state.notices.set(frame, reply.message);
    }
    refresh();
  }

  async function requestDetail(frame: number): Promise<void> {
    if (!state.token) return;
    const reply = await client.request({ op: 'detail', token: state.token, frame });
    if (reply.ev === 'detail') {
      state.details.set(frame, { args: reply.args, output: reply.output });
      state.selectedFrame = frame;
    } else if (reply.ev === 'error') {
      state.notices.set(frame, reply.message);
    }
    refresh();
  }

  async function setMode(mode: Mode): Promise<void> {
    if (mode === state.mode) return;
    if (mode === 'realtime') {
      if (state.token) await stopSession();
      state.token = null; // realtime never holds a session
      clearRunState(state);
      state.mode = 'realtime';
      loop.start();
      loop.edit(state.source, Number(seedInput.value) || 0);
    } else {
      loop.stop();
      state.mode = 'debugger';
      state.banner = null;
    }
    refresh();
  }

  function editorInput(text: string): void {
    state.source = text;
    if (state.mode === 'realtime') {
      loop.edit(text, Number(seedInput.value) || 0);
    }
    gutterHost.replaceChildren(
      renderGutter(state.source, state.breakpoints, state.pausedLine),
    );
  }

  // --- event wiring ---
  startBtn.addEventListener('click', () => void startDebugger());
  nextBtn.addEventListener('click', () => void stepNext());
  stopBtn.addEventListener('click', () => void stopSession());
  modeToggle.addEventListener('change', () =>
    void setMode(modeToggle.checked ? 'realtime' : 'debugger'),
  );
  sourceBox.addEventListener('input', () => editorInput(sourceBox.value));
  bpInput.addEventListener('change', () => {
    state.breakpoints = parseBreakpoints(bpInput.value);
    refresh();
  });

  refresh();
  return {
    state,
    root,
    refresh,
    startDebugger,
    stepNext,
    stopSession,
    setMode,
    requestDetail,
    requestZoom,
    editorInput,
  };
}
