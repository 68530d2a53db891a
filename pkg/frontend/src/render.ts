import {
  CellJson,
  CircuitViewJson,
  Diagnostic,
  FrameJson,
  MeasValue,
  SnapshotJson,
} from './protocol.js';
import { FrameDetail } from './state.js';

/**
 * Pure DOM builders. Every function here maps server JSON to elements and
 * nothing else: no simulation, no re-layout, no numbers the server did not
 * send. Rebuilding from equal inputs yields an identical DOM tree.
 */

export interface TreeHandlers {
  onName(frame: number): void;
  onZoom(frame: number): void;
}

function fmtNum(x: number): string {
  // Stable short form: enough digits to tell values apart, no float tails.
  return String(Number(x.toPrecision(6)));
}

function fmtValue(v: MeasValue): string {
  if (v.kind === 'expval') return `expval = ${fmtNum(v.value)}`;
  if (v.kind === 'probs') return `probs = [${v.values.map(fmtNum).join(', ')}]`;
  const amps = v.values.map(([re, im]) => `${fmtNum(re)}${im < 0 ? '' : '+'}${fmtNum(im)}i`);
  return `state = [${amps.join(', ')}]`;
}

export function renderDiagnostics(items: Diagnostic[]): HTMLElement {
  const box = document.createElement('div');
  box.className = 'diagnostics';
  for (const d of items) {
    const row = document.createElement('div');
    row.className = `diag diag-${d.severity}`;
    row.textContent = `${d.line}:${d.col}: ${d.phase} ${d.severity}: ${d.message}`;
    box.appendChild(row);
  }
  return box;
}

function frameRow(
  frame: FrameJson,
  snapshot: SnapshotJson,
  details: Map<number, FrameDetail>,
  notices: Map<number, string>,
  selected: number | null,
  handlers: TreeHandlers,
): HTMLLIElement {
  const li = document.createElement('li');
  li.className = `frame kind-${frame.kind}`;
  if (frame.id === selected) li.classList.add('selected');
  li.dataset.frame = String(frame.id);

  const name = document.createElement('button');
  name.className = 'frame-name';
  name.textContent = frame.name;
  name.addEventListener('click', () => handlers.onName(frame.id));
  li.appendChild(name);

  const zoom = document.createElement('button');
  zoom.className = 'display-circuit';
  zoom.dataset.frame = String(frame.id);
  zoom.textContent = 'Display Circuit';
  zoom.addEventListener('click', () => handlers.onZoom(frame.id));
  li.appendChild(zoom);

  const note = notices.get(frame.id);
  if (note !== undefined) {
    const span = document.createElement('span');
    span.className = 'frame-notice';
    span.textContent = note;
    li.appendChild(span);
  }

  const detail = details.get(frame.id);
  if (detail) {
    const div = document.createElement('div');
    div.className = 'frame-detail';
    const args = detail.args.map(([n, v]) => `${n} = ${fmtNum(v)}`).join(', ');
    div.textContent = detail.output
      ? `(${args}) -> ${detail.output.map(fmtValue).join('; ')}`
      : `(${args})`;
    li.appendChild(div);
  }

  // Outputs land on the owning qnode row once the run finishes.
  const out = snapshot.outputs.find((o) => o.frame === frame.id);
  if (out && snapshot.status !== 'paused') {
    const div = document.createElement('div');
    div.className = 'frame-output';
    div.textContent = out.values.map(fmtValue).join('; ');
    li.appendChild(div);
  }
  return li;
}

/**
 * Call tree for pane A4. Children group under their parent; transform
 * applications are listed above the qnode they rewrote, in execution order.
 */
export function renderTree(
  snapshot: SnapshotJson,
  details: Map<number, FrameDetail>,
  notices: Map<number, string>,
  selected: number | null,
  handlers: TreeHandlers,
): HTMLElement {
  const byParent = new Map<number | null, FrameJson[]>();
  for (const f of snapshot.frames) {
    const list = byParent.get(f.parent) ?? [];
    list.push(f);
    byParent.set(f.parent, list);
  }

  function children(of: number): { transforms: FrameJson[]; calls: FrameJson[] } {
    const kids = byParent.get(of) ?? [];
    return {
      transforms: kids.filter((f) => f.kind === 'transform_application'),
      calls: kids.filter((f) => f.kind !== 'transform_application'),
    };
  }

  function subtree(frame: FrameJson): HTMLLIElement {
    const li = frameRow(frame, snapshot, details, notices, selected, handlers);
    const kids = children(frame.id);
    if (kids.calls.length > 0) {
      const ul = document.createElement('ul');
      for (const kid of kids.calls) ul.appendChild(subtree(kid));
      li.appendChild(ul);
    }
    return li;
  }

  const root = document.createElement('ul');
  root.className = 'call-tree';
  for (const top of byParent.get(null) ?? []) {
    for (const t of children(top.id).transforms) {
      root.appendChild(frameRow(t, snapshot, details, notices, selected, handlers));
    }
    root.appendChild(subtree(top));
  }
  return root;
}

type Placed = { cell: CellJson; lo: number; hi: number };

function rowsOf(cell: CellJson): [number, number] {
  if (cell.type === 'box') return [cell.wire_min, cell.wire_max];
  if (cell.type === 'midmeasure') return [cell.wire, cell.wire];
  const ws = cell.wires;
  return [Math.min(...ws), Math.max(...ws)];
}

function cellLabel(cell: CellJson): string {
  if (cell.type === 'gate') {
    return cell.params.length > 0
      ? `${cell.name}(${cell.params.map(fmtNum).join(', ')})`
      : cell.name;
  }
  if (cell.type === 'box') return cell.label;
  if (cell.type === 'midmeasure') return 'measure';
  return cell.kind;
}

/**
 * Circuit for pane A5, drawn straight from the view's columns. One table
 * row per wire; cells spanning several wires use rowspan, so the layout
 * the server computed is the layout on screen.
 */
export function renderCircuit(
  view: CircuitViewJson,
  handlers: Pick<TreeHandlers, 'onZoom'>,
): HTMLElement {
  const table = document.createElement('table');
  table.className = 'circuit';
  const cols: Placed[][] = view.columns.map((col) =>
    col.map((cell) => {
      const [lo, hi] = rowsOf(cell);
      return { cell, lo, hi };
    }),
  );

  for (let row = 0; row < view.wires; row++) {
    const tr = document.createElement('tr');
    const label = document.createElement('th');
    label.textContent = `q${row}`;
    tr.appendChild(label);
    for (const col of cols) {
      const starting = col.find((p) => p.lo === row);
      if (starting) {
        const td = document.createElement('td');
        td.rowSpan = starting.hi - starting.lo + 1;
        td.className = `cell cell-${starting.cell.type}`;
        td.textContent = cellLabel(starting.cell);
        if (starting.cell.type === 'box') {
          td.dataset.frame = String(starting.cell.frame);
          if (starting.cell.degenerate) td.classList.add('degenerate');
          const btn = document.createElement('button');
          btn.className = 'display-circuit';
          btn.dataset.frame = String(starting.cell.frame);
          btn.textContent = 'Display Circuit';
          const frameId = starting.cell.frame;
          btn.addEventListener('click', () => handlers.onZoom(frameId));
          td.appendChild(btn);
        }
        if (starting.cell.type === 'gate') {
          td.dataset.wires = starting.cell.wires.join(',');
          td.dataset.line = String(starting.cell.line);
        }
        tr.appendChild(td);
      } else if (!col.some((p) => p.lo < row && row <= p.hi)) {
        const td = document.createElement('td');
        td.className = 'cell cell-wire';
        tr.appendChild(td);
      }
      // rows inside a span emit nothing; rowspan already covers them
    }
    table.appendChild(tr);
  }
  return table;
}

/** Line-number gutter for the editor: breakpoints and the paused line. */
export function renderGutter(
  source: string,
  breakpoints: number[],
  pausedLine: number | null,
): HTMLElement {
  const gutter = document.createElement('div');
  gutter.className = 'gutter';
  const lines = source.split('\n').length;
  for (let n = 1; n <= lines; n++) {
    const row = document.createElement('div');
    row.className = 'gutter-line';
    row.dataset.line = String(n);
    if (breakpoints.includes(n)) row.classList.add('breakpoint');
    if (n === pausedLine) row.classList.add('paused');
    row.textContent = String(n);
    gutter.appendChild(row);
  }
  return gutter;
}
