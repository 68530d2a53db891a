"""Laid-out circuit views of trace Snapshots.

A view of a frame shows the frame's own gate and mid-measure events as cells
and each direct child subroutine call as one box spanning the wires its whole
subtree touched. Layout is greedy left-packing: cells are placed in event
order (boxes ordered by their first subtree event) into the leftmost column
where every wire row they span is still free. A multi-wire cell occupies its
full min..max row span so its vertical connector never crosses a neighbour.

Terminal measurement cells are appended after everything else, aligned in a
fresh rightmost column.
"""
from __future__ import annotations

from dataclasses import dataclass

from .trace import (
    ExpvalSpec,
    GatePayload,
    MeasSpec,
    MidMeasurePayload,
    ProbsSpec,
    Snapshot,
    TraceEvent,
)


class NotReadyError(Exception):
    """View requested of a transform that has not executed yet."""


@dataclass(frozen=True)
class GateCell:
    name: str
    wires: tuple[int, ...]
    params: tuple[float, ...]
    line: int

    def to_json_dict(self) -> dict:
        return {
            "type": "gate",
            "name": self.name,
            "wires": list(self.wires),
            "params": list(self.params),
            "line": self.line,
        }


@dataclass(frozen=True)
class BoxCell:
    frame: int
    label: str
    wire_min: int
    wire_max: int
    degenerate: bool = False

    def to_json_dict(self) -> dict:
        d = {
            "type": "box",
            "frame": self.frame,
            "label": self.label,
            "wire_min": self.wire_min,
            "wire_max": self.wire_max,
        }
        if self.degenerate:
            d["degenerate"] = True
        return d


@dataclass(frozen=True)
class MidMeasureCell:
    wire: int

    def to_json_dict(self) -> dict:
        return {"type": "midmeasure", "wire": self.wire}


@dataclass(frozen=True)
class TerminalCell:
    kind: str  # "expval" | "probs" | "state"
    wires: tuple[int, ...]

    def to_json_dict(self) -> dict:
        return {"type": "terminal", "kind": self.kind, "wires": list(self.wires)}


Cell = GateCell | BoxCell | MidMeasureCell | TerminalCell


@dataclass(frozen=True)
class CircuitView:
    wires: int
    columns: tuple[tuple[Cell, ...], ...]

    def to_json_dict(self) -> dict:
        return {
            "wires": self.wires,
            "columns": [[c.to_json_dict() for c in col] for col in self.columns],
        }

    def cells(self) -> list[Cell]:
        return [c for col in self.columns for c in col]


def build_view(snapshot: Snapshot, frame_id: int) -> CircuitView:
    frame = snapshot.frame_by_id(frame_id)
    if frame.kind == "transform_application":
        raise ValueError("frame is a transform application; use the transform view")

    own_events = [
        ev
        for ev in snapshot.events
        if ev.frame == frame_id and isinstance(ev.payload, (GatePayload, MidMeasurePayload))
    ]
    children = [
        f for f in snapshot.frames if f.parent == frame_id and f.kind == "subroutine"
    ]

    # (sort key, cell, occupied rows). Boxes sort by first subtree event and
    # win ties against same-seq cells: the call preceded anything inside it.
    items: list[tuple[tuple, Cell, range]] = []
    for ev in own_events:
        cell = _event_cell(ev)
        rows = _span(_event_wires(ev))
        items.append(((ev.seq, 1, ev.seq), cell, rows))

    parent_wires = _subtree_wires(snapshot, frame_id)
    name_counts: dict[str, int] = {}
    for child in children:
        name_counts[child.name] = name_counts.get(child.name, 0) + 1
        label = f"{child.name}#{name_counts[child.name]}"
        sub_events = _subtree_events(snapshot, child.id)
        wires = set()
        for ev in sub_events:
            wires.update(_event_wires(ev))
        if wires:
            key = (min(ev.seq for ev in sub_events), 0, child.id)
            cell = BoxCell(child.id, label, min(wires), max(wires))
        else:
            row = min(parent_wires) if parent_wires else 0
            key = (child.created_at_seq, 0, child.id)
            cell = BoxCell(child.id, label, row, row, degenerate=True)
        items.append((key, cell, range(cell.wire_min, cell.wire_max + 1)))

    columns, frontier = _pack(sorted(items, key=lambda it: it[0]), frame.device_wires)
    if frame.kind == "qnode" and frame.output is not None and frame.meas_specs:
        _append_terminals(columns, frontier, frame.meas_specs, frame.device_wires)
    return CircuitView(frame.device_wires, tuple(tuple(col) for col in columns))


def transform_view(snapshot: Snapshot, frame_id: int) -> CircuitView:
    frame = snapshot.frame_by_id(frame_id)
    if frame.kind != "transform_application":
        raise ValueError("frame is not a transform application")
    if frame.output is None:
        raise NotReadyError(f"transform '{frame.name}' has not executed yet")

    items: list[tuple[tuple, Cell, range]] = []
    for ev in snapshot.events:
        if ev.frame == frame_id and isinstance(ev.payload, GatePayload):
            items.append(((ev.seq, 1, ev.seq), _event_cell(ev), _span(_event_wires(ev))))
    columns, frontier = _pack(items, frame.device_wires)
    if frame.meas_specs:
        _append_terminals(columns, frontier, frame.meas_specs, frame.device_wires)
    return CircuitView(frame.device_wires, tuple(tuple(col) for col in columns))


# --- helpers ---


def _event_cell(ev: TraceEvent) -> Cell:
    if isinstance(ev.payload, GatePayload):
        op = ev.payload.op
        return GateCell(op.name, op.wires, op.params, ev.line)
    assert isinstance(ev.payload, MidMeasurePayload)
    return MidMeasureCell(ev.payload.wire)


def _event_wires(ev: TraceEvent) -> tuple[int, ...]:
    if isinstance(ev.payload, GatePayload):
        return ev.payload.op.wires
    assert isinstance(ev.payload, MidMeasurePayload)
    return (ev.payload.wire,)


def _span(wires: tuple[int, ...]) -> range:
    return range(min(wires), max(wires) + 1)


def _descendant_ids(snapshot: Snapshot, root: int) -> set[int]:
    ids = {root}
    for f in snapshot.frames:  # frames are id-ordered; parents precede children
        if f.parent in ids and f.kind != "transform_application":
            ids.add(f.id)
    return ids


def _subtree_events(snapshot: Snapshot, root: int) -> list[TraceEvent]:
    ids = _descendant_ids(snapshot, root)
    return [
        ev
        for ev in snapshot.events
        if ev.frame in ids and isinstance(ev.payload, (GatePayload, MidMeasurePayload))
    ]


def _subtree_wires(snapshot: Snapshot, root: int) -> set[int]:
    wires: set[int] = set()
    for ev in _subtree_events(snapshot, root):
        wires.update(_event_wires(ev))
    return wires


def _pack(
    items: list[tuple[tuple, Cell, range]], num_wires: int
) -> tuple[list[list[Cell]], list[int]]:
    frontier = [0] * num_wires
    columns: list[list[Cell]] = []
    for _, cell, rows in items:
        col = max(frontier[r] for r in rows)
        while len(columns) <= col:
            columns.append([])
        columns[col].append(cell)
        for r in rows:
            frontier[r] = col + 1
    return columns, frontier


def _terminal_cell(spec: MeasSpec, num_wires: int) -> TerminalCell:
    if isinstance(spec, ExpvalSpec):
        return TerminalCell("expval", tuple(w for _, w in spec.factors))
    if isinstance(spec, ProbsSpec):
        return TerminalCell("probs", spec.wires)
    return TerminalCell("state", tuple(range(num_wires)))


def _append_terminals(
    columns: list[list[Cell]],
    frontier: list[int],
    specs: tuple[MeasSpec, ...],
    num_wires: int,
) -> None:
    start = max(frontier) if frontier else 0
    for i in range(len(frontier)):
        frontier[i] = start
    for spec in specs:
        cell = _terminal_cell(spec, num_wires)
        rows = _span(cell.wires)
        col = max(frontier[r] for r in rows)
        while len(columns) <= col:
            columns.append([])
        columns[col].append(cell)
        for r in rows:
            frontier[r] = col + 1
