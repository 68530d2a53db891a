"""Tracing interpreter with breakpoints over checked QDL programs.

Execution is driven by a Python generator: the interpreter yields at every
pause point (just BEFORE a statement or transform decorator on a breakpoint
line executes), and `DebugSession.next` resumes it, packaging the accumulated
trace into an immutable Snapshot. Runtime failures never raise out of
`next`; they become a `runtime_error` Snapshot carrying the source line.

Budgets: every run is capped by an event count and a wall clock. Exceeding
either raises BudgetExceededError (this one does propagate, so callers can
distinguish "too big" from "broken program").
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

from . import sim
from .frontend import ast, check
from .frontend.checker import executable_lines
from .frontend.diagnostics import Diagnostic
from .lang import GATE_ARITY
from .rng import RngState, rng_from_seed
from .transforms import TRANSFORMS, UnsupportedTransformError

DEFAULT_MAX_EVENTS = 1_000_000
DEFAULT_WALL_CAP_S = 10.0
REALTIME_MAX_EVENTS = 100_000
REALTIME_WALL_CAP_S = 1.0


class QdlRuntimeError(Exception):
    """A program failed at a specific source line while executing."""

    def __init__(self, message: str, line: int):
        super().__init__(message)
        self.message = message
        self.line = line


class QdlCheckError(Exception):
    """start_session was handed a program that does not pass check()."""

    def __init__(self, diagnostics: list[Diagnostic]):
        super().__init__(f"{len(diagnostics)} diagnostic(s)")
        self.diagnostics = diagnostics


class BudgetExceededError(Exception):
    """Event count or wall clock cap hit; the run is abandoned."""


class ProtocolError(Exception):
    """Session driven out of order (e.g. next() after finished)."""


class UnknownFrameError(Exception):
    def __init__(self, frame_id: int):
        super().__init__(f"unknown frame {frame_id}")
        self.frame_id = frame_id


# --- measurement specs (wires resolved to concrete ints) and their values ---


@dataclass(frozen=True)
class ExpvalSpec:
    factors: tuple[tuple[str, int], ...]


@dataclass(frozen=True)
class ProbsSpec:
    wires: tuple[int, ...]


@dataclass(frozen=True)
class StateSpec:
    pass


MeasSpec = ExpvalSpec | ProbsSpec | StateSpec


@dataclass(frozen=True)
class ExpvalValue:
    value: float

    def to_json_dict(self) -> dict:
        return {"kind": "expval", "value": self.value}


@dataclass(frozen=True)
class ProbsValue:
    values: tuple[float, ...]

    def to_json_dict(self) -> dict:
        return {"kind": "probs", "values": list(self.values)}


@dataclass(frozen=True)
class StateValue:
    values: tuple[complex, ...]

    def to_json_dict(self) -> dict:
        return {"kind": "state", "values": [[a.real, a.imag] for a in self.values]}


MeasValue = ExpvalValue | ProbsValue | StateValue


def _eval_spec(state: sim.Statevector, spec: MeasSpec) -> MeasValue:
    if isinstance(spec, ExpvalSpec):
        return ExpvalValue(sim.expval(state, sim.Observable(spec.factors)))
    if isinstance(spec, ProbsSpec):
        return ProbsValue(tuple(float(p) for p in sim.probs(state, spec.wires)))
    return StateValue(tuple(complex(a) for a in state.amplitudes))


# --- trace records ---


@dataclass(frozen=True)
class GatePayload:
    op: sim.GateOp

    def to_json_dict(self) -> dict:
        return {
            "type": "gate",
            "name": self.op.name,
            "wires": list(self.op.wires),
            "params": list(self.op.params),
        }


@dataclass(frozen=True)
class MidMeasurePayload:
    wire: int
    bit: int

    def to_json_dict(self) -> dict:
        return {"type": "midmeasure", "wire": self.wire, "bit": self.bit}


@dataclass(frozen=True)
class ReturnedPayload:
    values: tuple[MeasValue, ...]

    def to_json_dict(self) -> dict:
        return {"type": "returned", "values": [v.to_json_dict() for v in self.values]}


Payload = GatePayload | MidMeasurePayload | ReturnedPayload


@dataclass(frozen=True)
class TraceEvent:
    seq: int
    frame: int
    line: int
    payload: Payload

    def to_json_dict(self) -> dict:
        return {
            "seq": self.seq,
            "frame": self.frame,
            "line": self.line,
            "payload": self.payload.to_json_dict(),
        }


@dataclass(frozen=True)
class CallFrame:
    id: int
    kind: str  # "qnode" | "subroutine" | "transform_application"
    name: str
    parent: int | None
    args: tuple[tuple[str, int | float], ...]
    output: tuple[MeasValue, ...] | None = None  # set once the frame completes
    # Bookkeeping for views; not part of the wire format.
    device_wires: int = field(default=0, compare=False)
    meas_specs: tuple[MeasSpec, ...] | None = field(default=None, compare=False)
    created_at_seq: int = field(default=0, compare=False)

    def to_json_dict(self) -> dict:
        d = {
            "id": self.id,
            "kind": self.kind,
            "name": self.name,
            "parent": self.parent,
            "args": [[name, value] for name, value in self.args],
        }
        if self.output is not None:
            d["output"] = [v.to_json_dict() for v in self.output]
        return d


@dataclass(frozen=True)
class QnodeOutput:
    frame: int
    values: tuple[MeasValue, ...]

    def to_json_dict(self) -> dict:
        return {"frame": self.frame, "values": [v.to_json_dict() for v in self.values]}


@dataclass(frozen=True)
class Snapshot:
    status: str  # "paused" | "finished" | "runtime_error"
    line: int | None
    message: str | None
    frames: tuple[CallFrame, ...]
    events: tuple[TraceEvent, ...]
    outputs: tuple[QnodeOutput, ...]
    unbound_breakpoints: tuple[int, ...]

    def to_json_dict(self) -> dict:
        d: dict = {"status": self.status}
        if self.line is not None:
            d["line"] = self.line
        if self.message is not None:
            d["message"] = self.message
        d["frames"] = [f.to_json_dict() for f in self.frames]
        d["events"] = [e.to_json_dict() for e in self.events]
        d["outputs"] = [o.to_json_dict() for o in self.outputs]
        d["unbound_breakpoints"] = list(self.unbound_breakpoints)
        return d

    def frame_by_id(self, frame_id: int) -> CallFrame:
        for f in self.frames:
            if f.id == frame_id:
                return f
        raise UnknownFrameError(frame_id)


def frame_detail(
    snapshot: Snapshot, frame_id: int
) -> tuple[tuple[tuple[str, int | float], ...], tuple[MeasValue, ...] | None]:
    f = snapshot.frame_by_id(frame_id)
    return f.args, f.output


# --- the interpreter ---


class _Env:
    """Lexical scope chain. Subroutines start fresh (no closures)."""

    __slots__ = ("vars", "parent")

    def __init__(self, vars: dict | None = None, parent: "_Env | None" = None):
        self.vars = vars if vars is not None else {}
        self.parent = parent

    def lookup(self, name: str):
        env = self
        while env is not None:
            if name in env.vars:
                return env.vars[name]
            env = env.parent
        raise KeyError(name)

    def bind(self, name: str, value) -> None:
        self.vars[name] = value

    def child(self, vars: dict | None = None) -> "_Env":
        return _Env(vars, self)


class _FrameRec:
    __slots__ = (
        "id",
        "kind",
        "name",
        "parent",
        "args",
        "output",
        "device_wires",
        "meas_specs",
        "created_at_seq",
    )

    def __init__(self, id, kind, name, parent, args, device_wires, created_at_seq):
        self.id = id
        self.kind = kind
        self.name = name
        self.parent = parent
        self.args = args
        self.output = None
        self.device_wires = device_wires
        self.meas_specs = None
        self.created_at_seq = created_at_seq

    def freeze(self) -> CallFrame:
        return CallFrame(
            id=self.id,
            kind=self.kind,
            name=self.name,
            parent=self.parent,
            args=self.args,
            output=self.output,
            device_wires=self.device_wires,
            meas_specs=self.meas_specs,
            created_at_seq=self.created_at_seq,
        )


class _Interp:
    def __init__(
        self,
        program: ast.Program,
        breakpoints: frozenset[int],
        seed: int,
        max_events: int,
        wall_cap: float,
    ):
        self.program = program
        self.breakpoints = breakpoints
        self.defs: dict[str, ast.QnodeDef | ast.FnDef] = {
            item.name: item
            for item in program.items
            if isinstance(item, (ast.QnodeDef, ast.FnDef))
        }
        self.rng: RngState = rng_from_seed(seed)
        self.max_events = max_events
        self.wall_cap = wall_cap
        # Wall budget counts executing time only, not time spent paused at a
        # breakpoint; the session stamps step_started before each resume.
        self.spent_s = 0.0
        self.step_started = time.monotonic()
        self.events: list[TraceEvent] = []
        self.frames: list[_FrameRec] = []
        self.outputs: list[QnodeOutput] = []
        self.state: sim.Statevector | None = None
        self.device_wires = 0

    # -- bookkeeping --

    def _check_wall(self) -> None:
        if self.spent_s + (time.monotonic() - self.step_started) > self.wall_cap:
            raise BudgetExceededError(f"wall clock cap {self.wall_cap}s exceeded")

    def _new_frame(self, kind, name, parent, args) -> _FrameRec:
        rec = _FrameRec(
            id=len(self.frames),
            kind=kind,
            name=name,
            parent=parent,
            args=tuple(args),
            device_wires=self.device_wires,
            created_at_seq=len(self.events),
        )
        self.frames.append(rec)
        return rec

    def _record(self, frame: _FrameRec, line: int, payload: Payload) -> None:
        if len(self.events) >= self.max_events:
            raise BudgetExceededError(f"event cap {self.max_events} exceeded")
        self._check_wall()
        self.events.append(TraceEvent(len(self.events), frame.id, line, payload))

    def _maybe_pause(self, line: int):
        self._check_wall()
        if line in self.breakpoints:
            yield line

    # -- top level --

    def run(self):
        for item in self.program.items:
            if isinstance(item, ast.CallStmt):
                yield from self._exec_top_call(item)

    def _exec_top_call(self, call: ast.CallStmt):
        yield from self._maybe_pause(call.span.start_line)
        qnode = self.defs[call.name]
        assert isinstance(qnode, ast.QnodeDef)
        env = _Env()
        arg_values = [self._eval(a, env, None) for a in call.args]
        self.device_wires = qnode.wires
        try:
            self.state = sim.init_state(qnode.wires)
        except sim.SimError as e:
            raise QdlRuntimeError(str(e), call.span.start_line) from e
        frame = self._new_frame(
            "qnode", qnode.name, None, zip(qnode.params, arg_values, strict=True)
        )
        qnode_env = _Env(dict(zip(qnode.params, arg_values, strict=True)))

        body = list(qnode.body)
        ret: ast.ReturnStmt | None = None
        if body and isinstance(body[-1], ast.ReturnStmt):
            ret = body[-1]
            body = body[:-1]
        for stmt in body:
            yield from self._exec_stmt(stmt, qnode_env, frame)

        specs: tuple[MeasSpec, ...] = ()
        values: tuple[MeasValue, ...] = ()
        if ret is not None:
            yield from self._maybe_pause(ret.span.start_line)
            specs = tuple(self._resolve_meas(m, qnode_env) for m in ret.measurements)
            values = tuple(_eval_spec(self.state, s) for s in specs)
            self._record(frame, ret.span.start_line, ReturnedPayload(values))
        frame.meas_specs = specs
        frame.output = values

        final = values
        if qnode.decorators:
            final = yield from self._apply_transforms(qnode, frame, specs)
        self.outputs.append(QnodeOutput(frame.id, final))
        self.state = None
        self.device_wires = 0

    def _apply_transforms(
        self, qnode: ast.QnodeDef, frame: _FrameRec, specs: tuple[MeasSpec, ...]
    ):
        subtree = self._subtree_ids(frame.id)
        ops: list[sim.GateOp] = []
        measured_mid = False
        for ev in self.events:
            if ev.frame not in subtree:
                continue
            if isinstance(ev.payload, GatePayload):
                ops.append(ev.payload.op)
            elif isinstance(ev.payload, MidMeasurePayload):
                measured_mid = True

        values: tuple[MeasValue, ...] = ()
        for dec in qnode.decorators:
            yield from self._maybe_pause(dec.span.start_line)
            trec = self._new_frame("transform_application", dec.name, frame.id, ())
            trec.meas_specs = specs
            if measured_mid:
                err = UnsupportedTransformError(
                    f"transform '{dec.name}' not supported: "
                    f"qnode '{qnode.name}' uses mid-circuit measurement"
                )
                raise QdlRuntimeError(str(err), dec.span.start_line) from err
            ops = TRANSFORMS[dec.name](ops)
            for op in ops:
                self._record(trec, op.line if op.line is not None else dec.span.start_line,
                             GatePayload(op))
            rerun = sim.init_state(qnode.wires)
            for op in ops:
                rerun = sim.apply_gate(rerun, op)
            values = tuple(_eval_spec(rerun, s) for s in specs)
            trec.output = values
        return values

    def _subtree_ids(self, root: int) -> set[int]:
        """Frame ids under root, excluding transform applications."""
        ids = {root}
        for rec in self.frames:
            if rec.parent in ids and rec.kind != "transform_application":
                ids.add(rec.id)
        return ids

    # -- statements --

    def _exec_stmt(self, stmt: ast.Node, env: _Env, frame: _FrameRec):
        yield from self._maybe_pause(stmt.span.start_line)
        if isinstance(stmt, ast.GateStmt):
            self._exec_gate(stmt, env, frame)
        elif isinstance(stmt, ast.CallStmt):
            yield from self._exec_sub_call(stmt, env, frame)
        elif isinstance(stmt, ast.ForStmt):
            lo = self._int_operand(stmt.start, env, frame, "loop bound")
            hi = self._int_operand(stmt.stop, env, frame, "loop bound")
            for i in range(lo, hi):
                yield from self._exec_block(stmt.body, env.child({stmt.var: i}), frame)
        elif isinstance(stmt, ast.IfStmt):
            cond = self._eval(stmt.cond, env, frame)
            if not math.isfinite(cond):
                raise QdlRuntimeError(
                    f"condition evaluated to non-finite value {cond}", stmt.span.start_line
                )
            if cond != 0:
                yield from self._exec_block(stmt.then_body, env.child(), frame)
            elif stmt.else_body is not None:
                yield from self._exec_block(stmt.else_body, env.child(), frame)
        elif isinstance(stmt, ast.LetStmt):
            env.bind(stmt.name, self._eval(stmt.value, env, frame))
        elif isinstance(stmt, ast.ReturnStmt):
            # check() bars this; reachable only through unchecked ASTs.
            raise QdlRuntimeError("return outside qnode tail", stmt.span.start_line)
        else:
            raise AssertionError(f"unexpected statement {stmt.kind}")

    def _exec_block(self, body, env: _Env, frame: _FrameRec):
        for stmt in body:
            yield from self._exec_stmt(stmt, env, frame)

    def _exec_gate(self, stmt: ast.GateStmt, env: _Env, frame: _FrameRec) -> None:
        line = stmt.span.start_line
        n_params, n_wires = GATE_ARITY[stmt.name]
        raw = [self._eval(a, env, frame) for a in stmt.args]
        params = tuple(float(v) for v in raw[:n_params])
        for p in params:
            if not math.isfinite(p):
                raise QdlRuntimeError(f"gate parameter evaluated to non-finite value {p}", line)
        wires = tuple(
            self._as_int(v, "wire", line) for v in raw[n_params:]
        )
        op = sim.GateOp(stmt.name, wires, params, line=line)
        assert self.state is not None
        try:
            self.state = sim.apply_gate(self.state, op)
        except sim.SimError as e:
            raise QdlRuntimeError(str(e), line) from e
        self._record(frame, line, GatePayload(op))

    def _exec_sub_call(self, call: ast.CallStmt, env: _Env, frame: _FrameRec):
        fn = self.defs[call.name]
        assert isinstance(fn, ast.FnDef)
        arg_values = [self._eval(a, env, frame) for a in call.args]
        child = self._new_frame(
            "subroutine", fn.name, frame.id, zip(fn.params, arg_values, strict=True)
        )
        fn_env = _Env(dict(zip(fn.params, arg_values, strict=True)))
        yield from self._exec_block(fn.body, fn_env, child)

    def _resolve_meas(self, meas: ast.Node, env: _Env) -> MeasSpec:
        line = meas.span.start_line
        if isinstance(meas, ast.ExpvalMeas):
            factors = []
            seen = set()
            for f in meas.factors:
                wire = self._int_operand(f.wire, env, None, "observable wire")
                if wire in seen:
                    raise QdlRuntimeError(f"duplicate wire {wire} in observable", line)
                seen.add(wire)
                factors.append((f.pauli, wire))
            return ExpvalSpec(tuple(factors))
        if isinstance(meas, ast.ProbsMeas):
            wires = tuple(
                self._int_operand(w, env, None, "probs wire") for w in meas.wires
            )
            return ProbsSpec(wires)
        assert isinstance(meas, ast.StateMeas)
        return StateSpec()

    # -- expressions --

    def _eval(self, expr: ast.Node, env: _Env, frame: _FrameRec | None):
        if isinstance(expr, ast.Num):
            return expr.value
        if isinstance(expr, ast.Var):
            try:
                return env.lookup(expr.name)
            except KeyError:
                raise QdlRuntimeError(
                    f"undefined variable '{expr.name}'", expr.span.start_line
                ) from None
        if isinstance(expr, ast.UnaryOp):
            return -self._eval(expr.operand, env, frame)
        if isinstance(expr, ast.BinOp):
            left = self._eval(expr.left, env, frame)
            right = self._eval(expr.right, env, frame)
            op = expr.op
            if op == "+":
                return left + right
            if op == "-":
                return left - right
            if op == "*":
                return left * right
            if op == "/":
                if right == 0:
                    raise QdlRuntimeError("division by zero", expr.span.start_line)
                return left / right
            table = {
                "<": left < right,
                "<=": left <= right,
                ">": left > right,
                ">=": left >= right,
                "==": left == right,
                "!=": left != right,
            }
            return int(table[op])
        if isinstance(expr, ast.MeasureExpr):
            return self._eval_measure(expr, env, frame)
        raise AssertionError(f"unexpected expression {expr.kind}")

    def _eval_measure(self, expr: ast.MeasureExpr, env: _Env, frame: _FrameRec | None):
        line = expr.span.start_line
        if self.state is None or frame is None:
            raise QdlRuntimeError("measure used outside a qnode", line)
        wire = self._int_operand(expr.wire, env, frame, "wire")
        try:
            bit, self.state, self.rng = sim.measure_mid(self.state, wire, self.rng)
        except sim.SimError as e:
            raise QdlRuntimeError(str(e), line) from e
        self._record(frame, line, MidMeasurePayload(wire, bit))
        return bit

    def _int_operand(self, expr: ast.Node, env: _Env, frame: _FrameRec | None, what: str) -> int:
        return self._as_int(self._eval(expr, env, frame), what, expr.span.start_line)

    @staticmethod
    def _as_int(value, what: str, line: int) -> int:
        if isinstance(value, int):
            return value
        if isinstance(value, float) and value.is_integer():
            return int(value)
        raise QdlRuntimeError(f"{what} must be an integer, got {value}", line)


# --- sessions ---


class DebugSession:
    """One stepped execution. Drive with next(); restart by creating anew."""

    def __init__(
        self,
        program: ast.Program,
        breakpoints: frozenset[int],
        seed: int,
        max_events: int,
        wall_cap: float,
    ):
        self.program = program
        self.breakpoints = breakpoints
        self.seed = seed
        self.unbound_breakpoints = tuple(
            sorted(set(breakpoints) - executable_lines(program))
        )
        self.history: list[Snapshot] = []
        self._interp = _Interp(program, breakpoints, seed, max_events, wall_cap)
        self._gen = self._interp.run()
        self._done = False

    @property
    def finished(self) -> bool:
        return self._done

    def next(self) -> Snapshot:
        if self._done:
            raise ProtocolError("next() on a finished session")
        self._interp.step_started = time.monotonic()
        try:
            line = next(self._gen)
            snap = self._snapshot("paused", line=line)
        except StopIteration:
            self._done = True
            snap = self._snapshot("finished")
        except QdlRuntimeError as e:
            self._done = True
            snap = self._snapshot("runtime_error", line=e.line, message=e.message)
        except BudgetExceededError:
            self._done = True
            raise
        finally:
            self._interp.spent_s += time.monotonic() - self._interp.step_started
        self.history.append(snap)
        return snap

    def _snapshot(self, status: str, line: int | None = None, message: str | None = None):
        it = self._interp
        return Snapshot(
            status=status,
            line=line,
            message=message,
            frames=tuple(rec.freeze() for rec in it.frames),
            events=tuple(it.events),
            outputs=tuple(it.outputs),
            unbound_breakpoints=self.unbound_breakpoints,
        )


def start_session(
    program: ast.Program,
    breakpoints: set[int] | frozenset[int] = frozenset(),
    seed: int = 0,
    *,
    max_events: int = DEFAULT_MAX_EVENTS,
    wall_cap: float = DEFAULT_WALL_CAP_S,
) -> DebugSession:
    """Create a session positioned before the first top-level statement.

    No code runs until the first next(). Raises QdlCheckError when the
    program has semantic errors.
    """
    diagnostics = check(program)
    if diagnostics:
        raise QdlCheckError(diagnostics)
    return DebugSession(program, frozenset(breakpoints), seed, max_events, wall_cap)


def run_to_end(
    program: ast.Program,
    seed: int = 0,
    *,
    max_events: int = DEFAULT_MAX_EVENTS,
    wall_cap: float = DEFAULT_WALL_CAP_S,
) -> Snapshot:
    """Uninterrupted run: start_session with no breakpoints plus one next()."""
    session = start_session(
        program, frozenset(), seed, max_events=max_events, wall_cap=wall_cap
    )
    return session.next()
