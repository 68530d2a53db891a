"""Circuit rewrite passes over flattened gate sequences.

A sequence is a plain list of GateOp. Both passes iterate to a fixpoint, so
one call fully closes cascades like [x, h, h, x] -> []. Blocking is per-wire
overlap: an op standing between a candidate pair blocks it iff it touches any
wire of the pair. No commutation analysis is attempted.

Mid-circuit measurement has no sound rewrite under either pass, so callers
flattening a qnode that measured mid-circuit must refuse before reaching
here; UnsupportedTransformError is the designated refusal.
"""
from __future__ import annotations

import math

from .lang import ROTATIONS, SELF_INVERSE
from .sim import GateOp

_TWO_PI = 2.0 * math.pi


class UnsupportedTransformError(Exception):
    """Transform requested on a qnode whose circuit cannot be rewritten."""


def normalize_angle(angle: float) -> float:
    """Map an angle into (-2*pi, 2*pi], preserving the rotation's unitary."""
    a = angle % (2.0 * _TWO_PI)
    if a > _TWO_PI:
        a -= 2.0 * _TWO_PI
    return a


def cancel_inverses(ops: list[GateOp]) -> list[GateOp]:
    """Drop adjacent-up-to-disjoint-wires pairs of identical self-inverse gates."""
    out = list(ops)
    changed = True
    while changed:
        changed = False
        i = 0
        while i < len(out):
            g = out[i]
            if g.name in SELF_INVERSE:
                j = _partner(out, i)
                if j is not None:
                    del out[j]
                    del out[i]
                    changed = True
                    continue  # re-examine the op now at index i
            i += 1
    return out


def _partner(ops: list[GateOp], i: int) -> int | None:
    """Index of a cancelling twin of ops[i], or None if blocked/absent."""
    g = ops[i]
    touched = set(g.wires)
    for j in range(i + 1, len(ops)):
        if not touched.intersection(ops[j].wires):
            continue
        return j if ops[j] == g else None
    return None


def merge_rotations(ops: list[GateOp], tol: float = 1e-12) -> list[GateOp]:
    """Fuse same-axis rotations on a wire separated only by disjoint ops."""
    out = list(ops)
    changed = True
    while changed:
        changed = False
        i = 0
        while i < len(out):
            g = out[i]
            if g.name in ROTATIONS:
                j = _next_on_wire(out, i)
                if j is not None and out[j].name == g.name:
                    angle = normalize_angle(g.params[0] + out[j].params[0])
                    del out[j]
                    if abs(angle) <= tol:
                        del out[i]
                    else:
                        out[i] = GateOp(g.name, g.wires, (angle,), line=g.line)
                    changed = True
                    continue
            i += 1
    return out


def _next_on_wire(ops: list[GateOp], i: int) -> int | None:
    wire = ops[i].wires[0]
    for j in range(i + 1, len(ops)):
        if wire in ops[j].wires:
            return j
    return None


TRANSFORMS = {
    "cancel_inverses": cancel_inverses,
    "merge_rotations": merge_rotations,
}


def apply_chain(ops: list[GateOp], names: list[str]) -> list[tuple[str, list[GateOp]]]:
    """Apply each named transform to the previous output; returns every stage."""
    stages: list[tuple[str, list[GateOp]]] = []
    current = list(ops)
    for name in names:
        if name not in TRANSFORMS:
            raise ValueError(f"unknown transform '{name}'")
        current = TRANSFORMS[name](current)
        stages.append((name, current))
    return stages
