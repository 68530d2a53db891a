"""Language-level constants of QDL: the gate set, measurement forms, transforms.

Gate arity is (parameter count, wire count); rotations take one angle in
radians. Wires are 0-based integers below the device wire count, checked at
runtime.
"""
from __future__ import annotations

# name -> (n_params, n_wires)
GATE_ARITY: dict[str, tuple[int, int]] = {
    "h": (0, 1),
    "x": (0, 1),
    "y": (0, 1),
    "z": (0, 1),
    "s": (0, 1),
    "t": (0, 1),
    "rx": (1, 1),
    "ry": (1, 1),
    "rz": (1, 1),
    "cnot": (0, 2),
    "cz": (0, 2),
    "swap": (0, 2),
    "toffoli": (0, 3),
}

GATES = frozenset(GATE_ARITY)

SELF_INVERSE = frozenset({"h", "x", "y", "z", "cnot", "cz", "swap", "toffoli"})

ROTATIONS = frozenset({"rx", "ry", "rz"})

PAULIS = ("X", "Y", "Z")

MEASUREMENT_FORMS = frozenset({"expval", "probs", "state"})

TRANSFORM_NAMES = ("cancel_inverses", "merge_rotations")

KEYWORDS = frozenset(
    {"qnode", "fn", "on", "device", "wires", "for", "in", "if", "else", "let", "return"}
)

# Names that may not be used for qnode/subroutine definitions.
RESERVED_NAMES = GATES | MEASUREMENT_FORMS | {"measure", "transform"}
