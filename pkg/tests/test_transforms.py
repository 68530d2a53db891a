"""Circuit rewrite checks: exact unitary preservation, fixpoints, blocking."""
from __future__ import annotations

import math

import numpy as np
import pytest

from qdbg.sim import GateOp
from qdbg.transforms import (
    TRANSFORMS,
    apply_chain,
    cancel_inverses,
    merge_rotations,
    normalize_angle,
)
from qdbg.rng import next_u64, rng_from_seed

import oracles


def _sig(ops):
    return [(op.name, op.wires, op.params) for op in ops]


# --- cancel_inverses ---


def test_adjacent_pair_cancels():
    ops = [GateOp("h", (0,)), GateOp("h", (0,))]
    assert cancel_inverses(ops) == []


def test_nested_pairs_cancel_to_nothing():
    ops = [
        GateOp("h", (0,)),
        GateOp("x", (1,)),
        GateOp("x", (1,)),
        GateOp("h", (0,)),
    ]
    assert cancel_inverses(ops) == []


def test_overlap_blocks_cancellation():
    ops = [GateOp("h", (0,)), GateOp("cnot", (0, 1)), GateOp("h", (0,))]
    assert _sig(cancel_inverses(ops)) == _sig(ops)


def test_non_overlapping_ops_do_not_block():
    ops = [GateOp("h", (0,)), GateOp("x", (1,)), GateOp("h", (0,))]
    assert _sig(cancel_inverses(ops)) == [("x", (1,), ())]


def test_cnot_wire_order_matters():
    same = [GateOp("cnot", (0, 1)), GateOp("cnot", (0, 1))]
    flipped = [GateOp("cnot", (0, 1)), GateOp("cnot", (1, 0))]
    assert cancel_inverses(same) == []
    assert _sig(cancel_inverses(flipped)) == _sig(flipped)


def test_rotations_are_not_cancelled():
    ops = [GateOp("rx", (0,), (0.5,)), GateOp("rx", (0,), (0.5,))]
    assert _sig(cancel_inverses(ops)) == _sig(ops)


def test_toffoli_and_swap_self_inverse():
    ops = [
        GateOp("toffoli", (0, 1, 2)),
        GateOp("toffoli", (0, 1, 2)),
        GateOp("swap", (1, 2)),
        GateOp("swap", (1, 2)),
    ]
    assert cancel_inverses(ops) == []


def test_s_and_t_are_not_self_inverse():
    ops = [GateOp("s", (0,)), GateOp("s", (0,)), GateOp("t", (0,)), GateOp("t", (0,))]
    assert _sig(cancel_inverses(ops)) == _sig(ops)


# --- merge_rotations ---


def test_adjacent_rotations_merge_keeping_first_line():
    ops = [GateOp("rz", (0,), (0.3,), line=4), GateOp("rz", (0,), (0.4,), line=9)]
    out = merge_rotations(ops)
    assert len(out) == 1
    assert out[0].name == "rz"
    assert abs(out[0].params[0] - 0.7) < 1e-15
    assert out[0].line == 4


def test_merge_skips_ops_on_other_wires():
    ops = [
        GateOp("rz", (0,), (0.3,)),
        GateOp("x", (1,)),
        GateOp("rz", (0,), (0.4,)),
    ]
    out = merge_rotations(ops)
    assert [op.name for op in out] == ["rz", "x"]
    assert abs(out[0].params[0] - 0.7) < 1e-15


def test_merge_blocked_by_same_wire_op():
    ops = [
        GateOp("rz", (0,), (0.3,)),
        GateOp("h", (0,)),
        GateOp("rz", (0,), (0.4,)),
    ]
    assert _sig(merge_rotations(ops)) == _sig(ops)


def test_different_axes_do_not_merge():
    ops = [GateOp("rx", (0,), (0.3,)), GateOp("ry", (0,), (0.4,))]
    assert _sig(merge_rotations(ops)) == _sig(ops)


def test_opposite_angles_delete_both():
    ops = [GateOp("rx", (2,), (1.25,)), GateOp("rx", (2,), (-1.25,))]
    assert merge_rotations(ops) == []


def test_chain_of_rotations_folds_left():
    ops = [GateOp("ry", (0,), (0.1,), line=i + 1) for i in range(5)]
    out = merge_rotations(ops)
    assert len(out) == 1
    assert abs(out[0].params[0] - 0.5) < 1e-12
    assert out[0].line == 1


def test_merge_sum_wraps_into_normalized_range():
    ops = [GateOp("rz", (0,), (3 * math.pi,)), GateOp("rz", (0,), (3 * math.pi,))]
    out = merge_rotations(ops)
    assert len(out) == 1
    assert abs(out[0].params[0] - 2 * math.pi) < 1e-12


def test_full_period_sums_cancel():
    ops = [GateOp("rz", (0,), (2 * math.pi,)), GateOp("rz", (0,), (2 * math.pi,))]
    assert merge_rotations(ops) == []


def test_per_wire_streams_merge_independently():
    ops = [
        GateOp("rx", (0,), (0.2,)),
        GateOp("rx", (1,), (0.5,)),
        GateOp("rx", (0,), (0.3,)),
        GateOp("rx", (1,), (0.6,)),
    ]
    out = merge_rotations(ops)
    assert _sig(out) == [("rx", (0,), (0.5,)), ("rx", (1,), (1.1,))]


# --- normalize_angle ---


def test_normalize_angle_range_and_congruence():
    rng = rng_from_seed(77)
    for _ in range(500):
        u, rng = next_u64(rng)
        angle = (u / 2**64) * 40 - 20
        a = normalize_angle(angle)
        assert -2 * math.pi < a <= 2 * math.pi
        # Same rotation matrix: angles agree modulo 4 pi.
        k = (angle - a) / (4 * math.pi)
        assert abs(k - round(k)) < 1e-9, angle


def test_normalize_angle_edge_cases():
    assert normalize_angle(0.0) == 0.0
    assert abs(normalize_angle(2 * math.pi) - 2 * math.pi) < 1e-15
    assert abs(normalize_angle(-2 * math.pi) - 2 * math.pi) < 1e-12
    assert abs(normalize_angle(4 * math.pi)) < 1e-12
    assert abs(normalize_angle(-math.pi) + math.pi) < 1e-12


# --- shared properties ---


def _random_rotation_heavy(rng, n, depth):
    names = ["rx", "ry", "rz", "rz", "rx", "h", "x", "cnot", "s"]
    return oracles.random_ops(rng, n, depth, names=names)


@pytest.mark.parametrize("tname", sorted(TRANSFORMS))
def test_transform_properties(tname):
    transform = TRANSFORMS[tname]
    rng = rng_from_seed(sum(ord(c) for c in tname))
    for trial in range(60):
        u, rng = next_u64(rng)
        n = 1 + u % 3
        ops, rng = _random_rotation_heavy(rng, n, 14)
        out = transform(ops)
        # No growth, idempotent, and the exact unitary survives.
        assert len(out) <= len(ops), f"trial {trial}"
        assert _sig(transform(out)) == _sig(out), f"trial {trial}"
        before = oracles.circuit_unitary(n, ops)
        after = oracles.circuit_unitary(n, out)
        assert np.max(np.abs(before - after)) < 1e-9, f"trial {trial}"


def test_chain_preserves_unitary_and_reports_stages():
    rng = rng_from_seed(88)
    for trial in range(30):
        ops, rng = _random_rotation_heavy(rng, 2, 12)
        stages = apply_chain(ops, ["cancel_inverses", "merge_rotations"])
        assert [name for name, _ in stages] == ["cancel_inverses", "merge_rotations"]
        ref = oracles.circuit_unitary(2, ops)
        current = ops
        for name, out in stages:
            assert np.max(np.abs(oracles.circuit_unitary(2, out) - ref)) < 1e-9
            assert len(out) <= len(current), (trial, name)
            current = out


def test_chain_applies_in_listed_order():
    # cancel first leaves nothing for merge; merge first still cancels after.
    ops = [
        GateOp("rx", (0,), (0.4,)),
        GateOp("rx", (0,), (-0.4,)),
        GateOp("h", (0,)),
        GateOp("h", (0,)),
    ]
    stages = apply_chain(ops, ["merge_rotations", "cancel_inverses"])
    assert len(stages[0][1]) == 2  # rotations deleted, h pair left
    assert stages[1][1] == []


def test_unknown_transform_name():
    with pytest.raises(ValueError, match="unknown transform 'fuse'"):
        apply_chain([], ["fuse"])


def test_empty_input():
    assert cancel_inverses([]) == []
    assert merge_rotations([]) == []
