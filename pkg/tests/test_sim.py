"""Statevector simulator checks against a brute-force matrix oracle."""
from __future__ import annotations

import math

import numpy as np
import pytest

from qdbg import sim
from qdbg.lang import GATE_ARITY, PAULIS, SELF_INVERSE
from qdbg.rng import next_u64, next_uniform, rng_from_seed

import oracles


def _random_circuit(rng, n, depth):
    """Random op list on n wires; returns (ops, rng)."""
    return oracles.random_ops(rng, n, depth)


def _run(n, ops):
    state = sim.init_state(n)
    for op in ops:
        state = sim.apply_gate(state, op)
    return state


# --- construction ---


def test_init_state_is_all_zeros_ket():
    state = sim.init_state(3)
    assert state.num_qubits == 3
    assert state.amplitudes.shape == (8,)
    assert state.amplitudes[0] == 1.0
    assert np.all(state.amplitudes[1:] == 0)


def test_wire_cap():
    with pytest.raises(sim.SimError, match="exceeds cap 20"):
        sim.init_state(21)
    with pytest.raises(sim.SimError, match="at least 1"):
        sim.init_state(0)


# --- gate matrices ---


def test_all_gate_matrices_unitary():
    rng = rng_from_seed(11)
    for name, (n_params, n_wires) in sorted(GATE_ARITY.items()):
        for _ in range(5):
            params = []
            for _ in range(n_params):
                u, rng = next_uniform(rng)
                params.append(8 * math.pi * u - 4 * math.pi)
            m = sim.gate_matrix(name, tuple(params))
            dim = 2**n_wires
            assert m.shape == (dim, dim)
            assert np.max(np.abs(m.conj().T @ m - np.eye(dim))) < 1e-12, name
            if n_params == 0:
                break


def test_gate_matrices_match_literal_table():
    rng = rng_from_seed(3)
    for name, (n_params, _) in sorted(GATE_ARITY.items()):
        params = []
        for _ in range(n_params):
            u, rng = next_uniform(rng)
            params.append(2 * math.pi * u - math.pi)
        ours = sim.gate_matrix(name, tuple(params))
        ref = oracles.small_matrix(name, tuple(params))
        assert np.max(np.abs(ours - ref)) < 1e-12, name


def test_rx_pi_gives_minus_i_x():
    m = sim.gate_matrix("rx", (math.pi,))
    assert np.max(np.abs(m - (-1j) * np.array([[0, 1], [1, 0]]))) < 1e-12


# --- wire ordering convention ---


def test_wire_zero_is_most_significant():
    state = sim.apply_gate(sim.init_state(2), sim.GateOp("x", (0,)))
    assert abs(state.amplitudes[2] - 1.0) < 1e-15  # |10>
    state = sim.apply_gate(sim.init_state(2), sim.GateOp("x", (1,)))
    assert abs(state.amplitudes[1] - 1.0) < 1e-15  # |01>


def test_cnot_first_wire_is_control():
    state = sim.init_state(2)
    state = sim.apply_gate(state, sim.GateOp("x", (0,)))
    state = sim.apply_gate(state, sim.GateOp("cnot", (0, 1)))
    assert abs(state.amplitudes[3] - 1.0) < 1e-15  # |11>
    # Control off: nothing happens.
    state = sim.apply_gate(sim.init_state(2), sim.GateOp("cnot", (0, 1)))
    assert abs(state.amplitudes[0] - 1.0) < 1e-15


def test_toffoli_needs_both_controls():
    for prep, target_index in [((), 0b000), ((0,), 0b100), ((1,), 0b010), ((0, 1), 0b111)]:
        state = sim.init_state(3)
        for w in prep:
            state = sim.apply_gate(state, sim.GateOp("x", (w,)))
        state = sim.apply_gate(state, sim.GateOp("toffoli", (0, 1, 2)))
        assert abs(abs(state.amplitudes[target_index]) - 1.0) < 1e-15, prep


def test_swap_exchanges_wires():
    state = sim.init_state(2)
    state = sim.apply_gate(state, sim.GateOp("x", (0,)))
    state = sim.apply_gate(state, sim.GateOp("swap", (0, 1)))
    assert abs(state.amplitudes[1] - 1.0) < 1e-15  # |01>


# --- random-circuit agreement with the oracle ---


def test_apply_gate_matches_matrix_oracle():
    rng = rng_from_seed(500)
    for trial in range(60):
        u, rng = next_u64(rng)
        n = 1 + u % 5
        ops, rng = _random_circuit(rng, n, 12)
        ours = _run(n, ops).amplitudes
        ref = oracles.run_circuit(n, ops)
        assert np.max(np.abs(ours - ref)) < 1e-10, f"trial {trial}"


def test_norm_preserved_and_self_inverse():
    rng = rng_from_seed(501)
    for trial in range(100):
        u, rng = next_u64(rng)
        n = 1 + u % 4
        ops, rng = _random_circuit(rng, n, 10)
        state = _run(n, ops)
        assert abs(np.linalg.norm(state.amplitudes) - 1.0) < 1e-12, f"trial {trial}"
        # Applying any self-inverse gate twice is the identity.
        for name in sorted(SELF_INVERSE):
            _, n_wires = GATE_ARITY[name]
            if n_wires > n:
                continue
            wires = tuple(range(n_wires))
            once = sim.apply_gate(state, sim.GateOp(name, wires))
            twice = sim.apply_gate(once, sim.GateOp(name, wires))
            assert np.max(np.abs(twice.amplitudes - state.amplitudes)) < 1e-12, name


def test_rotation_inverse_is_negated_angle():
    rng = rng_from_seed(502)
    for name in ("rx", "ry", "rz"):
        u, rng = next_uniform(rng)
        angle = 6 * u - 3
        state = _run(2, [sim.GateOp("h", (0,)), sim.GateOp("cnot", (0, 1))])
        moved = sim.apply_gate(state, sim.GateOp(name, (1,), (angle,)))
        back = sim.apply_gate(moved, sim.GateOp(name, (1,), (-angle,)))
        assert np.max(np.abs(back.amplitudes - state.amplitudes)) < 1e-12


# --- expval ---


def test_expval_bell_pairs():
    bell = _run(2, [sim.GateOp("h", (0,)), sim.GateOp("cnot", (0, 1))])
    assert abs(sim.expval(bell, sim.Observable((("Z", 0), ("Z", 1)))) - 1.0) < 1e-12
    assert abs(sim.expval(bell, sim.Observable((("X", 0), ("X", 1)))) - 1.0) < 1e-12
    assert abs(sim.expval(bell, sim.Observable((("Y", 0), ("Y", 1)))) + 1.0) < 1e-12
    assert abs(sim.expval(bell, sim.Observable((("Z", 0),)))) < 1e-12


def test_expval_after_h_then_x_is_zero():
    state = _run(1, [sim.GateOp("h", (0,)), sim.GateOp("x", (0,))])
    assert abs(sim.expval(state, sim.Observable((("Z", 0),)))) < 1e-12


def test_expval_matches_oracle_on_random_circuits():
    rng = rng_from_seed(503)
    for trial in range(50):
        u, rng = next_u64(rng)
        n = 1 + u % 4
        ops, rng = _random_circuit(rng, n, 10)
        state = _run(n, ops)
        u, rng = next_u64(rng)
        k = 1 + u % n
        wires = list(range(n))
        factors = []
        for _ in range(k):
            u, rng = next_u64(rng)
            w = wires.pop(u % len(wires))
            u, rng = next_u64(rng)
            factors.append((PAULIS[u % 3], w))
        got = sim.expval(state, sim.Observable(tuple(factors)))
        want = oracles.expval_oracle(n, state.amplitudes, factors)
        assert abs(got - want) < 1e-10, f"trial {trial} {factors}"


# --- probs ---


def test_probs_full_register_bell():
    bell = _run(2, [sim.GateOp("h", (0,)), sim.GateOp("cnot", (0, 1))])
    p = sim.probs(bell, (0, 1))
    assert np.max(np.abs(p - [0.5, 0, 0, 0.5])) < 1e-12


def test_probs_marginalizes_unlisted_wires():
    state = _run(2, [sim.GateOp("h", (0,)), sim.GateOp("x", (1,))])
    p = sim.probs(state, (0,))
    assert np.max(np.abs(p - [0.5, 0.5])) < 1e-12


def test_probs_listed_order_is_index_order():
    # |01>: wire 1 is on. probs(1, 0) puts wire 1 first, so index 10_b = 2.
    state = _run(2, [sim.GateOp("x", (1,))])
    p = sim.probs(state, (1, 0))
    assert np.max(np.abs(p - [0, 0, 1, 0])) < 1e-12


def test_probs_matches_oracle():
    rng = rng_from_seed(504)
    for trial in range(40):
        u, rng = next_u64(rng)
        n = 2 + u % 3
        ops, rng = _random_circuit(rng, n, 8)
        state = _run(n, ops)
        u, rng = next_u64(rng)
        k = 1 + u % n
        pool = list(range(n))
        wires = []
        for _ in range(k):
            u, rng = next_u64(rng)
            wires.append(pool.pop(u % len(pool)))
        got = sim.probs(state, tuple(wires))
        want = oracles.probs_oracle(n, state.amplitudes, tuple(wires))
        assert np.max(np.abs(got - want)) < 1e-10, f"trial {trial} {wires}"
        assert abs(got.sum() - 1.0) < 1e-10


# --- mid-circuit measurement ---


def test_measure_plus_state_golden():
    state = _run(1, [sim.GateOp("h", (0,))])
    bit, post, _ = sim.measure_mid(state, 0, rng_from_seed(42))
    assert bit == 0
    assert np.max(np.abs(post.amplitudes - [1, 0])) < 1e-12


def test_measure_is_deterministic_per_seed():
    for seed in range(25):
        state = _run(1, [sim.GateOp("h", (0,))])
        a = sim.measure_mid(state, 0, rng_from_seed(seed))
        b = sim.measure_mid(state, 0, rng_from_seed(seed))
        assert a[0] == b[0]
        assert np.array_equal(a[1].amplitudes, b[1].amplitudes)


def test_measure_statistics_near_half():
    ones = 0
    n_trials = 4000
    for seed in range(n_trials):
        state = _run(1, [sim.GateOp("h", (0,))])
        bit, _, _ = sim.measure_mid(state, 0, rng_from_seed(seed))
        ones += bit
    assert abs(ones / n_trials - 0.5) < 0.03


def test_measure_collapses_and_renormalizes():
    rng = rng_from_seed(505)
    for trial in range(40):
        ops, rng = _random_circuit(rng, 3, 8)
        state = _run(3, ops)
        u, rng = next_u64(rng)
        wire = u % 3
        bit, post, _ = sim.measure_mid(state, wire, rng_from_seed(trial))
        assert abs(np.linalg.norm(post.amplitudes) - 1.0) < 1e-12
        p = sim.probs(post, (wire,))
        assert abs(p[bit] - 1.0) < 1e-12
        p_ref, want = oracles.project_oracle(3, state.amplitudes, wire, bit)
        assert p_ref > 0
        assert np.max(np.abs(post.amplitudes - want)) < 1e-10, f"trial {trial}"


def test_measure_deterministic_wire():
    state = _run(2, [sim.GateOp("x", (1,))])
    for seed in (0, 1, 2, 99):
        bit, post, _ = sim.measure_mid(state, 1, rng_from_seed(seed))
        assert bit == 1
        assert np.max(np.abs(post.amplitudes - state.amplitudes)) < 1e-12


def test_measure_advances_the_rng():
    state = _run(2, [sim.GateOp("h", (0,)), sim.GateOp("h", (1,))])
    rng = rng_from_seed(9)
    _, _, rng_after = sim.measure_mid(state, 0, rng)
    assert rng_after != rng


# --- wire validation ---


def test_wire_out_of_range_message():
    state = sim.init_state(2)
    with pytest.raises(sim.SimError, match="wire 5 out of range for device with 2 wire"):
        sim.apply_gate(state, sim.GateOp("x", (5,)))
    with pytest.raises(sim.SimError):
        sim.apply_gate(state, sim.GateOp("x", (-1,)))


def test_duplicate_wires_rejected():
    state = sim.init_state(2)
    with pytest.raises(sim.SimError):
        sim.apply_gate(state, sim.GateOp("cnot", (1, 1)))
    with pytest.raises(sim.SimError):
        sim.probs(state, (0, 0))


def test_statevector_is_immutable():
    state = sim.init_state(1)
    before = state.amplitudes.copy()
    sim.apply_gate(state, sim.GateOp("h", (0,)))
    assert np.array_equal(state.amplitudes, before)
