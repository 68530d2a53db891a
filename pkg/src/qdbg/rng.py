"""Deterministic random stream for mid-circuit measurement outcomes.

Algorithm: splitmix64 (Steele, Lea, Flood 2014), chosen for a tiny, exactly
reproducible integer bit-stream with no platform dependence. The state is one
64-bit unsigned integer; each draw is:

    state  = (state + 0x9E3779B97F4A7C15) mod 2^64
    z      = state
    z      = ((z xor (z >> 30)) * 0xBF58476D1CE4E5B9) mod 2^64
    z      = ((z xor (z >> 27)) * 0x94D049BB133111EB) mod 2^64
    output =   z xor (z >> 31)

A uniform double in [0, 1) takes the output's top 53 bits:

    u = (output >> 11) * 2^-53

The first three outputs for seed 0 are a pinned golden value in the test
suite, as are the first uniforms for a handful of seeds; any change to this
stream is a breaking change to recorded debugging sessions.

States are immutable; every draw returns the advanced state, so callers can
replay from any point.
"""
from __future__ import annotations

from dataclasses import dataclass

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


@dataclass(frozen=True)
class RngState:
    seed: int  # current 64-bit internal state

    def __post_init__(self):
        object.__setattr__(self, "seed", self.seed & _MASK)


def rng_from_seed(seed: int) -> RngState:
    return RngState(seed)


def next_u64(rng: RngState) -> tuple[int, RngState]:
    state = (rng.seed + _GAMMA) & _MASK
    z = state
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK
    z = z ^ (z >> 31)
    return z, RngState(state)


def next_uniform(rng: RngState) -> tuple[float, RngState]:
    z, rng = next_u64(rng)
    return (z >> 11) * 2.0**-53, rng
