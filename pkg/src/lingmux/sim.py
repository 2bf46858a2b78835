"""Deterministic encode/decode simulation over seeded random duty streams.

Randomness comes from SplitMix64 so a seed reproduces the same frames on
every platform.  Output ``i`` of a generator seeded with ``x`` is
``mix(x + (i + 1) * GAMMA)``, which lets whole blocks be drawn with numpy.
"""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass
from typing import List, Optional, Tuple

import numpy as np

from .codec import NO_EVENT, CodecError, EventStamp, FramePlan, decode_payload, encode_payload, get_plan
from .model import N_DATA

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15


def splitmix64_mix(z: int) -> int:
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next(self) -> int:
        self.state = (self.state + GAMMA) & MASK64
        return splitmix64_mix(self.state)

    def block(self, n: int) -> np.ndarray:
        """Next ``n`` outputs as a uint64 array (same values as ``n`` calls to :meth:`next`)."""
        steps = np.arange(1, n + 1, dtype=np.uint64)
        with np.errstate(over="ignore"):
            z = np.uint64(self.state) + steps * np.uint64(GAMMA)
            z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
            z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        self.state = (self.state + n * GAMMA) & MASK64
        return z ^ (z >> np.uint64(31))

    def below(self, n: int) -> int:
        """Uniform integer in ``0..n-1`` (multiply-shift reduction)."""
        return (self.next() * n) >> 64

    def chance(self, p: float) -> bool:
        return (self.next() >> 11) < p * (1 << 53)


@dataclass(frozen=True)
class StreamSpec:
    seed: int
    length: int
    ctrl_density: float = 0.01
    n_ctrl: int = 1

    def __post_init__(self):
        if not 0.0 <= self.ctrl_density <= 1.0:
            raise ValueError("ctrl_density must lie in [0, 1]")
        if self.length < 0 or (self.ctrl_density > 0 and self.n_ctrl < 1):
            raise ValueError("need length >= 0 and n_ctrl >= 1 when controls are drawn")


def duty_values(rng: SplitMix64, spec: StreamSpec) -> np.ndarray:
    """One frame of unit values: data octets with uniformly drawn control codes mixed in."""
    draws = rng.block(2 * spec.length)
    pick, payload = draws[0::2], draws[1::2]
    threshold = np.uint64(int(spec.ctrl_density * (1 << 53)))
    is_ctrl = (pick >> np.uint64(11)) < threshold
    codes = N_DATA + (payload % np.uint64(max(spec.n_ctrl, 1))).astype(np.int64)
    data = (payload & np.uint64(0xFF)).astype(np.int64)
    return np.where(is_ctrl, codes, data)


def generate_stream(spec: StreamSpec) -> List[int]:
    return duty_values(SplitMix64(spec.seed), spec).tolist()


@dataclass
class SimReport:
    seed: int
    plan: str
    frames: int
    roundtrip_failures: int
    event_failures: int
    spare_utilization: float
    wall_time: float = 0.0

    @property
    def failures(self) -> int:
        return self.roundtrip_failures + self.event_failures

    def to_json(self, timing: bool = False) -> str:
        d = asdict(self)
        if not timing:
            del d["wall_time"]
        return json.dumps(d, sort_keys=True)


def draw_event(rng: SplitMix64, plan: FramePlan, event_rate: float) -> EventStamp:
    if not rng.chance(event_rate):
        return NO_EVENT
    return EventStamp(rng.below(plan.event_range))


def roundtrip(plan: FramePlan, values: List[int], event: EventStamp) -> Tuple[bool, bool, int]:
    """``(duty ok, event ok, spare bits set)`` for one encode/decode pass."""
    try:
        got = decode_payload(plan, encode_payload(plan, values, event))
    except CodecError:
        return False, False, 0
    return got.values == values, got.event == event, bin(got.spare).count("1")


def simulate(plan: FramePlan | str, frames: int, event_rate: float = 1.0, seed: int = 1,
             ctrl_density: float = 0.01) -> SimReport:
    if isinstance(plan, str):
        plan = get_plan(plan)
    if frames < 0 or not 0.0 <= event_rate <= 1.0:
        raise ValueError("need frames >= 0 and event_rate in [0, 1]")
    spec = StreamSpec(seed, plan.n_p, ctrl_density, plan.alphabet.n_ctrl)
    rng = SplitMix64(seed)
    bad_duty = bad_event = spare_ones = 0
    start = time.perf_counter()
    for _ in range(frames):
        values = duty_values(rng, spec).tolist()
        event = draw_event(rng, plan, event_rate)
        ok_duty, ok_event, ones = roundtrip(plan, values, event)
        bad_duty += not ok_duty
        bad_event += not ok_event
        spare_ones += ones
    elapsed = time.perf_counter() - start
    util = spare_ones / (frames * plan.s) if frames and plan.s else 0.0
    return SimReport(seed, plan.name, frames, bad_duty, bad_event, round(util, 6), elapsed)
