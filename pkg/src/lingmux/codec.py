"""Bit-exact microframe payload codecs with event embedding.

Payload layout: complete rounds in order, then the partial round; inside a
round the ``r`` root bits (least-significant first) precede the ``b`` affix
bits; the ``s`` spare bits trail the payload.  Payload bit ``i`` is bit ``i``
of the integer returned by :func:`encode_payload`, and byte ``i // 8``, bit
``i % 8`` of the hex wire form.

Three event modes:

* ``SPARE_STAMP``: a presence bit plus the event position fill the spare bits.
* ``SAVE_BOX``: an event unit is inserted at its octet slot, shifting the
  stream; the unit pushed off the end is kept in a 10-bit box in the spare bits.
* ``INTEGRAL_UNIT``: the stream carries one extra unit slot; an event unit is
  inserted and shifts later units into it, otherwise the slot holds filler 0.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from .engine import NonNativeError, RoundCodeword, decode_round, encode_round
from .model import (
    BUILTIN_PROFILES,
    N_DATA,
    Alphabet,
    AlphabetError,
    Kind,
    LingmuxError,
    Profile,
    TransferUnit,
    UnassignedValueError,
    unit_value,
    value_unit,
)
from .plan import MuxConfig, configure


class CodecError(LingmuxError, ValueError):
    """Payload or duty cannot be encoded/decoded under the plan."""


class NonNativeRootError(CodecError):
    def __init__(self, round_index: int, root: int):
        self.round_index = round_index
        self.root = root
        super().__init__(f"round {round_index}: root {root} is not a native sample")


class Mode(enum.Enum):
    SPARE_STAMP = "spare-stamp"
    SAVE_BOX = "save-box"
    INTEGRAL_UNIT = "integral-unit"


SAVE_BOX_BITS = 10


@dataclass(frozen=True)
class EventStamp:
    """Event of one frame; ``position`` is ``None`` when no event occurred.

    In the unit modes the position is ``m * n_event + p`` for octet slot ``m``
    and sub-octet position ``p``.
    """

    position: Optional[int] = None

    @property
    def present(self) -> bool:
        return self.position is not None


NO_EVENT = EventStamp()


def pack_stamp(s: int, stamp: EventStamp) -> int:
    """Spare field of ``s`` bits: bit 0 is presence, bits 1.. the position."""
    if s < 1:
        raise CodecError("a spare stamp needs at least one bit")
    if not stamp.present:
        return 0
    if not 0 <= stamp.position < 1 << (s - 1):
        raise CodecError(f"event position {stamp.position} does not fit {s - 1} bits")
    return 1 | stamp.position << 1


def unpack_stamp(s: int, bits: int) -> EventStamp:
    if not 0 <= bits < 1 << s:
        raise CodecError(f"spare field {bits:#x} wider than {s} bits")
    if bits & 1:
        return EventStamp(bits >> 1)
    if bits:
        raise CodecError(f"spare field {bits:#x} has no presence bit but is not zero")
    return NO_EVENT


@dataclass(frozen=True)
class SaveBox:
    """Keeps the unit displaced from the end of the stream by an event insertion."""

    value: Optional[int] = None  # unit value; None when empty

    @property
    def occupied(self) -> bool:
        return self.value is not None

    def to_bits(self) -> int:
        if self.value is None:
            return 0
        if self.value < N_DATA:
            return 1 << 9 | self.value
        code = self.value - N_DATA
        if not 0 <= code < N_DATA:
            raise CodecError(f"save box cannot keep value {self.value}")
        return 1 << 9 | 1 << 8 | code

    @classmethod
    def from_bits(cls, bits: int) -> "SaveBox":
        if not bits >> 9 & 1:
            return cls()
        payload = bits & 0xFF
        return cls(N_DATA + payload if bits >> 8 & 1 else payload)


def insert_event_savebox(stream: Sequence[int], m: int, p: int, a: Alphabet) -> Tuple[List[int], SaveBox]:
    if not 0 <= m < len(stream):
        raise CodecError(f"event slot {m} outside 0..{len(stream) - 1}")
    if not 0 <= p < a.n_event:
        raise CodecError(f"event position {p} outside 0..{a.n_event - 1}")
    out = list(stream[:m])
    out.append(a.event_base + p)
    out.extend(stream[m:-1])
    return out, SaveBox(stream[-1])


def _find_events(stream: Sequence[int], a: Alphabet) -> List[int]:
    lo, hi = a.event_base, a.n_assigned
    return [i for i, x in enumerate(stream) if lo <= x < hi]


def extract_event_savebox(stream: Sequence[int], box: SaveBox, a: Alphabet) -> Tuple[List[int], Optional[Tuple[int, int]]]:
    where = _find_events(stream, a)
    if len(where) > 1:
        raise CodecError(f"multiple event units at slots {where}")
    if not where:
        if box.occupied:
            raise CodecError("save box is occupied but the stream carries no event")
        return list(stream), None
    if not box.occupied:
        raise CodecError("stream carries an event but the save box is empty")
    m = where[0]
    out = list(stream[:m])
    out.extend(stream[m + 1:])
    out.append(box.value)
    return out, (m, stream[m] - a.event_base)


def insert_event_integral(duty: Sequence[int], event: Optional[Tuple[int, int]], a: Alphabet) -> List[int]:
    """Extend the duty by one slot: the event unit at ``m``, or trailing filler 0."""
    if event is None:
        return list(duty) + [0]
    m, p = event
    if not 0 <= m < len(duty):
        raise CodecError(f"event slot {m} outside 0..{len(duty) - 1}")
    if not 0 <= p < a.n_event:
        raise CodecError(f"event position {p} outside 0..{a.n_event - 1}")
    out = list(duty[:m])
    out.append(a.event_base + p)
    out.extend(duty[m:])
    return out


def extract_event_integral(extended: Sequence[int], a: Alphabet) -> Tuple[List[int], Optional[Tuple[int, int]]]:
    where = _find_events(extended, a)
    if len(where) > 1:
        raise CodecError(f"multiple event units at slots {where}")
    if not where:
        # the spare slot holds filler; it has no duty meaning
        return list(extended[:-1]), None
    m = where[0]
    if m == len(extended) - 1:
        raise CodecError("event unit found in the spare slot")
    out = list(extended[:m])
    out.extend(extended[m + 1:])
    return out, (m, extended[m] - a.event_base)


@dataclass(frozen=True)
class FramePlan:
    name: str
    profile: Profile
    config: MuxConfig
    mode: Mode
    alphabet: Alphabet

    @property
    def v(self) -> int:
        return self.profile.v

    @property
    def n_p(self) -> int:
        return self.profile.n_p

    @property
    def s(self) -> int:
        return self.config.s

    @property
    def spare_offset(self) -> int:
        return self.v - self.s

    @cached_property
    def rounds(self) -> List[Tuple[int, int, int, int]]:
        """``(first unit, unit count, bit offset, root width)`` per round."""
        c = self.config
        out = [(i * c.n_e, c.n_e, i * c.t, c.r) for i in range(c.k)]
        if c.k_partial:
            out.append((c.k * c.n_e, c.n_e_partial, c.k * c.t, c.r_partial))
        return out

    @property
    def event_range(self) -> int:
        """Number of distinct event positions the mode can carry."""
        if self.mode is Mode.SPARE_STAMP:
            return 1 << (self.s - 1)
        return self.n_p * self.alphabet.n_event

    def root_bit(self, round_index: int, i: int) -> int:
        _, _, offset, r = self.rounds[round_index]
        if not 0 <= i < r:
            raise IndexError(i)
        return offset + i

    def affix_bit(self, round_index: int, i: int) -> int:
        _, count, offset, r = self.rounds[round_index]
        if not 0 <= i < count * self.alphabet.affix_width:
            raise IndexError(i)
        return offset + r + i

    def spare_bit(self, i: int) -> int:
        if not 0 <= i < self.s:
            raise IndexError(i)
        return self.spare_offset + i

    def audit(self) -> None:
        """Check that the layout hits every payload bit exactly once."""
        hits = np.zeros(self.v, dtype=np.int64)
        w = self.alphabet.affix_width
        for idx, (_, count, _, r) in enumerate(self.rounds):
            hits[[self.root_bit(idx, i) for i in range(r)]] += 1
            hits[[self.affix_bit(idx, i) for i in range(count * w)]] += 1
        hits[[self.spare_bit(i) for i in range(self.s)]] += 1
        if not np.all(hits == 1):
            bad = np.flatnonzero(hits != 1)
            raise CodecError(f"plan {self.name}: layout is not a bijection (first bad bit {bad[0]})")

    def split_event(self, stamp: EventStamp) -> Optional[Tuple[int, int]]:
        """``(m, p)`` of a unit-mode event."""
        if not stamp.present:
            return None
        if not 0 <= stamp.position < self.event_range:
            raise CodecError(f"event position {stamp.position} outside 0..{self.event_range - 1}")
        return divmod(stamp.position, self.alphabet.n_event)

    def unit_event(self, m: int, p: int) -> EventStamp:
        if not (0 <= m < self.n_p and 0 <= p < self.alphabet.n_event):
            raise CodecError(f"event ({m}, {p}) out of range")
        return EventStamp(m * self.alphabet.n_event + p)


def build_plan(profile: Profile, config: MuxConfig, mode: Mode, alphabet: Alphabet,
               name: Optional[str] = None) -> FramePlan:
    if config.v != profile.v or not config.budget_ok():
        raise CodecError(f"config volume {config.v} does not match profile {profile.name} ({profile.v})")
    if config.N != alphabet.N:
        raise CodecError(f"config N={config.N} but alphabet N={alphabet.N}")
    if config.g != 1:
        raise CodecError("frame codecs support only g = 1")
    stream_len = profile.n_p + (1 if mode is Mode.INTEGRAL_UNIT else 0)
    if config.target_np != stream_len:
        raise CodecError(f"mode {mode.value} needs a stream of {stream_len} units, config covers {config.target_np}")
    if mode is Mode.SPARE_STAMP and config.s < 1:
        raise CodecError("spare-stamp mode needs at least one spare bit")
    if mode is Mode.SAVE_BOX and config.s < SAVE_BOX_BITS:
        raise CodecError(f"save-box mode needs {SAVE_BOX_BITS} spare bits, config has {config.s}")
    if mode is not Mode.SPARE_STAMP and alphabet.n_event < 1:
        raise CodecError(f"mode {mode.value} needs event codes in the alphabet")
    plan = FramePlan(name or profile.name, profile, config, mode, alphabet)
    plan.audit()
    return plan


def _builtin(name: str) -> FramePlan:
    if name == "t1-1000":
        prof, N, n_e, mode, n_event = BUILTIN_PROFILES["T1_1000"], 264, 18, Mode.SPARE_STAMP, 0
    elif name == "t-10g":
        prof, N, n_e, mode, n_event = BUILTIN_PROFILES["T_10G"], 272, 10, Mode.SAVE_BOX, 8
    elif name == "kr-10g":
        prof, N, n_e, mode, n_event = BUILTIN_PROFILES["KR_10G"], 272, 11, Mode.INTEGRAL_UNIT, 8
    else:
        raise KeyError(name)
    target = prof.n_p + (1 if mode is Mode.INTEGRAL_UNIT else 0)
    config = configure(prof.v, N, 1, 1, n_e, target)
    return build_plan(prof, config, mode, Alphabet(N, n_event=n_event), name)


PLAN_NAMES = ("t1-1000", "t-10g", "kr-10g")
_PLANS: Dict[str, FramePlan] = {}


def get_plan(name: str) -> FramePlan:
    if name not in _PLANS:
        try:
            _PLANS[name] = _builtin(name)
        except KeyError:
            raise KeyError(f"unknown plan {name!r}; choose from {', '.join(PLAN_NAMES)}") from None
    return _PLANS[name]


def _check_duty(plan: FramePlan, values: Sequence[int]) -> None:
    if len(values) != plan.n_p:
        raise CodecError(f"duty carries {len(values)} units, plan {plan.name} needs {plan.n_p}")
    limit = plan.alphabet.event_base
    if values and (min(values) < 0 or max(values) >= limit):
        i, x = next((i, x) for i, x in enumerate(values) if not 0 <= x < limit)
        raise CodecError(f"duty unit {i}: value {x} is not data or control")


def encode_payload(plan: FramePlan, values: Sequence[int], event: EventStamp = NO_EVENT) -> int:
    """Encode duty unit values (plus event) into the payload integer."""
    _check_duty(plan, values)
    a = plan.alphabet
    spare = 0
    if plan.mode is Mode.SPARE_STAMP:
        stream = values
        spare = pack_stamp(plan.s, event)
    elif plan.mode is Mode.SAVE_BOX:
        mp = plan.split_event(event)
        if mp is None:
            stream = values
        else:
            stream, box = insert_event_savebox(values, mp[0], mp[1], a)
            spare = box.to_bits()
    else:
        stream = insert_event_integral(values, plan.split_event(event), a)

    payload = 0
    for first, count, offset, r in plan.rounds:
        cw = encode_round(stream[first:first + count], a)
        payload |= (cw.root | cw.affix << r) << offset
    return payload | spare << plan.spare_offset


class DecodedFrame(NamedTuple):
    values: List[int]
    event: EventStamp
    spare: int


def decode_payload(plan: FramePlan, payload: int) -> DecodedFrame:
    if not 0 <= payload < 1 << plan.v:
        raise CodecError(f"payload wider than {plan.v} bits")
    a = plan.alphabet
    w = a.affix_width
    stream: List[int] = []
    for idx, (first, count, offset, r) in enumerate(plan.rounds):
        word = payload >> offset
        cw = RoundCodeword(word & ((1 << r) - 1), (word >> r) & ((1 << (count * w)) - 1), count, w)
        try:
            stream.extend(decode_round(cw, a))
        except NonNativeError:
            raise NonNativeRootError(idx, cw.root) from None
    spare = payload >> plan.spare_offset
    limit = a.n_assigned
    if max(stream) >= limit:
        i, x = next((i, x) for i, x in enumerate(stream) if x >= limit)
        raise CodecError(f"unit {i}: {UnassignedValueError(x, a)}")

    if plan.mode is Mode.SPARE_STAMP:
        values, event = stream, unpack_stamp(plan.s, spare)
    elif plan.mode is Mode.SAVE_BOX:
        if spare >> SAVE_BOX_BITS:
            raise CodecError(f"spare bits above the save box are set ({spare:#x})")
        values, mp = extract_event_savebox(stream, SaveBox.from_bits(spare), a)
        event = NO_EVENT if mp is None else plan.unit_event(*mp)
    else:
        values, mp = extract_event_integral(stream, a)
        event = NO_EVENT if mp is None else plan.unit_event(*mp)
    limit = a.event_base
    if max(values) >= limit:
        i, x = next((i, x) for i, x in enumerate(values) if x >= limit)
        raise CodecError(f"duty unit {i}: value {x} is not data or control")
    return DecodedFrame(values, event, spare)


def payload_to_bits(payload: int, v: int) -> np.ndarray:
    raw = np.frombuffer(payload.to_bytes((v + 7) // 8, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:v]


def bits_to_payload(bits: np.ndarray) -> int:
    bits = np.asarray(bits, dtype=np.uint8)
    if bits.ndim != 1 or np.any(bits > 1):
        raise CodecError("payload bit vector must be a 1-D array of 0/1")
    return int.from_bytes(np.packbits(bits, bitorder="little").tobytes(), "little")


def payload_to_hex(payload: int, v: int) -> str:
    return payload.to_bytes((v + 7) // 8, "little").hex()


def hex_to_payload(text: str, v: int) -> int:
    text = text.strip()
    nbytes = (v + 7) // 8
    if len(text) != 2 * nbytes:
        raise CodecError(f"payload hex must be {2 * nbytes} digits for v={v}, got {len(text)}")
    try:
        payload = int.from_bytes(bytes.fromhex(text), "little")
    except ValueError as exc:
        raise CodecError(f"malformed payload hex: {exc}") from None
    if payload >> v:
        raise CodecError(f"padding bits above bit {v - 1} are set")
    return payload


def duty_to_values(duty: Sequence[TransferUnit], a: Alphabet) -> List[int]:
    out = []
    for i, u in enumerate(duty):
        if u.kind not in (Kind.DATA, Kind.CTRL):
            raise CodecError(f"duty unit {i}: {u.kind.value} units are not allowed in the duty")
        try:
            out.append(unit_value(u, a))
        except AlphabetError as exc:
            raise CodecError(f"duty unit {i}: {exc}") from None
    return out


def encode_frame(plan: FramePlan, duty: Sequence[TransferUnit], event: EventStamp = NO_EVENT) -> np.ndarray:
    """Encode a duty of transfer units into the ``v``-bit payload vector."""
    return payload_to_bits(encode_payload(plan, duty_to_values(duty, plan.alphabet), event), plan.v)


def decode_frame(plan: FramePlan, bits: np.ndarray) -> Tuple[List[TransferUnit], EventStamp, int]:
    if len(bits) != plan.v:
        raise CodecError(f"payload has {len(bits)} bits, plan {plan.name} needs {plan.v}")
    values, event, spare = decode_payload(plan, bits_to_payload(bits))
    return [value_unit(x, plan.alphabet) for x in values], event, spare
