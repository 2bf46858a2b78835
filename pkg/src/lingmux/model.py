"""Transfer-unit alphabets, unit values and PHY payload profiles.

A transfer unit carries one of ``N`` items.  The first 256 items are data
octets, then come ``n_ctrl`` control codes, then ``n_event`` event position
codes; anything above that is unassigned.  ``N`` splits into an odd root
modulus and a power-of-two affix modulus, ``N = N_r * N_b``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, Optional, Tuple

N_DATA = 256


class LingmuxError(Exception):
    """Base class for every error raised by this package."""


class AlphabetError(LingmuxError, ValueError):
    """A unit or value does not fit the alphabet."""


class UnassignedValueError(AlphabetError):
    def __init__(self, value: int, alphabet: "Alphabet"):
        self.value = value
        super().__init__(
            f"value {value} is unassigned in N={alphabet.N} "
            f"(assigned values end at {alphabet.n_assigned - 1})"
        )


def decompose(N: int) -> Tuple[int, int]:
    """Split ``N`` into ``(N_r, N_b)``: odd part and largest power-of-two divisor.

    >>> decompose(264)
    (33, 8)
    """
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    N_b = N & -N
    return N // N_b, N_b


class Kind(enum.Enum):
    DATA = "data"
    CTRL = "ctrl"
    EVENT = "event"
    FILLER = "filler"


@dataclass(frozen=True)
class TransferUnit:
    kind: Kind
    payload: Optional[int] = None

    @classmethod
    def data(cls, octet: int) -> "TransferUnit":
        return cls(Kind.DATA, octet)

    @classmethod
    def ctrl(cls, code: int) -> "TransferUnit":
        return cls(Kind.CTRL, code)

    @classmethod
    def event(cls, position: int) -> "TransferUnit":
        return cls(Kind.EVENT, position)

    @classmethod
    def filler(cls) -> "TransferUnit":
        return cls(Kind.FILLER, None)

    def to_json(self) -> dict:
        return {"kind": self.kind.value, "value": self.payload}

    @classmethod
    def from_json(cls, record: dict) -> "TransferUnit":
        try:
            kind = Kind(record["kind"])
        except (KeyError, ValueError) as exc:
            raise AlphabetError(f"bad transfer unit record {record!r}") from exc
        value = record.get("value")
        if kind is not Kind.FILLER and not isinstance(value, int):
            raise AlphabetError(f"transfer unit record {record!r} needs an integer value")
        return cls(kind, None if kind is Kind.FILLER else value)


@dataclass(frozen=True)
class Alphabet:
    """Value space of one transfer unit.

    ``n_ctrl`` defaults to every extra item not reserved for events.
    """

    N: int
    n_ctrl: Optional[int] = None
    n_event: int = 0
    N_r: int = field(init=False)
    N_b: int = field(init=False)

    def __post_init__(self):
        if self.N < N_DATA:
            raise AlphabetError(f"N must be >= {N_DATA}, got {self.N}")
        n_extra = self.N - N_DATA
        n_ctrl = n_extra - self.n_event if self.n_ctrl is None else self.n_ctrl
        object.__setattr__(self, "n_ctrl", n_ctrl)
        if self.n_event < 0 or n_ctrl < 0 or n_ctrl + self.n_event > n_extra:
            raise AlphabetError(
                f"n_ctrl={n_ctrl} + n_event={self.n_event} exceeds N - 256 = {n_extra}"
            )
        if n_extra > 0 and n_ctrl < 1:
            raise AlphabetError("an alphabet with extra items needs at least one control code")
        N_r, N_b = decompose(self.N)
        object.__setattr__(self, "N_r", N_r)
        object.__setattr__(self, "N_b", N_b)

    @property
    def affix_width(self) -> int:
        """Bypassed bits per unit, log2(N_b)."""
        return self.N_b.bit_length() - 1

    @property
    def ctrl_base(self) -> int:
        return N_DATA

    @property
    def event_base(self) -> int:
        return N_DATA + self.n_ctrl

    @property
    def n_assigned(self) -> int:
        return N_DATA + self.n_ctrl + self.n_event

    def is_event_value(self, x: int) -> bool:
        return self.event_base <= x < self.n_assigned


def unit_value(u: TransferUnit, a: Alphabet) -> int:
    """Map a transfer unit to its integer value in ``0..N-1``."""
    if u.kind is Kind.FILLER:
        raise AlphabetError("filler units carry no value")
    p = u.payload
    if u.kind is Kind.DATA:
        limit, base = N_DATA, 0
    elif u.kind is Kind.CTRL:
        limit, base = a.n_ctrl, a.ctrl_base
    else:
        limit, base = a.n_event, a.event_base
    if not isinstance(p, int) or not 0 <= p < limit:
        raise AlphabetError(f"{u.kind.value} payload {p!r} outside 0..{limit - 1}")
    return base + p


def value_unit(x: int, a: Alphabet) -> TransferUnit:
    """Inverse of :func:`unit_value`."""
    if not 0 <= x < a.N:
        raise AlphabetError(f"value {x} outside 0..{a.N - 1}")
    if x < N_DATA:
        return TransferUnit(Kind.DATA, x)
    if x < a.event_base:
        return TransferUnit(Kind.CTRL, x - a.ctrl_base)
    if x < a.n_assigned:
        return TransferUnit(Kind.EVENT, x - a.event_base)
    raise UnassignedValueError(x, a)


@dataclass(frozen=True)
class Profile:
    """Payload geometry and timing of one PHY microframe.

    n_p is the duty in units per frame, v the payload volume in bits.
    """

    name: str
    n_p: int
    v: int
    frame_time: float  # ns
    octet_time: int  # ps

    def __post_init__(self):
        if self.n_p < 1 or self.v < 1 or self.frame_time <= 0 or self.octet_time <= 0:
            raise ValueError(f"profile {self.name}: fields must be positive")
        if abs(self.n_p * self.octet_time - self.frame_time * 1000) >= 1:
            raise ValueError(
                f"profile {self.name}: n_p * octet_time = {self.n_p * self.octet_time} ps "
                f"but frame_time = {self.frame_time} ns"
            )

    @property
    def redundancy_bits(self) -> int:
        return self.v - 8 * self.n_p


BUILTIN_PROFILES: Dict[str, Profile] = {
    p.name: p
    for p in (
        Profile("T1_1000", 450, 3645, 3600.0, 8000),
        Profile("T_10G", 400, 3250, 320.0, 800),
        Profile("KR_10G", 256, 2080, 204.8, 800),
    )
}


def parse_profiles(lines: Iterable[str]) -> Dict[str, Profile]:
    """Parse ``name n_p v frame_time_ns octet_time_ps`` records."""
    out = {}
    for lineno, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 5:
            raise ValueError(f"line {lineno}: expected 5 fields, got {len(parts)}")
        name, n_p, v, ft, ot = parts
        try:
            out[name] = Profile(name, int(n_p), int(v), float(ft), int(ot))
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from exc
    return out


def load_profiles(path: Optional[Path] = None) -> Dict[str, Profile]:
    """Built-in catalog, overridden/extended by the records in ``path``."""
    catalog = dict(BUILTIN_PROFILES)
    if path is not None:
        with open(path, encoding="utf-8") as fh:
            catalog.update(parse_profiles(fh))
    return catalog
