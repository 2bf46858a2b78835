"""Mixed-radix round representation over arbitrary-precision integers.

Every unit value ``u`` splits into a root digit ``u // N_b`` (base ``N_r``)
and an affix group ``u % N_b`` (``log2 N_b`` raw bits).  A round packs the
root digits into one wide integer and concatenates the affix groups.  Unit
0 is the least-significant digit and the first affix group; affix groups
are little-endian.  Python ``int`` is the wide integer type, so all
feasibility decisions are exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence

from .model import Alphabet, LingmuxError


class NonNativeError(LingmuxError, ValueError):
    """A root is not below ``N_r ** count`` and so encodes no unit tuple."""


def min_bits_for(N_r: int, count: int) -> int:
    """Smallest ``r`` with ``N_r ** count <= 2 ** r``."""
    if N_r < 1 or count < 0:
        raise ValueError(f"need N_r >= 1 and count >= 0, got {N_r}, {count}")
    # (x - 1).bit_length() is the least r with x <= 2**r
    return (N_r**count - 1).bit_length()


@dataclass(frozen=True)
class RoundCodeword:
    root: int
    affix: int  # count * affix_width bits, unit 0 in the low bits
    count: int
    affix_width: int

    @property
    def affix_bits(self) -> List[int]:
        return [(self.affix >> i) & 1 for i in range(self.count * self.affix_width)]


def _check_values(units: Sequence[int], N: int) -> None:
    if units and (min(units) < 0 or max(units) >= N):
        j, u = next((j, u) for j, u in enumerate(units) if not 0 <= u < N)
        raise ValueError(f"unit {j}: value {u} outside 0..{N - 1}")


def encode_round(units: Sequence[int], a: Alphabet) -> RoundCodeword:
    _check_values(units, a.N)
    N_r, N_b, w = a.N_r, a.N_b, a.affix_width
    root = 0
    for u in reversed(units):
        root = root * N_r + u // N_b
    affix = 0
    mask = N_b - 1
    for j, u in enumerate(units):
        affix |= (u & mask) << (j * w)
    return RoundCodeword(root, affix, len(units), w)


def decode_round(c: RoundCodeword, a: Alphabet) -> List[int]:
    N_r, N_b, w = a.N_r, a.N_b, a.affix_width
    if c.affix_width != w:
        raise ValueError(f"affix width {c.affix_width} does not match alphabet ({w})")
    if not 0 <= c.root < N_r**c.count:
        raise NonNativeError(f"root {c.root} is not below {N_r}**{c.count}")
    if not 0 <= c.affix < 1 << (c.count * w):
        raise ValueError(f"affix {c.affix} wider than {c.count * w} bits")
    root, affix, mask = c.root, c.affix, N_b - 1
    out = [0] * c.count
    for j in range(c.count):
        root, digit = divmod(root, N_r)
        out[j] = digit * N_b + (affix >> (j * w) & mask)
    return out


def echo_sample(units: Sequence[int], a: Alphabet) -> int:
    """Plain base-``N`` weighting of a unit tuple: ``sum u_j * N**j``."""
    _check_values(units, a.N)
    echo = 0
    for u in reversed(units):
        echo = echo * a.N + u
    return echo
