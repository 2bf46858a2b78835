"""Spare-bit search, multiplexing configurator and budget calculators.

Capacity tests compare ``N_r ** count`` against ``2 ** r`` with Python
integers.  The logarithmic ratio ``C_r : M_r`` is only computed for
display.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .engine import min_bits_for
from .model import N_DATA, LingmuxError, decompose


class ConfigError(LingmuxError, ValueError):
    """A multiplexing configuration cannot be built."""


class CapacityError(ConfigError):
    """Root digits of a round do not fit its representation bits."""


class NegativeSpareError(ConfigError):
    """Rounds need more bits than the payload volume."""


class GatheringError(ConfigError):
    """A round scope is not a multiple of the gathering factor."""


def n_upper(v: int, n_p: int) -> int:
    """Largest ``N`` with ``N ** n_p <= 2 ** v``."""
    if n_p < 1:
        raise ValueError("n_p must be >= 1")
    limit = 1 << v
    lo = 1 << (v // n_p)  # lo ** n_p <= 2 ** v
    hi = lo * 2  # hi ** n_p > 2 ** v
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if mid**n_p <= limit:
            lo = mid
        else:
            hi = mid
    return lo


def divisors(n: int) -> List[int]:
    if n < 1:
        raise ValueError("n must be >= 1")
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def alu_width(r: int) -> int:
    """Smallest power of two >= max(r, 8)."""
    if r < 0:
        raise ValueError("r must be >= 0")
    return 1 << (max(r, 8) - 1).bit_length()


def alu_class(r: int) -> str:
    w = alu_width(r)
    return f"U{w}" if w <= 1024 else ">U1024"


def capacity_ratio(r: int, count: int, N_r: int) -> float:
    """``C_r : M_r``, i.e. ``r * ln2 / (count * ln N - b * ln2)``."""
    m = count * math.log2(N_r)
    return math.inf if m == 0 else r / m


@dataclass(frozen=True)
class SearchRow:
    n_e: int
    N: int
    N_r: int
    N_b: int
    k: int
    t: int
    b: int
    r: int
    s: int
    ratio: float
    feasible: bool

    @property
    def alu(self) -> str:
        return alu_class(self.r)

    @property
    def w(self) -> int:
        return alu_width(self.r)

    def budget_ok(self, v: int) -> bool:
        return self.k * self.t + self.s == v


def search(
    v: int,
    n_p: int,
    enumerate_t: bool = False,
    moduli: Optional[Iterable[int]] = None,
) -> List[SearchRow]:
    """Walk every divisor ``n_e`` of ``n_p`` and every ``N`` in ``257..n_upper``.

    Feasible rows sit at the minimal ``t``; with ``enumerate_t`` one row is
    emitted per ``t`` up to the per-round budget ``v // k``.  Infeasible rows
    carry the budget-limited ``r`` and a sub-unity ratio.  ``moduli``
    restricts the ``N`` axis.
    """
    if n_p < 1 or v < 8 * n_p:
        raise ValueError(f"need n_p >= 1 and v >= 8*n_p, got v={v}, n_p={n_p}")
    top = n_upper(v, n_p)
    Ns = range(N_DATA + 1, top + 1)
    if moduli is not None:
        wanted = set(moduli)
        Ns = [N for N in Ns if N in wanted]
    rows = []
    for n_e in divisors(n_p):
        k = n_p // n_e
        t_budget = v // k
        for N in Ns:
            N_r, N_b = decompose(N)
            b = n_e * (N_b.bit_length() - 1)
            t_min = b + min_bits_for(N_r, n_e)
            if t_min > t_budget:
                r = t_budget - b
                rows.append(
                    SearchRow(n_e, N, N_r, N_b, k, t_budget, b, r, v - k * t_budget,
                              capacity_ratio(r, n_e, N_r), False)
                )
                continue
            for t in range(t_min, t_budget + 1 if enumerate_t else t_min + 1):
                r = t - b
                rows.append(
                    SearchRow(n_e, N, N_r, N_b, k, t, b, r, v - k * t,
                              capacity_ratio(r, n_e, N_r), True)
                )
    rows.sort(key=lambda row: (row.n_e, -row.N, row.t))
    return rows


_BEST_KEYS = {
    "s": lambda row: (-row.s, -row.N, -row.b, row.r, row.w),
    "N": lambda row: (-row.N, -row.s, -row.b, row.r, row.w),
    "w": lambda row: (-row.b, row.r, row.w, -row.s, -row.N),
}


def rank(rows: Iterable[SearchRow], best: str = "s") -> List[SearchRow]:
    """Feasible rows ordered by the BEST-s, BEST-N or BEST-w preference."""
    try:
        key = _BEST_KEYS[best]
    except KeyError:
        raise ValueError(f"best must be one of {sorted(_BEST_KEYS)}, got {best!r}") from None
    return sorted((row for row in rows if row.feasible), key=key)


def best_per_scope(rows: Iterable[SearchRow], best: str = "s") -> List[SearchRow]:
    """Top-ranked feasible row for every round scope ``n_e``."""
    picked = {}
    for row in rank(rows, best):
        picked.setdefault(row.n_e, row)
    return [picked[n_e] for n_e in sorted(picked)]


def status_labels(rows: Sequence[SearchRow]) -> Dict[Tuple[int, int, int], str]:
    """Status column keyed by ``(n_e, N, t)``; marks the BEST-s and BEST-N row of each scope."""
    best_s = {id(r) for r in best_per_scope(rows, "s") if r.s > 0}
    best_n = {id(r) for r in best_per_scope([r for r in rows if r.s > 0], "N")}
    out = {}
    for row in rows:
        if not row.feasible:
            label = "[unreachable]"
        elif row.s == 0:
            label = "no spare"
        elif id(row) in best_s and id(row) in best_n:
            label = "BEST-s/N"
        elif id(row) in best_s:
            label = "BEST-s"
        elif id(row) in best_n:
            label = "BEST-N"
        else:
            label = "spare > 0"
        out[row.n_e, row.N, row.t] = label
    return out


CSV_COLUMNS = [
    "n_e", "N=N_r×N_b", "b/n_e", "r/n_e", "Cr:Mr", "feasible",
    "t=b+r", "ALU", "k", "k·t+s=v", "status",
]


def rows_to_csv(rows: Sequence[SearchRow], v: int, labels: Optional[dict] = None) -> str:
    """Render rows in the column layout of the published search tables.

    ``labels`` (from :func:`status_labels` over the full grid) defaults to
    labels computed from ``rows`` alone.
    """
    labels = status_labels(rows) if labels is None else labels
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        status = labels[row.n_e, row.N, row.t]
        if row.feasible:
            tail = [f"{row.t}={row.b}+{row.r}", row.alu, row.k, f"{row.k * row.t}+{row.s}={v}"]
        else:
            tail = ["", "", "", ""]
        writer.writerow([
            row.n_e,
            f"{row.N}={row.N_r}×{row.N_b}",
            row.b // row.n_e,
            f"{row.r / row.n_e:.2f}",
            f"{row.ratio:.5f}",
            "yes" if row.feasible else "no",
            *tail,
            status,
        ])
    return buf.getvalue()


def rows_to_json(rows: Sequence[SearchRow], labels: Optional[dict] = None) -> str:
    labels = status_labels(rows) if labels is None else labels
    records = []
    for row in rows:
        rec = asdict(row)
        rec["ratio"] = round(row.ratio, 5)
        rec["alu"] = row.alu
        rec["status"] = labels[row.n_e, row.N, row.t]
        records.append(rec)
    return json.dumps(records, indent=1)


def max_ne(N: int, xi: int = 1, g: int = 1) -> int:
    """Largest round scope under the ``t = 8 n_e + xi`` condition.

    With gathering the condition reduces to ``N**h <= 2**(8h + xi)`` for
    ``h = n_e / g`` spans, so the answer is ``g`` times the largest such ``h``.
    """
    if N <= N_DATA:
        raise ValueError(f"N must exceed {N_DATA}; the scope is unbounded otherwise")
    if xi < 0 or g < 1:
        raise ValueError("need xi >= 0 and g >= 1")
    h, power, budget = 0, 1, 1 << xi
    while power * N <= budget << 8:
        h += 1
        power *= N
        budget <<= 8
    return g * h


@dataclass(frozen=True)
class MuxConfig:
    v: int
    N: int
    N_r: int
    N_b: int
    g: int
    xi: int
    target_np: int
    n_e: int
    k: int
    t: int
    b: int
    r: int
    n_e_partial: int
    k_partial: int
    t_partial: int
    b_partial: int
    r_partial: int
    s: int

    @property
    def w(self) -> int:
        return alu_width(max(self.r, self.r_partial))

    @property
    def alu(self) -> str:
        return alu_class(max(self.r, self.r_partial))

    def budget_ok(self) -> bool:
        return self.k * self.t + self.k_partial * self.t_partial + self.s == self.v

    def describe(self) -> str:
        text = (f"{self.target_np} = {self.n_e} × {self.k}"
                + (f" + {self.n_e_partial} × 1" if self.k_partial else "")
                + f"; t = {self.t} = {self.b} + {self.r}")
        if self.k_partial:
            text += f"; *t = {self.t_partial} = {self.b_partial} + {self.r_partial}"
        return text + f"; s = {self.s}; {self.alu}"

    def to_dict(self) -> dict:
        d = asdict(self)
        d["alu"] = self.alu
        return d


def _round_bits(N_r: int, N_b: int, g: int, xi: int, count: int) -> Tuple[int, int, int]:
    t = 8 * count + xi
    b = (count // g) * (N_b.bit_length() - 1 + 8 * (g - 1))
    return t, b, t - b


def configure(v: int, N: int, g: int, xi: int, n_e: int, target_np: int) -> MuxConfig:
    """Cover ``target_np`` units with ``k`` rounds of ``n_e`` plus one partial round.

    Checks, in order: gathering divisibility, capacity of both round kinds,
    non-negative spare.
    """
    if g < 1 or n_e < 1 or target_np < n_e:
        raise ConfigError(f"need g >= 1, n_e >= 1 and target_np >= n_e; got {g}, {n_e}, {target_np}")
    N_r, N_b = decompose(N)
    k, n_e_part = divmod(target_np, n_e)
    k_part = 1 if n_e_part else 0
    for scope, label in ((n_e, "n_e"), (n_e_part, "*n_e")):
        if scope % g:
            raise GatheringError(f"{label} = {scope} is not a multiple of g = {g}")
    t, b, r = _round_bits(N_r, N_b, g, xi, n_e)
    if k_part:
        t_p, b_p, r_p = _round_bits(N_r, N_b, g, xi, n_e_part)
    else:
        t_p = b_p = r_p = 0
    for scope, rr, label in ((n_e, r, "complete"), (n_e_part, r_p, "partial")):
        if scope and (rr < 0 or N_r ** (scope // g) > 1 << rr):
            raise CapacityError(
                f"{label} round: {N_r}**{scope // g} does not fit r = {rr} bits "
                f"(needs {min_bits_for(N_r, scope // g)})"
            )
    s = v - k * t - k_part * t_p
    if s < 0:
        raise NegativeSpareError(f"rounds need {v - s} bits but the payload holds {v}")
    return MuxConfig(v, N, N_r, N_b, g, xi, target_np, n_e, k, t, b, r,
                     n_e_part, k_part, t_p, b_p, r_p, s)


def resolution(M: int, frame_time: float) -> Tuple[float, float]:
    """Event fixation period in ps and frequency in GHz for ``M`` positions per frame."""
    if M < 1 or frame_time <= 0:
        raise ValueError("need M >= 1 and frame_time > 0")
    return frame_time * 1000.0 / M, M / frame_time


@dataclass(frozen=True)
class EchoBudget:
    total: int
    native: int
    rest: int


def echo_budget(N_r: int, count: int, r: int, b: int) -> EchoBudget:
    """Split the ``2 ** (r + b)`` sample pool into native and free samples."""
    native_roots = N_r**count
    if native_roots > 1 << r:
        raise CapacityError(f"{N_r}**{count} does not fit r = {r} bits")
    total = 1 << (r + b)
    native = native_roots << b
    return EchoBudget(total, native, total - native)


def redundancy(v: int, n_p: int) -> Fraction:
    if v < 8 * n_p:
        raise ValueError("v must be >= 8 * n_p")
    return Fraction(v - 8 * n_p, v)
