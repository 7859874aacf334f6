"""Shifted families M_n = <(n,...,n) + r_1, ..., (n,...,n) + r_k> and their shifting maps."""
from __future__ import annotations

import csv
import io
import json
import warnings
from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from math import gcd

from .core import Relation, Semigroup, evaluate, grading, length
from .presentation import analyze, default_bound


class HypothesisWarning(UserWarning):
    """A map was applied outside the range where its guarantee holds."""


class OrientationError(ValueError):
    """Offsets are in the wrong orientation class for the requested map."""


@dataclass(frozen=True)
class ShiftedFamily:
    offsets: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        offs = tuple(tuple(int(c) for c in r) for r in self.offsets)
        if not offs:
            raise ValueError("a family needs at least one offset")
        if len({len(r) for r in offs}) != 1:
            raise ValueError("offsets must share one dimension")
        if any(c < 0 for r in offs for c in r):
            raise ValueError("offsets must be nonnegative")
        object.__setattr__(self, "offsets", offs)

    @classmethod
    def numerical(cls, *offsets: int) -> ShiftedFamily:
        return cls(tuple((r,) for r in offsets))

    @property
    def dim(self) -> int:
        return len(self.offsets[0])

    @property
    def k(self) -> int:
        return len(self.offsets)

    def to_json(self) -> dict:
        return {"dim": self.dim, "offsets": [list(r) for r in self.offsets]}

    @classmethod
    def from_json(cls, obj: dict | str) -> ShiftedFamily:
        if isinstance(obj, str):
            obj = json.loads(obj)
        F = cls(tuple(tuple(r) for r in obj["offsets"]))
        if "dim" in obj and int(obj["dim"]) != F.dim:
            raise ValueError(f"declared dim {obj['dim']} but offsets have dim {F.dim}")
        return F


def instantiate(F: ShiftedFamily, n: int) -> Semigroup:
    if n < 1:
        raise ValueError(f"shift parameter must be >= 1, got {n}")
    return Semigroup(tuple(tuple(n + c for c in r) for r in F.offsets))


@dataclass(frozen=True)
class FamilyConstants:
    a1: int
    a2: int
    d1: int
    d2: int
    p: int


def family_constants(r1: Sequence[int], r2: Sequence[int]) -> FamilyConstants:
    (x1, y1), (x2, y2) = r1, r2
    a1, a2 = abs(x1 - y1), abs(x2 - y2)
    g = gcd(a1, a2)
    if g == 0:
        raise ValueError(f"both offsets {tuple(r1)}, {tuple(r2)} lie on the diagonal")
    if a1 == 0 or a2 == 0:
        raise ValueError(f"offset on the diagonal among {tuple(r1)}, {tuple(r2)} gives d = 0")
    return FamilyConstants(a1, a2, a1 // g, a2 // g, abs(x1 * y2 - y1 * x2) // g)


def classify_orientation(r1: Sequence[int], r2: Sequence[int]) -> str:
    s = (r1[0] - r1[1]) * (r2[0] - r2[1])
    if s < 0:
        return "opposite-sides"
    if s > 0:
        return "same-side"
    return "degenerate"


def _shift_relation(rel, short_gain, long_gain) -> Relation:
    z, w = rel
    lz, lw = length(z), length(w)
    ell = abs(lz - lw)
    if ell == 0:
        return Relation(tuple(z), tuple(w))

    def add(x, gain):
        return tuple(c + ell * g for c, g in zip(x, gain))

    if lz < lw:
        return Relation(add(z, short_gain), add(w, long_gain))
    return Relation(add(z, long_gain), add(w, short_gain))


def _require_kernel(S: Semigroup, rel) -> None:
    z, w = rel
    if evaluate(S, z) != evaluate(S, w):
        raise ValueError(f"{tuple(rel)} is not a relation of {S}")


def numerical_period(offsets: Sequence[int]) -> int:
    return offsets[-1] - offsets[0]


def phi_hypothesis_met(offsets: Sequence[int], n: int) -> bool:
    return n > numerical_period(offsets) ** 2


def phi_map(rel, offsets: Sequence[int], n: int) -> Relation:
    """Shift a relation of <n + r_1, ..., n + r_k> to one of the family at n + p.

    The shorter side gains l*e_k and the longer side l*e_1, l the length gap.
    Offsets must be sorted ascending; p = r_k - r_1.
    """
    offsets = [int(r) for r in offsets]
    if list(offsets) != sorted(offsets):
        raise ValueError("numerical offsets must be sorted ascending")
    p = numerical_period(offsets)
    if p <= 0:
        raise ValueError("need r_k > r_1")
    _require_kernel(instantiate(ShiftedFamily.numerical(*offsets), n), rel)
    if not phi_hypothesis_met(offsets, n):
        warnings.warn(f"n = {n} <= p^2 = {p * p}; minimality is not guaranteed", HypothesisWarning)
    k = len(offsets)
    last = tuple(int(i == k - 1) for i in range(k))
    first = tuple(int(i == 0) for i in range(k))
    return _shift_relation(rel, last, first)


def _family3(r1, r2) -> ShiftedFamily:
    return ShiftedFamily(((0, 0), tuple(r1), tuple(r2)))


def psi_map(rel, r1: Sequence[int], r2: Sequence[int], n: int) -> Relation:
    """Shift a relation of <N, N + r_1, N + r_2> (offsets on opposite sides) to n + p."""
    if (r1[0] - r1[1]) * (r2[0] - r2[1]) > 0:
        raise OrientationError("psi_map needs offsets on opposite sides of the diagonal")
    c = family_constants(r1, r2)
    _require_kernel(instantiate(_family3(r1, r2), n), rel)
    return _shift_relation(rel, (0, c.d2, c.d1), (c.d1 + c.d2, 0, 0))


def _same_side_gains(r1, r2) -> tuple[tuple[int, int, int], tuple[int, int, int]]:
    # Per unit of length gap: the e1/e2 difference solves delta_1 r1 + delta_2 r2 = p (1, 1),
    # and e0 absorbs whatever keeps the gap unchanged.
    (x1, y1), (x2, y2) = r1, r2
    det = x1 * y2 - x2 * y1
    if det == 0:
        raise ValueError(f"offsets {tuple(r1)}, {tuple(r2)} are parallel, so p = 0")
    g = gcd(abs(x1 - y1), abs(x2 - y2))
    sign = 1 if det > 0 else -1
    t1 = sign * (y2 - x2) // g
    t2 = sign * (x1 - y1) // g
    t0 = -(t1 + t2)
    short = (max(t0, 0), max(t1, 0), max(t2, 0))
    long = (max(-t0, 0), max(-t1, 0), max(-t2, 0))
    return short, long


def psi_prime_map(rel, r1: Sequence[int], r2: Sequence[int], n: int) -> Relation:
    """Shift a relation of <N, N + r_1, N + r_2> (offsets on one side) to n + p.

    When d_1 >= d_2 and x_1 y_2 > x_2 y_1 (offsets below the diagonal) the
    shorter side gains l*d_1*e_2 and the longer side l*((d_1 - d_2) e_0 + d_2 e_1).
    Other labelings use the same construction with the roles of e_0, e_1, e_2
    dictated by the signs, so the image always lies in the kernel at n + p.
    """
    if classify_orientation(r1, r2) != "same-side":
        raise OrientationError("psi_prime_map needs both offsets on the same side of the diagonal")
    family_constants(r1, r2)
    _require_kernel(instantiate(_family3(r1, r2), n), rel)
    return _shift_relation(rel, *_same_side_gains(r1, r2))


def family_period(r1: Sequence[int], r2: Sequence[int]) -> int:
    return family_constants(r1, r2).p


# Sweeps ---------------------------------------------------------------------

BoundPolicy = Callable[[ShiftedFamily, int], int]


def scaled_bound(F: ShiftedFamily, n: int) -> int:
    """max(4 g, g (n + delta)), g the top generator grading at n, delta the top offset grading.

    Minimal relations in shifted families use O(n) generators, so a fixed
    multiple of the top grading truncates them once n grows.
    """
    S = instantiate(F, n)
    g = max(S.gradings)
    delta = max(grading(r) for r in F.offsets)
    return max(4 * g, g * (n + delta))


SECTION4 = ShiftedFamily(((0, 0), (1, 3), (2, 1), (2, 4)))
SECTION5 = ShiftedFamily(((0, 0), (3, 2), (4, 3), (5, 3)))
MCNUGGET = ShiftedFamily.numerical(0, 3, 14)


def section4_elements(k: int) -> dict[str, tuple[int, int]]:
    """The elements A, B, R_0, ..., R_k for n = 6k + 1."""
    out = {
        "A": (48 * k + 18, 48 * k + 28),
        "B": (18 * k * k + 27 * k + 4,) * 2,
    }
    for i in range(k + 1):
        out[f"R{i}"] = (
            36 * k * k - 18 * i * k + 24 * k - 9 * i + 3,
            36 * k * k - 18 * i * k + 36 * k - 21 * i + 5,
        )
    return out


def section4_bound(n: int) -> int:
    """Grading of R_0 (the largest claimed Betti element) for n = 6k + 1."""
    k = (n - 1) // 6
    return 72 * k * k + 60 * k + 8


def default_policy(F: ShiftedFamily, n: int) -> int:
    bound = scaled_bound(F, n)
    if F == SECTION4 and n % 6 == 1:
        bound = max(bound, section4_bound(n))
    if F.dim == 1:
        bound = max(bound, default_bound(instantiate(F, n)))
    return bound


@dataclass(frozen=True)
class FixedBound:
    bound: int

    def __call__(self, F: ShiftedFamily, n: int) -> int:
        return self.bound


@dataclass(frozen=True)
class SweepRecord:
    n: int
    presentation_size: int
    betti_count: int
    bound_used: int
    complete_flag: str


def _sweep_one(F: ShiftedFamily, n: int, policy: BoundPolicy) -> SweepRecord:
    S = instantiate(F, n)
    bound = policy(F, n)
    report, pres = analyze(S, bound)
    return SweepRecord(n, len(pres), len(report), bound, pres.complete)


def sweep(
    F: ShiftedFamily,
    ns: Iterable[int],
    policy: BoundPolicy | None = None,
    workers: int = 1,
) -> list[SweepRecord]:
    """One record per n, in ascending n regardless of worker count."""
    ns = sorted(set(ns))
    if not ns:
        raise ValueError("empty range of n")
    policy = policy or default_policy
    if workers <= 1:
        return [_sweep_one(F, n, policy) for n in ns]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_sweep_one, [F] * len(ns), ns, [policy] * len(ns)))


SWEEP_HEADER = ["n", "presentation_size", "betti_count", "bound", "complete"]


def sweep_to_csv(records: Iterable[SweepRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_HEADER)
    for r in records:
        writer.writerow([r.n, r.presentation_size, r.betti_count, r.bound_used, r.complete_flag])
    return buf.getvalue()


def sweep_to_json(records: Iterable[SweepRecord]) -> list[dict]:
    return [
        {
            "n": r.n,
            "presentation_size": r.presentation_size,
            "betti_count": r.betti_count,
            "bound": r.bound_used,
            "complete": r.complete_flag,
        }
        for r in records
    ]


def detect_eventual_period(seq: Sequence, min_repeats: int = 3) -> tuple[int, int] | None:
    """Smallest (preperiod, period) whose periodic tail is observed at least `min_repeats` times."""
    seq = list(seq)
    if not seq:
        raise ValueError("empty sequence")
    n = len(seq)
    for pre in range(n):
        for period in range(1, (n - pre) // min_repeats + 1):
            if all(seq[i] == seq[i + period] for i in range(pre, n - period)):
                return pre, period
    return None
