"""Minimal presentations and Betti elements.

Searches are bounded by a grading B and say so in their results. The one
exception is a 3-generated semigroup in dimension 2 whose kernel lattice has
rank 1: there the unique minimal presentation is read off the primitive
kernel vector and flagged as certified.
"""
from __future__ import annotations

import heapq
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from math import gcd

from .core import (
    Element,
    NablaPartition,
    Relation,
    Semigroup,
    check_int64,
    evaluate,
    factorizations_up_to,
    grading,
    length,
)


class RankError(ValueError):
    """The kernel lattice does not have the rank an operation requires."""


class BalancedTradeError(ValueError):
    """The primitive trade has two sides of equal length."""


class NotInKernelError(ValueError):
    """A supplied relation does not have equal images on both sides."""


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with x*a + y*b = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


@dataclass(frozen=True)
class LatticeBasis:
    vectors: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.vectors)

    def __iter__(self):
        return iter(self.vectors)


def kernel_lattice(S: Semigroup) -> LatticeBasis:
    """Integer basis of {u in Z^k : sum u_i v_i = 0}.

    Unimodular column operations bring the generator matrix to column echelon
    form; the transformation columns past the rank span the kernel over Z.
    """
    d, k = S.dim, S.k
    cols = [list(g) for g in S.generators]
    U = [[int(i == c) for i in range(k)] for c in range(k)]
    piv = 0
    for r in range(d):
        if piv >= k:
            break
        for c in range(piv + 1, k):
            a, b = cols[piv][r], cols[c][r]
            if b == 0:
                continue
            g, x, y = xgcd(a, b)
            ag, bg = a // g, b // g
            cols[piv], cols[c] = (
                [x * p + y * q for p, q in zip(cols[piv], cols[c])],
                [-bg * p + ag * q for p, q in zip(cols[piv], cols[c])],
            )
            U[piv], U[c] = (
                [check_int64(x * p + y * q) for p, q in zip(U[piv], U[c])],
                [check_int64(-bg * p + ag * q) for p, q in zip(U[piv], U[c])],
            )
        if cols[piv][r] != 0:
            piv += 1
    basis = []
    for u in U[piv:]:
        g = 0
        for x in u:
            g = gcd(g, x)
        u = [x // g for x in u]
        if next(x for x in u if x) < 0:
            u = [-x for x in u]
        basis.append(tuple(u))
    return LatticeBasis(tuple(basis))


def primitive_trade_3gen(S: Semigroup) -> Relation:
    """The unique minimal relation of a 3-generated semigroup in Z^2."""
    if S.dim != 2 or S.k != 3:
        raise RankError(f"need 3 generators in dimension 2, got {S.k} in dimension {S.dim}")
    basis = kernel_lattice(S)
    if len(basis) != 1:
        raise RankError(f"kernel lattice has rank {len(basis)}, expected 1")
    (u,) = basis.vectors
    z = tuple(max(-x, 0) for x in u)
    w = tuple(max(x, 0) for x in u)
    if length(z) == length(w):
        raise BalancedTradeError(f"primitive kernel vector {u} is balanced")
    if length(z) > length(w):
        z, w = w, z
    return Relation(z, w)


def _certified_trade(S: Semigroup) -> Relation | None:
    if S.dim != 2 or S.k != 3:
        return None
    try:
        return primitive_trade_3gen(S)
    except (RankError, BalancedTradeError):
        return None


def frobenius_number(S: Semigroup) -> int:
    """Largest integer outside a numerical semigroup with coprime generators.

    Shortest paths on residues modulo the smallest generator.
    """
    if S.dim != 1:
        raise ValueError("frobenius_number needs a numerical semigroup")
    gens = [g[0] for g in S.generators]
    g = 0
    for x in gens:
        g = gcd(g, x)
    if g != 1:
        raise ValueError(f"generators of {S} are not coprime")
    m = min(gens)
    best = [0] + [None] * (m - 1)
    heap = [(0, 0)]
    while heap:
        dist, r = heapq.heappop(heap)
        if dist > best[r]:
            continue
        for x in gens:
            nd, nr = dist + x, (r + x) % m
            if best[nr] is None or nd < best[nr]:
                best[nr] = nd
                heapq.heappush(heap, (nd, nr))
    return max(best) - m


def certified_bound(S: Semigroup) -> int | None:
    """A grading above which no Betti element exists, when one is known.

    For a numerical semigroup every Betti element b has generators n_i, n_j
    with b - n_i in the Apery set of n_j, so b <= F + n_i + n_j. Generators
    with a common divisor g are handled through the isomorphic S / g.
    """
    if S.dim != 1:
        return None
    g = gcd(*(x[0] for x in S.generators))
    reduced = S if g == 1 else Semigroup(tuple((x[0] // g,) for x in S.generators))
    top = sorted(reduced.gradings)[-2:]
    return g * (frobenius_number(reduced) + sum(top))


def default_bound(S: Semigroup) -> int:
    """4 x the largest generator grading, raised to a certified bound when known."""
    bound = 4 * max(S.gradings)
    cert = certified_bound(S)
    if cert is not None:
        bound = max(bound, cert)
    return bound


def _check_bound(S: Semigroup, bound: int | None) -> int:
    if bound is None:
        return default_bound(S)
    bound = int(bound)
    if bound < max(S.gradings):
        raise ValueError(f"bound {bound} is below the largest generator grading {max(S.gradings)}")
    return check_int64(bound)


@dataclass(frozen=True)
class BettiReport:
    elements: tuple[tuple[Element, int], ...]
    search_bound: int
    complete: str = "bounded"

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def relation_count(self) -> int:
        return sum(c - 1 for _, c in self.elements)

    def to_json(self) -> dict:
        return {
            "bound": self.search_bound,
            "complete": self.complete,
            "betti": [{"element": list(v), "components": c} for v, c in self.elements],
        }


@dataclass(frozen=True)
class Presentation:
    relations: tuple[Relation, ...]
    bound: int
    certified: bool = False

    @property
    def complete(self) -> str:
        return "certified" if self.certified else "bounded"

    def __len__(self) -> int:
        return len(self.relations)

    def to_json(self) -> dict:
        return {
            "bound": self.bound,
            "complete": self.complete,
            "relations": [r.to_json() for r in self.relations],
        }


def _nablas(S: Semigroup, bound: int) -> Iterable[NablaPartition]:
    for v, fib in factorizations_up_to(S, bound).items():
        if len(fib) >= 2:
            part = NablaPartition.from_fiber(v, fib)
            if part.component_count >= 2:
                yield part


def analyze(
    S: Semigroup, bound: int | None = None, certify: bool = True
) -> tuple[BettiReport, Presentation]:
    """Betti report and minimal presentation from a single scan up to `bound`.

    Each non-first component of a Betti element is joined to the
    lexicographically smallest factorization by its own least member.
    With certify=False the rank-1 shortcut is skipped and the scan result is
    returned as bounded, which is useful for cross-checking.
    """
    bound = _check_bound(S, bound)
    elements, rels = [], []
    for part in _nablas(S, bound):
        elements.append((part.element, part.component_count))
        comps = part.components()
        anchor = comps[0][0]
        for comp in comps[1:]:
            rels.append(Relation(anchor, comp[0]).canonical())
    if not certify:
        return BettiReport(tuple(elements), bound), Presentation(tuple(rels), bound)
    trade = _certified_trade(S)
    cert = certified_bound(S)
    if trade is not None:
        covered = grading(evaluate(S, trade.left)) <= bound
        report = BettiReport(tuple(elements), bound, "certified" if covered else "bounded")
        return report, Presentation((trade,), bound, certified=True)
    certified = cert is not None and bound >= cert
    complete = "certified" if certified else "bounded"
    return (
        BettiReport(tuple(elements), bound, complete),
        Presentation(tuple(rels), bound, certified=certified),
    )


def betti_elements(S: Semigroup, bound: int | None = None, certify: bool = True) -> BettiReport:
    """Betti elements of grading at most `bound`, ascending by (grading, lex)."""
    return analyze(S, bound, certify)[0]


def minimal_presentation(
    S: Semigroup, bound: int | None = None, certify: bool = True
) -> Presentation:
    """One relation per extra component of each Betti element up to `bound`.

    A 3-generated semigroup in Z^2 with a rank-1 kernel short-circuits to its
    primitive trade, which is certified regardless of the bound.
    """
    return analyze(S, bound, certify)[1]


def presentation_size(S: Semigroup, bound: int | None = None, certify: bool = True) -> int:
    return len(minimal_presentation(S, bound, certify))


def _as_relations(S: Semigroup, rels: Iterable[Sequence[Sequence[int]]]) -> list[Relation]:
    out = []
    for a, b in rels:
        r = Relation(tuple(a), tuple(b))
        if evaluate(S, r.left) != evaluate(S, r.right):
            raise NotInKernelError(f"{r} is not a relation of {S}")
        out.append(r)
    return out


def presentation_defects(
    S: Semigroup, rels: Iterable[Sequence[Sequence[int]]], bound: int
) -> list[Element]:
    """Elements of grading <= bound whose fiber the relations fail to connect."""
    if isinstance(rels, Presentation):
        rels = rels.relations
    rels = _as_relations(S, rels)
    moves = []
    for a, b in rels:
        moves.append((a, b))
        moves.append((b, a))
    bad = []
    for v, fib in factorizations_up_to(S, bound).items():
        if len(fib) < 2:
            continue
        index = {z: i for i, z in enumerate(fib)}
        parent = list(range(len(fib)))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for z, i in index.items():
            for a, b in moves:
                if all(zi >= ai for zi, ai in zip(z, a)):
                    j = index[tuple(zi - ai + bi for zi, ai, bi in zip(z, a, b))]
                    ri, rj = find(i), find(j)
                    if ri != rj:
                        parent[rj] = ri
        root = find(0)
        if any(find(i) != root for i in range(1, len(fib))):
            bad.append(v)
    return bad


def verify_presentation(
    S: Semigroup, rels: Iterable[Sequence[Sequence[int]]], bound: int
) -> bool:
    """True if the congruence generated by `rels` connects every fiber up to `bound`."""
    return not presentation_defects(S, rels, bound)
