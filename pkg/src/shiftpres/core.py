"""Affine semigroups, factorization fibers and the support-overlap graph.

Elements and factorizations are plain tuples of ints. A semigroup is an
ordered tuple of nonzero generators in Z^d_{>=0}; factorization indices refer
to that order.
"""
from __future__ import annotations

import json
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

INT64_MAX = 2**63 - 1

Element = tuple[int, ...]
Factorization = tuple[int, ...]


class DimensionError(ValueError):
    """Raised when a vector has the wrong dimension or length."""


def check_int64(value: int) -> int:
    if not -INT64_MAX - 1 <= value <= INT64_MAX:
        raise OverflowError(f"value {value} does not fit in a signed 64-bit integer")
    return value


def grading(v: Iterable[int]) -> int:
    """Coordinate sum, the grading used to bound every search."""
    return sum(v)


def length(z: Iterable[int]) -> int:
    """Factorization length |z|."""
    return sum(z)


class Relation(NamedTuple):
    left: Factorization
    right: Factorization

    def canonical(self) -> Relation:
        """Return the pair ordered so (|left|, left) <= (|right|, right)."""
        a, b = self
        if (length(a), a) <= (length(b), b):
            return Relation(a, b)
        return Relation(b, a)

    def difference(self) -> tuple[int, ...]:
        return tuple(x - y for x, y in zip(self.left, self.right))

    def to_json(self) -> dict:
        return {"left": list(self.left), "right": list(self.right)}

    @classmethod
    def from_json(cls, obj: dict) -> Relation:
        return cls(tuple(int(x) for x in obj["left"]), tuple(int(x) for x in obj["right"]))


@dataclass(frozen=True)
class Semigroup:
    """The affine semigroup generated by an ordered list of vectors."""

    generators: tuple[Element, ...]

    def __post_init__(self) -> None:
        gens = tuple(tuple(int(c) for c in g) for g in self.generators)
        if not gens:
            raise ValueError("a semigroup needs at least one generator")
        dim = len(gens[0])
        if dim < 1:
            raise DimensionError("generators must have dimension >= 1")
        for g in gens:
            if len(g) != dim:
                raise DimensionError(f"generator {g} does not have dimension {dim}")
            if any(c < 0 for c in g):
                raise ValueError(f"generator {g} has a negative coordinate")
            if not any(g):
                raise ValueError("zero generator is not allowed")
            for c in g:
                check_int64(c)
        object.__setattr__(self, "generators", gens)

    @classmethod
    def numerical(cls, *gens: int) -> Semigroup:
        return cls(tuple((g,) for g in gens))

    @property
    def dim(self) -> int:
        return len(self.generators[0])

    @property
    def k(self) -> int:
        return len(self.generators)

    @property
    def gradings(self) -> tuple[int, ...]:
        return tuple(grading(g) for g in self.generators)

    def matrix(self) -> list[list[int]]:
        """The d x k matrix whose columns are the generators."""
        return [[g[j] for g in self.generators] for j in range(self.dim)]

    def zero(self) -> Element:
        return (0,) * self.dim

    def to_json(self) -> dict:
        return {"dim": self.dim, "generators": [list(g) for g in self.generators]}

    @classmethod
    def from_json(cls, obj: dict | str) -> Semigroup:
        if isinstance(obj, str):
            obj = json.loads(obj)
        S = cls(tuple(tuple(g) for g in obj["generators"]))
        if "dim" in obj and int(obj["dim"]) != S.dim:
            raise DimensionError(f"declared dim {obj['dim']} but generators have dim {S.dim}")
        return S

    def __str__(self) -> str:
        if self.dim == 1:
            return "<" + ", ".join(str(g[0]) for g in self.generators) + ">"
        return "<" + ", ".join(str(g) for g in self.generators) + ">"


def _check_element(S: Semigroup, v: Sequence[int]) -> Element:
    v = tuple(int(c) for c in v)
    if len(v) != S.dim:
        raise DimensionError(f"element {v} does not have dimension {S.dim}")
    for c in v:
        check_int64(c)
    return v


def _check_factorization(S: Semigroup, z: Sequence[int]) -> Factorization:
    z = tuple(int(c) for c in z)
    if len(z) != S.k:
        raise DimensionError(f"factorization {z} does not have length {S.k}")
    if any(c < 0 for c in z):
        raise ValueError(f"factorization {z} has a negative entry")
    return z


def evaluate(S: Semigroup, z: Sequence[int]) -> Element:
    """The element z_1 v_1 + ... + z_k v_k."""
    z = _check_factorization(S, z)
    out = []
    for j in range(S.dim):
        out.append(check_int64(sum(c * g[j] for c, g in zip(z, S.generators))))
    return tuple(out)


def in_kernel(S: Semigroup, rel: Sequence[Sequence[int]]) -> bool:
    left, right = rel
    return evaluate(S, left) == evaluate(S, right)


def fiber(S: Semigroup, v: Sequence[int]) -> list[Factorization]:
    """All factorizations of v, in lexicographic order.

    Depth-first over generator indices; a branch is cut as soon as any
    residual coordinate would go negative. The last index is solved directly.
    """
    v = _check_element(S, v)
    if any(c < 0 for c in v):
        return []
    gens = S.generators
    k, d = S.k, S.dim
    out: list[Factorization] = []
    prefix = [0] * k

    def rec(i: int, residual: list[int]) -> None:
        g = gens[i]
        if i == k - 1:
            q = None
            for j in range(d):
                if g[j] == 0:
                    if residual[j] != 0:
                        return
                elif residual[j] % g[j]:
                    return
                else:
                    t = residual[j] // g[j]
                    if q is None:
                        q = t
                    elif q != t:
                        return
            prefix[i] = q
            out.append(tuple(prefix))
            return
        top = min(residual[j] // g[j] for j in range(d) if g[j])
        for c in range(top + 1):
            prefix[i] = c
            rec(i + 1, [residual[j] - c * g[j] for j in range(d)])
        prefix[i] = 0

    rec(0, list(v))
    return out


def contains(S: Semigroup, v: Sequence[int]) -> bool:
    v = _check_element(S, v)
    return bool(fiber(S, v))


def factorizations_up_to(S: Semigroup, bound: int) -> dict[Element, list[Factorization]]:
    """Every element v with grading(v) <= bound, mapped to its full fiber.

    Because each factorization of v has the same grading as v, grouping all
    factorizations of grading <= bound by their image yields complete fibers.
    Keys are ordered by (grading, lex); each fiber is lex-sorted.
    """
    bound = check_int64(int(bound))
    if bound < 0:
        return {}
    gradings = np.array(S.gradings, dtype=np.int64)
    rows = np.zeros((1, 0), dtype=np.int64)
    rem = np.array([bound], dtype=np.int64)
    for g in gradings:
        counts = rem // g + 1
        idx = np.repeat(np.arange(len(rows)), counts)
        starts = np.repeat(np.cumsum(counts) - counts, counts)
        offs = np.arange(int(counts.sum()), dtype=np.int64) - starts
        rows = np.column_stack([rows[idx], offs])
        rem = rem[idx] - offs * g
    G = np.array(S.generators, dtype=np.int64)
    images = rows @ G
    lam = images.sum(axis=1)
    keys = [rows[:, i] for i in reversed(range(S.k))]
    keys += [images[:, j] for j in reversed(range(S.dim))]
    keys.append(lam)
    order = np.lexsort(keys)
    rows = rows[order].tolist()
    images = images[order].tolist()
    out: dict[Element, list[Factorization]] = {}
    for img, z in zip(images, rows):
        out.setdefault(tuple(img), []).append(tuple(z))
    return out


def _component_labels(fib: Sequence[Factorization]) -> list[int]:
    n = len(fib)
    parent = list(range(n))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    if n:
        for i in range(len(fib[0])):
            first = None
            for idx, z in enumerate(fib):
                if z[i] > 0:
                    if first is None:
                        first = find(idx)
                    else:
                        r = find(idx)
                        if r != first:
                            parent[r] = first
    # number components by first appearance
    labels, seen = [], {}
    for idx in range(n):
        r = find(idx)
        labels.append(seen.setdefault(r, len(seen)))
    return labels


@dataclass
class NablaPartition:
    """Connected components of the support-overlap graph on a fiber."""

    element: Element
    fiber: list[Factorization]
    component_id: dict[Factorization, int] = field(default_factory=dict)
    component_count: int = 0

    @classmethod
    def from_fiber(cls, element: Element, fib: Sequence[Factorization]) -> NablaPartition:
        fib = sorted(fib)
        labels = _component_labels(fib)
        return cls(element, fib, dict(zip(fib, labels)), len(set(labels)))

    def components(self) -> list[list[Factorization]]:
        """Components as lex-sorted lists, ordered by their least member."""
        comps: list[list[Factorization]] = [[] for _ in range(self.component_count)]
        for z in self.fiber:
            comps[self.component_id[z]].append(z)
        return comps

    def to_json(self) -> list[list[list[int]]]:
        return [[list(z) for z in comp] for comp in self.components()]


def nabla(S: Semigroup, v: Sequence[int]) -> NablaPartition:
    v = _check_element(S, v)
    return NablaPartition.from_fiber(v, fiber(S, v))


def is_betti(S: Semigroup, v: Sequence[int]) -> bool:
    return nabla(S, v).component_count >= 2


def is_minimally_generated(S: Semigroup) -> bool:
    """True when no generator is a sum of the others."""
    for i, g in enumerate(S.generators):
        rest = S.generators[:i] + S.generators[i + 1:]
        if rest and contains(Semigroup(rest), g):
            return False
    return True
