"""Independent oracles shared by the test modules.

None of these call into the package's search code: fibers come from plain
box enumeration, components from BFS over an explicit edge list, and kernel
vectors from sympy's rational nullspace.
"""
import itertools
import random
from collections import defaultdict, deque
from math import gcd

import pytest
import sympy
from hypothesis import strategies as st

from shiftpres import Semigroup


def box_fiber(gens, v):
    """Every z in the box 0 <= z_i <= grading(v) with sum z_i g_i = v."""
    lam = sum(v)
    d = len(v)
    out = []
    for z in itertools.product(range(lam + 1), repeat=len(gens)):
        if all(sum(c * g[j] for c, g in zip(z, gens)) == v[j] for j in range(d)):
            out.append(z)
    return sorted(out)


def box_fibers_up_to(gens, bound):
    """Element -> fiber for every element of grading <= bound, by brute force."""
    lam = [sum(g) for g in gens]
    ranges = [range(bound // l + 1) for l in lam]
    out = defaultdict(list)
    for z in itertools.product(*ranges):
        if sum(c * l for c, l in zip(z, lam)) > bound:
            continue
        v = tuple(sum(c * g[j] for c, g in zip(z, gens)) for j in range(len(gens[0])))
        out[v].append(z)
    return {v: sorted(f) for v, f in out.items()}


def box_size(gens, bound):
    size = 1
    for g in gens:
        size *= bound // sum(g) + 1
    return size


def bfs_component_count(fib):
    n = len(fib)
    adj = [[j for j in range(n) if j != i and any(a and b for a, b in zip(fib[i], fib[j]))]
           for i in range(n)]
    seen, count = set(), 0
    for s in range(n):
        if s in seen:
            continue
        count += 1
        queue = deque([s])
        seen.add(s)
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
    return count


def brute_betti(gens, bound):
    """(element, components) for every Betti element up to bound, sorted by (grading, lex)."""
    out = []
    for v, fib in box_fibers_up_to(gens, bound).items():
        c = bfs_component_count(fib)
        if c >= 2:
            out.append((v, c))
    return sorted(out, key=lambda t: (sum(t[0]), t[0]))


def sympy_primitive_kernel_vector(gens):
    """The primitive generator of a rank-1 kernel, from the rational nullspace."""
    M = sympy.Matrix([[g[j] for g in gens] for j in range(len(gens[0]))])
    (vec,) = M.nullspace()
    den = sympy.ilcm(*[x.q for x in vec])
    ints = [int(x * den) for x in vec]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return tuple(x // g for x in ints)


def sympy_rank(gens):
    return sympy.Matrix([[g[j] for g in gens] for j in range(len(gens[0]))]).rank()


def random_semigroup(rng: random.Random, max_grading=12, max_k=4, max_dim=2):
    d = rng.randint(1, max_dim)
    k = rng.randint(1, max_k)
    gens = []
    while len(gens) < k:
        g = tuple(rng.randint(0, max_grading) for _ in range(d))
        if 0 < sum(g) <= max_grading:
            gens.append(g)
    return Semigroup(tuple(gens))


@st.composite
def semigroups(draw, max_grading=12, max_k=4, max_dim=2, min_grading=1, dim=None, k=None):
    d = dim or draw(st.integers(1, max_dim))
    k = k or draw(st.integers(1, max_k))
    vec = st.tuples(*[st.integers(0, max_grading)] * d).filter(
        lambda g: min_grading <= sum(g) <= max_grading
    )
    return Semigroup(tuple(draw(st.lists(vec, min_size=k, max_size=k))))


@pytest.fixture
def mcnugget():
    return Semigroup.numerical(6, 9, 20)


@pytest.fixture
def canes():
    return Semigroup(((3, 2), (4, 3), (6, 3)))
