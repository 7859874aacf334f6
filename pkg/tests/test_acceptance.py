"""Acceptance suite: one PASS/FAIL line per criterion, with the pinned time limits."""
import random
import time
import warnings

import pytest

from conftest import box_fibers_up_to, box_size, random_semigroup
from shiftpres import (
    Semigroup,
    betti_elements,
    evaluate,
    fiber,
    minimal_presentation,
    nabla,
    presentation_size,
    verify_presentation,
)
from shiftpres.families import (
    SECTION5,
    ShiftedFamily,
    classify_orientation,
    detect_eventual_period,
    family_constants,
    instantiate,
    phi_map,
    psi_map,
    psi_prime_map,
    sweep,
)
from shiftpres.presentation import BalancedTradeError, RankError, primitive_trade_3gen
from shiftpres.verifiers import (
    verify_lemma_4_3,
    verify_lemma_4_4,
    verify_lemma_4_5,
    verify_lemma_5_1,
    verify_theorem_4_2,
    verify_theorem_5_2,
)

LIMIT_MCNUGGET_S = 1.0
LIMIT_CANES_S = 1.0
LIMIT_LEMMA_4_3_S = 10.0
LIMIT_LEMMAS_4_4_4_5_S = 300.0
LIMIT_THEOREM_5_2_S = 60.0
MIN_RANDOM_PAIRS = 50
MIN_RANDOM_NUMERICAL = 50
MIN_RANDOM_SEMIGROUPS = 200


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}")
        assert ok, detail

    return emit


def test_criterion_1_mcnugget(report):
    S = Semigroup.numerical(6, 9, 20)
    t0 = time.perf_counter()
    pres = minimal_presentation(S, 100)
    elapsed = time.perf_counter() - t0
    betti = {evaluate(S, r.left)[0] for r in pres.relations}
    alternative = [((3, 0, 0), (0, 2, 0)), ((4, 4, 0), (0, 0, 3))]
    same_components = True
    for (a, b), ours in zip(alternative, pres.relations):
        part = nabla(S, evaluate(S, a))
        same_components &= evaluate(S, a) == evaluate(S, b) == evaluate(S, ours.left)
        same_components &= {part.component_id[a], part.component_id[b]} == {
            part.component_id[ours.left], part.component_id[ours.right]
        }
    ok = (
        len(pres) == 2
        and betti == {18, 60}
        and same_components
        and verify_presentation(S, alternative, 100)
        and elapsed < LIMIT_MCNUGGET_S
    )
    report(1, ok, f"<6,9,20>: {len(pres)} relations, Betti {sorted(betti)}, {elapsed:.3f}s")


def test_criterion_2_raising_canes(report):
    S = Semigroup(((3, 2), (4, 3), (6, 3)))
    t0 = time.perf_counter()
    trade = primitive_trade_3gen(S)
    certified = minimal_presentation(S)
    bounded = minimal_presentation(S, 40, certify=False)
    elapsed = time.perf_counter() - t0
    expected = (((0, 3, 1), (6, 0, 0)),)
    ok = (
        certified.relations == bounded.relations == (trade,) == expected
        and certified.certified
        and elapsed < LIMIT_CANES_S
    )
    report(2, ok, f"trade {tuple(trade)}, both routes agree, {elapsed:.3f}s")


def test_criterion_3_lemma_4_3(report):
    t0 = time.perf_counter()
    results = {k: verify_lemma_4_3(k) for k in (5, 6, 7, 8)}
    elapsed = time.perf_counter() - t0
    ok = all(r.passed is True for r in results.values()) and elapsed < LIMIT_LEMMA_4_3_S
    report(3, ok, f"fiber of A is the two-point set for k=5..8, {elapsed:.3f}s")


def test_criterion_4_lemmas_4_4_4_5(report):
    t0 = time.perf_counter()
    results = []
    for k in (5, 6):
        results.append(verify_lemma_4_4(k))
        results.extend(verify_lemma_4_5(k, i) for i in range(k + 1))
    elapsed = time.perf_counter() - t0
    ok = all(r.passed is True for r in results) and elapsed < LIMIT_LEMMAS_4_4_4_5_S
    sizes = sum(r.witnesses["fiber_size"] for r in results)
    report(4, ok, f"{len(results)} fibers ({sizes} factorizations) satisfy the dichotomies, {elapsed:.3f}s")


def test_criterion_5_theorem_4_2_growth(report):
    counts = {}
    ok = True
    for k in (5, 6, 7, 8):
        r = verify_theorem_4_2(k)
        counts[k] = r.witnesses["betti_count"]
        ok &= r.passed is True and counts[k] >= k + 3
    seq = [counts[k] for k in sorted(counts)]
    ok &= all(a < b for a, b in zip(seq, seq[1:]))
    report(5, ok, f"Betti counts for k=5..8 at n=31,37,43,49: {seq}")


def test_criterion_6_theorem_5_2_periodicity(report):
    t0 = time.perf_counter()
    ns = range(3, 31)
    verified = all(verify_theorem_5_2(n).passed is True for n in ns)
    sizes = [r.presentation_size for r in sweep(SECTION5, ns)]
    expected = [2 if n % 3 == 0 else 3 for n in ns]
    period = detect_eventual_period(sizes)
    elapsed = time.perf_counter() - t0
    ok = verified and sizes == expected and period == (0, 3) and elapsed < LIMIT_THEOREM_5_2_S
    report(6, ok, f"rho verifies for n=3..30, sizes period {period}, {elapsed:.3f}s")


def test_criterion_7_lemma_5_1(report):
    results = [verify_lemma_5_1(n) for n in range(3, 31)]
    bad = [r.witnesses["n"] for r in results if r.passed is not True]
    report(7, not bad, f"minimal coefficients equal (3, 2k+r) for n=3..30; mismatches {bad}")


def _psi_cases(rng, orientation, window):
    """Random admissible pairs with entries <= 6, each with its window of n."""
    seen = set()
    attempts = 0
    while len(seen) < MIN_RANDOM_PAIRS and attempts < 10_000:
        attempts += 1
        r1 = (rng.randint(0, 6), rng.randint(0, 6))
        r2 = (rng.randint(0, 6), rng.randint(0, 6))
        if r1[0] == r1[1] or r2[0] == r2[1] or classify_orientation(r1, r2) != orientation:
            continue
        c = family_constants(r1, r2)
        if c.p == 0:
            continue
        F = ShiftedFamily(((0, 0), r1, r2))
        ns = window(c.p)
        try:
            for n in ns:
                primitive_trade_3gen(instantiate(F, n))
                primitive_trade_3gen(instantiate(F, n + c.p))
        except (RankError, BalancedTradeError):
            continue
        seen.add((r1, r2, tuple(ns)))
    return sorted(seen)


def _check_psi(cases, mapper):
    failures, checked, bounded_checked = [], 0, 0
    for r1, r2, ns in cases:
        F = ShiftedFamily(((0, 0), r1, r2))
        p = family_constants(r1, r2).p
        for n in ns:
            pres = minimal_presentation(instantiate(F, n))
            T = instantiate(F, n + p)
            target = minimal_presentation(T)
            image = tuple(sorted(mapper(r, r1, r2, n).canonical() for r in pres.relations))
            checked += 1
            if image != target.relations or not target.certified:
                failures.append((r1, r2, n))
                continue
            lam = max(sum(evaluate(T, target.relations[0].left)), max(T.gradings))
            if box_size(T.generators, lam) <= 20_000:
                bounded_checked += 1
                if minimal_presentation(T, lam, certify=False).relations != image:
                    failures.append((r1, r2, n, "bounded"))
    return failures, checked, bounded_checked


def _numerical_cases(rng):
    cases = set()
    while len(cases) < MIN_RANDOM_NUMERICAL:
        k = rng.randint(2, 4)
        base = rng.randint(0, 3)
        p = rng.randint(1, 4)
        inner = rng.sample(range(base + 1, base + p), min(k - 2, p - 1))
        offs = tuple(sorted({base, base + p, *inner}))
        n = p * p + 1 + rng.randint(0, 3)
        cases.add((offs, n))
    return sorted(cases)


def test_criterion_8_shifting_transport(report):
    rng = random.Random(2024)
    opposite = _psi_cases(rng, "opposite-sides", lambda p: range(1, 7))
    same = _psi_cases(rng, "same-side", lambda p: range(p, p + 6))
    f_opp, n_opp, b_opp = _check_psi(opposite, psi_map)
    f_same, n_same, b_same = _check_psi(same, psi_prime_map)

    numerical = _numerical_cases(rng)
    f_num = []
    for offs, n in numerical:
        F = ShiftedFamily.numerical(*offs)
        p = offs[-1] - offs[0]
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            image = sorted(phi_map(r, offs, n).canonical() for r in minimal_presentation(instantiate(F, n)).relations)
        if image != sorted(minimal_presentation(instantiate(F, n + p)).relations):
            f_num.append((offs, n))

    ok = (
        len(opposite) >= MIN_RANDOM_PAIRS
        and len(same) >= MIN_RANDOM_PAIRS
        and len(numerical) >= MIN_RANDOM_NUMERICAL
        and not (f_opp or f_same or f_num)
    )
    report(
        8,
        ok,
        f"Psi {len(opposite)} pairs/{n_opp} cases ({b_opp} box-checked), "
        f"Psi' {len(same)} pairs/{n_same} cases with n in [p, p+5] ({b_same} box-checked), "
        f"Phi {len(numerical)} families; failures {f_opp + f_same + f_num}",
    )


def test_criterion_9_oracle_equivalence(report):
    rng = random.Random(99)
    failures = []
    for trial in range(MIN_RANDOM_SEMIGROUPS):
        S = random_semigroup(rng, max_grading=12, max_k=4, max_dim=2)
        bound = max(S.gradings) + 12
        while bound > max(S.gradings) and box_size(S.generators, bound) > 40_000:
            bound -= 1
        table = box_fibers_up_to(S.generators, bound)
        if any(fiber(S, v) != fib for v, fib in table.items()):
            failures.append((trial, "fiber"))
            continue
        report_ = betti_elements(S, bound, certify=False)
        pres = minimal_presentation(S, bound, certify=False)
        sizes = {presentation_size(S, bound, certify=False), sum(c - 1 for _, c in report_.elements), len(pres)}
        if len(sizes) != 1:
            failures.append((trial, "size"))
        if not verify_presentation(S, pres, bound):
            failures.append((trial, "verify"))
        for i in range(len(pres)):
            if verify_presentation(S, pres.relations[:i] + pres.relations[i + 1:], bound):
                failures.append((trial, "redundant", i))
    report(9, not failures, f"{MIN_RANDOM_SEMIGROUPS} random semigroups against the box oracle; failures {failures}")
