"""Acceptance criteria 1-9, each with its time budget.

Every criterion prints one PASS/FAIL line (also collected into the pytest
terminal summary). Run directly with ``python tests/test_acceptance.py``.
"""

import itertools
import random
import time
from fractions import Fraction

import pytest

from golden import entries, table
from tensordual import ModelSignature
from tensordual.amplitudes import (
    check_dse,
    check_duality,
    dual_cancellation_check,
    series_g2,
    series_lnz,
    vacuum_weight,
)
from tensordual.canonical import canonical_form, reduce_graph, sign_theorem_check
from tensordual.enumerator import labeled_ribbon_graphs, random_ribbon_graph, rooted_ribbon_classes
from tensordual.invariants import count_invariants, enumerate_invariants
from tensordual.multiribbon import MultiRibbonGraph
from tensordual.ribbon import RibbonGraph, stabilizer_formula, twist_orbit_and_stabilizer
from tensordual.wick import oracle_g2, oracle_lnz

RESULTS = []


def report(number, title, budget, fn):
    t0 = time.perf_counter()
    ok, detail = fn()
    elapsed = time.perf_counter() - t0
    ok = ok and elapsed < budget
    line = f"criterion {number} {'PASS' if ok else 'FAIL'}: {title} ({detail}; {elapsed:.1f}s of {budget}s)"
    RESULTS.append(line)
    print(line)
    return ok


def _corpus():
    for E in range(5):
        yield from labeled_ribbon_graphs(E)
    rng = random.Random(20240601)
    for _ in range(1000):
        yield random_ribbon_graph(rng.randint(1, 8), rng)


# 1


def golden_table():
    g2 = series_g2(ModelSignature.build(2, (0, 0)), 2)
    want = entries()
    bad = [(e, c) for e, c in want if g2.terms.get(e) != c]
    return not bad and g2 == table(), f"{len(want) - len(bad)}/{len(want)} coefficients exact"


# 2


def invariant_count():
    counts = [len(enumerate_invariants(D)) for D in range(1, 9)]
    ok = counts == [(1 + 3 ** (D - 1)) // 2 for D in range(1, 9)]
    ok = ok and all(count_invariants(D) == c for D, c in zip(range(1, 9), counts))
    ids = [inv.ident for inv in enumerate_invariants(3)]
    ok = ok and ids == ["rho", "2p", "3p", "2p-3p", "2p-3x"]
    return ok, f"counts {counts}, D=3 classes {ids}"


# 3


def sign_theorem():
    n = fails = 0
    for g in _corpus():
        n += 1
        fails += not sign_theorem_check(g)
    return fails == 0, f"{n} graphs, {fails} failures"


# 4


def move_invariance():
    n = fails = 0
    for g in _corpus():
        n += 1
        try:
            reduce_graph(g, check=True)
        except AssertionError:
            fails += 1
    three = RibbonGraph.build([[0, 1, 2, 3, 4, 5]], [(0, 1), (2, 3), (4, 5)], [1, 1, 1])
    surf = canonical_form(three).as_tuple()
    return fails == 0 and surf == (1, 1), f"{n} reductions, {fails} failures, three crosscaps -> {surf}"


# 5


def stabilizer_formula_check():
    n = fails = 0
    for E in range(1, 5):
        for g in rooted_ribbon_classes(E):
            n += 1
            orb, stab = twist_orbit_and_stabilizer(g)
            fails += stab != stabilizer_formula(g) or orb * stab != 2 ** E
    # three vertices of ribbon degree 5, 2, 1; four ribbon edges, two rho-edges
    sig = ModelSignature.build(2, (0, 0))
    cycles = [[0, 1, 2, 3, 4, 5], [6, 7], [8, 9, 10, 11]]
    g = RibbonGraph.build(cycles, [(0, 2), (1, 6), (3, 7), (4, 8)], [1, 0, 0, 0], [(5, 9), (10, 11)], root=0)
    lab = tuple(0 if g.rho[h] else 1 for h in range(g.n))
    mg = MultiRibbonGraph(RibbonGraph(g.pi, g.alpha, g.twist, g.rho, lab, g.root, g.isolated), sig)
    stab = twist_orbit_and_stabilizer(g)[1]
    w = vacuum_weight(mg)
    ok = fails == 0 and stab == 4 and w == Fraction(1, 2)
    return ok, f"{n} rooted classes, {fails} failures; example stabilizer {stab}, weight {w}"


# 6


def dyson_schwinger():
    done = []
    ok = True
    for parity in [(0, 0), (0, 1), (1, 0), (1, 1)]:
        ok = ok and check_dse(ModelSignature.build(2, parity), 3)
        done.append(f"D=2 {parity} order 3")
    d3 = ModelSignature.build(3, (0, 0, 0))
    ok = ok and len(d3.invariants) == 5 and check_dse(d3, 1)
    done.append("D=3 all-even order 1")
    return ok, ", ".join(done)


# 7


def duality():
    n = 0
    ok = True
    for D, order in ((2, 2), (3, 1)):
        for parity in itertools.product((0, 1), repeat=D):
            res = check_duality(ModelSignature.build(D, parity), order)
            ok = ok and all(res.values())
            n += len(res)
    return ok, f"{n} single-color flips"


# 8


def oracle_equivalence():
    ok = True
    done = []
    for parity in [(0, 0), (0, 1), (1, 1)]:
        sig = ModelSignature.build(2, parity)
        ok = ok and oracle_g2(sig, 2) == series_g2(sig, 2) and oracle_lnz(sig, 2) == series_lnz(sig, 2)
        done.append(f"D=2 {parity}")
    sig = ModelSignature.build(3, (0, 0, 0))
    ok = ok and oracle_g2(sig, 1) == series_g2(sig, 1) and oracle_lnz(sig, 1) == series_lnz(sig, 1)
    done.append("D=3 all-even order 1")
    return ok, ", ".join(done)


# 9


def dual_cancellation():
    rep = dual_cancellation_check(2)
    return rep.ok, f"{rep.classes} classes, {rep.odd_classes} with V+F odd, odd sum {rep.odd_sum.pretty()}"


CRITERIA = [
    (1, "golden two-point table", 10, golden_table),
    (2, "invariant count", 1, invariant_count),
    (3, "sign theorem", 60, sign_theorem),
    (4, "move invariance", 60, move_invariance),
    (5, "stabilizer formula and worked example", 120, stabilizer_formula_check),
    (6, "Dyson-Schwinger", 300, dyson_schwinger),
    (7, "duality", 300, duality),
    (8, "oracle equivalence", 600, oracle_equivalence),
    (9, "dual cancellation", 60, dual_cancellation),
]


@pytest.mark.parametrize("number, title, budget, fn", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(number, title, budget, fn):
    assert report(number, title, budget, fn)


if __name__ == "__main__":
    results = [report(*c) for c in CRITERIA]
    raise SystemExit(0 if all(results) else 1)
