"""Acceptance suite: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v``; the lines are repeated in
the terminal summary.  Criterion 8 (genus 4) runs only with TROPWP_LONG=1.
"""

import math
import os
import random
import time
from fractions import Fraction as F

import pytest
import sympy

from tropwp.divisors import (
    MetricGraph,
    canonical_divisor,
    is_weierstrass,
    point_divisor,
    rank,
    riemann_roch_residual,
)
from tropwp.enumeration import enumerate_all, expunged_violations, loop_vertex_cases
from tropwp.graphs import GraphBuilder, standard_families
from tropwp.hurwitz import cover_multiplicity, hurwitz_genus0
from tropwp.weierstrass import (
    count_gwp,
    expected_pushforward_total,
    generic_metric_graph,
    pushforward_total,
)

from test_divisors import random_instance
from test_hurwitz import oracle, oracle_cases

RESULTS: list[str] = []


def record(n, ok, detail):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def formula_total(g):
    return math.factorial(3 * g - 1) * math.factorial(g - 2) ** (3 * g - 1) * (g ** 3 - g)


@pytest.fixture(scope="module")
def genus2():
    t = time.time()
    covers = enumerate_all(2, "quotient")
    report = count_gwp(generic_metric_graph(standard_families("O", 2), 7), covers, seed=7)
    return covers, report, time.time() - t


@pytest.fixture(scope="module")
def genus3():
    t = time.time()
    covers = enumerate_all(3, "quotient")
    report = count_gwp(generic_metric_graph(standard_families("O", 3), 7), covers, seed=7)
    return covers, report, time.time() - t


def test_criterion_1_genus_two(genus2):
    _, R, dt = genus2
    mults = sorted(R.multiplicities())
    ok = mults == [1, 1, 2, 2] and R.total == 6 == 2 ** 3 - 2 and dt < 30
    record(1, ok, f"g=2 dumbbell points {mults}, total {R.total}, {dt:.1f}s (< 30s)")


def test_criterion_2_genus_three(genus3):
    _, R, dt = genus3
    mults = sorted(R.multiplicities())
    ok = mults == [2, 2, 2, 6, 6, 6] and R.total == 24 == 3 ** 3 - 3 and dt < 600
    record(2, ok, f"g=3 O_3 points {mults}, total {R.total}, {dt:.1f}s (< 600s)")


def test_criterion_3_pushforward_totals(genus3):
    t2q, t2f = pushforward_total(2, "quotient"), pushforward_total(2, "fully-labelled")
    t3 = pushforward_total(3, "quotient")
    ok = t2q == t2f == 720 == formula_total(2) and t3 == 967680 == formula_total(3)
    record(3, ok, f"totals g=2 {t2q} (quotient) / {t2f} (fully labelled), g=3 {t3}")


def test_criterion_4_rank_suite():
    t = time.time()
    O = standard_families("O", 2)
    G = MetricGraph(O, {O.find("l1"): 4, O.find("l2"): 3, O.find("h1"): 1})
    l1 = O.find("l1")
    ok = rank(G, point_divisor(G.point(l1, 2), 2)) == 1 and rank(G, point_divisor(G.point(l1, 1), 2)) == 0
    b = GraphBuilder()
    v = b.vertex()
    e, _ = b.edge(v, v)
    C = MetricGraph(b.build(), {e: F(5, 2)})
    ok &= all(rank(C, point_divisor(C.point(e, F(1, 3)), n)) == n - 1 for n in range(1, 6))
    rng = random.Random(2024)
    residuals = [riemann_roch_residual(*random_instance(rng)) for _ in range(200)]
    dt = time.time() - t
    ok &= residuals == [0] * 200 and dt < 300
    record(4, ok, f"rank(2w)=1, rank(2p)=0, circle ranks n-1, 200 RR residuals zero, {dt:.1f}s")


def test_criterion_5_hurwitz_table():
    closed = [hurwitz_genus0(d, [(d,), (d,)]) == F(1, d) for d in range(1, 8)]
    closed.append(hurwitz_genus0(5, [(3, 1, 1), (4, 1), (4, 1)]) == 1)
    closed.append(hurwitz_genus0(6, [(2, 1, 1, 1, 1), (3, 3), (6,)]) == F(1, 2))
    cases = list(oracle_cases())
    brute = [hurwitz_genus0(d, p) == oracle(d, p) for d, p in cases]
    ok = all(closed) and all(brute)
    record(5, ok, f"closed cases {sum(closed)}/{len(closed)}, brute force {sum(brute)}/{len(brute)} profiles (d <= 5)")


def test_criterion_6_integrality_and_cross_checks(genus2, genus3):
    ok = True
    n_mult = n_pts = n_covers = 0
    for covers, R in ((genus2[0], genus2[1]), (genus3[0], genus3[1])):
        for k in R.classes:
            ok &= k.cover_multiplicity >= 0 and k.multiplicity == k.cover_multiplicity
        for info in covers:
            if not info.contributing:
                continue
            n_covers += 1
            m = cover_multiplicity(info.cover, info.ftF)
            ok &= isinstance(m, int) and m >= 0
            ok &= int(sympy.Matrix(info.ftF).det()) == info.determinant
            ok &= expunged_violations(info.cover, info.stabilization) == []
            ok &= set(loop_vertex_cases(info).values()) <= {"A", "B", "C"}
            n_mult += 1
        for p in R.point_table:
            ok &= is_weierstrass(R.graph, p, "metric")
            n_pts += 1
    record(6, ok, f"{n_mult} integral multiplicities, {n_pts} points Weierstrass, {n_covers} covers classified")


def pattern(R):
    G = R.graph
    out = []
    for p, m in R.point_table.items():
        where = G.model.name(p.vertex) if p.is_vertex else (G.model.name(p.edge), p.offset / G.lengths[p.edge])
        out.append((where, m))
    return sorted(out, key=repr)


def test_criterion_7_stability(genus2, genus3):
    ok = True
    for g, covers in ((2, genus2[0]), (3, genus3[0])):
        O = standard_families("O", g)
        a = count_gwp(generic_metric_graph(O, 1), covers, verify_rank=False)
        b = count_gwp(generic_metric_graph(O, 2), covers, verify_rank=False)
        ok &= sorted(a.multiplicities()) == sorted(b.multiplicities()) and pattern(a) == pattern(b)
        c = F(7, 3)
        s = count_gwp(a.graph.scaled(c), covers, verify_rank=False)
        pa, ps = sorted(a.point_table.items()), sorted(s.point_table.items())
        ok &= [m for _, m in pa] == [m for _, m in ps]
        ok &= all(p.edge == q.edge and p.vertex == q.vertex and q.offset == p.offset * c
                  for (p, _), (q, _) in zip(pa, ps))
    record(7, ok, "resampled lengths and uniform rescaling preserve the point pattern (g=2, 3)")


@pytest.mark.slow
@pytest.mark.skipif(os.environ.get("TROPWP_LONG") != "1", reason="genus 4 run needs TROPWP_LONG=1")
def test_criterion_8_genus_four():
    t = time.time()
    R = count_gwp(generic_metric_graph(standard_families("O", 4), 7), verify_rank=False, seed=7)
    dt = time.time() - t
    ok = R.total == 60 == 4 ** 3 - 4 and R.fibre_total == expected_pushforward_total(4)
    record(8, ok, f"g=4 O_4 total {R.total}, fibre {R.fibre_total}, "
                  f"multiplicities {sorted(R.multiplicities())}, {dt:.0f}s")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
