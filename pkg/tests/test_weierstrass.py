from fractions import Fraction as F

import pytest

from tropwp.divisors import MetricGraph, is_weierstrass
from tropwp.errors import GenusTooSmall, NonTrivalentModel
from tropwp.graphs import GraphBuilder, standard_families
from tropwp.weierstrass import (
    count_gwp,
    expected_pushforward_total,
    fiber_witnesses,
    generic_lengths,
    generic_metric_graph,
    marked_classes,
    pushforward_total,
)


def pattern(report):
    G = report.graph
    out = []
    for p, m in sorted(report.point_table.items()):
        where = G.model.name(p.vertex) if p.is_vertex else (G.model.name(p.edge), p.offset / G.lengths[p.edge])
        out.append((where, m))
    return sorted(out, key=repr)


def test_generic_lengths_are_reproducible():
    a, b = generic_lengths(6, 3), generic_lengths(6, 3)
    assert a == b and len(set(a)) == 6
    assert generic_lengths(6, 4) != a


def test_genus_two_dumbbell(g2_report):
    assert sorted(g2_report.multiplicities()) == [1, 1, 2, 2]
    assert g2_report.total == 6
    assert g2_report.fibre_total == 720
    pat = pattern(g2_report)
    assert (("l1", F(1, 2)), 2) in pat and (("l2", F(1, 2)), 2) in pat
    assert ("V1", 1) in pat and ("V2", 1) in pat
    assert all(g2_report.weierstrass_checked.values())


def test_genus_three(g3_report):
    assert sorted(g3_report.multiplicities()) == [2, 2, 2, 6, 6, 6]
    assert g3_report.total == 24
    assert g3_report.fibre_total == 967680
    classes = sorted(k.multiplicity for k in g3_report.classes)
    assert classes == [2, 2, 2, 3, 3, 3, 3, 3, 3]
    for k in g3_report.classes:
        assert k.multiplicity == k.cover_multiplicity


def test_theta_graph():
    b = GraphBuilder()
    u, v = b.vertex(), b.vertex()
    for k in range(3):
        b.edge(u, v, f"e{k}")
    R = count_gwp(generic_metric_graph(b.build(), 3))
    assert R.total == 6 and R.fibre_total == 720
    assert sorted(R.multiplicities()) == [2, 2, 2]


def test_stability_under_resampling(g2_covers, g3_covers):
    for g, covers in ((2, g2_covers), (3, g3_covers)):
        O = standard_families("O", g)
        a = count_gwp(generic_metric_graph(O, 1), covers, verify_rank=False)
        b = count_gwp(generic_metric_graph(O, 2), covers, verify_rank=False)
        assert pattern(a) == pattern(b)


def test_uniform_rescaling(g2_covers):
    G = generic_metric_graph(standard_families("O", 2), 5)
    a = count_gwp(G, g2_covers, verify_rank=False)
    b = count_gwp(G.scaled(F(7, 3)), g2_covers, verify_rank=False)
    pa, pb = sorted(a.point_table.items()), sorted(b.point_table.items())
    assert [m for _, m in pa] == [m for _, m in pb]
    for (p, _), (q, _) in zip(pa, pb):
        assert p.edge == q.edge and p.vertex == q.vertex
        assert q.offset == p.offset * F(7, 3)


def test_points_are_weierstrass(g3_report):
    G = g3_report.graph
    for p in g3_report.point_table:
        assert is_weierstrass(G, p, "metric")


def test_witness_shares(g2_covers):
    G = generic_metric_graph(standard_families("O", 2), 7)
    ws = fiber_witnesses(G, g2_covers)
    assert sum(w.fibre_share() for w in ws) == expected_pushforward_total(2)
    assert sum(k.multiplicity for k in marked_classes(ws)) == 6


def test_pushforward_totals():
    assert pushforward_total(2, "quotient") == pushforward_total(2, "fully-labelled") == 720
    assert expected_pushforward_total(3) == 967680
    assert expected_pushforward_total(4) == 11 * 10 * 9 * 8 * 7 * 6 * 5 * 4 * 3 * 2 * 2 ** 11 * 60


def test_model_checks():
    b = GraphBuilder()
    v = b.vertex()
    e, _ = b.edge(v, v)
    with pytest.raises(GenusTooSmall):
        count_gwp(MetricGraph(b.build(), {e: 1}))
    b = GraphBuilder()
    v = b.vertex()
    e1, _ = b.edge(v, v)
    e2, _ = b.edge(v, v)
    with pytest.raises(NonTrivalentModel):
        count_gwp(MetricGraph(b.build(), {e1: 1, e2: 2}))


def test_report_serialisation(g2_report):
    d = g2_report.to_dict()
    assert d["total"] == "6" and "seed" in d
    assert len(d["points"]) == 4 and all(isinstance(p["multiplicity"], str) for p in d["points"])
