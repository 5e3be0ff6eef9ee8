import pytest

from tropwp.enumeration import (
    enumerate_all,
    enumerate_covers_over_tree,
    expunged_violations,
    local_covers,
    loop_vertex_cases,
    tripod_blocks,
    weierstrass_profile,
)
from tropwp.errors import GenusCapExceeded, GenusTooSmall
from tropwp.graphs import canonical_key, enumerate_trivalent_trees
from tropwp.hurwitz import hurwitz_genus0, weierstrass_profile_ok


def test_weierstrass_profile():
    assert weierstrass_profile(2) == [(2,)] + [(2,)] * 5
    p = weierstrass_profile(4)
    assert p[0] == (4,) and len(p) == 12 and set(p[1:]) == {(2, 1, 1)}
    with pytest.raises(GenusTooSmall):
        weierstrass_profile(1)


def test_tripod_blocks_are_realisable():
    for d, parts in tripod_blocks(4):
        assert sum(len(p) for p in parts) == d + 2
        assert hurwitz_genus0(d, parts) != 0


def test_local_covers():
    assert len(local_covers(2, [(2,), (2,), (2,)])) == 0
    for lc in local_covers(2, [(1, 1), (1, 1), (1, 1)]):
        assert lc.degree == 2
    blocks = {lc.blocks for lc in local_covers(2, [(1, 1), (1, 1), (1, 1)])}
    assert ((1, ((1,), (1,), (1,))), (1, ((1,), (1,), (1,)))) in blocks


def test_genus_two_counts(g2_covers):
    assert len(g2_covers) == 3
    assert sum(i.contributing for i in g2_covers) == 3
    full = enumerate_all(2, "fully-labelled")
    assert len(full) == 105 and all(i.orbit_size == 1 for i in full)
    assert sum(i.orbit_size for i in g2_covers) == 105


def test_genus_three_counts(g3_covers):
    assert len(g3_covers) == 502
    assert sum(i.contributing for i in g3_covers) == 44


@pytest.mark.parametrize("fixture", ["g2_covers", "g3_covers"])
def test_structural_assertions(fixture, request):
    for info in request.getfixturevalue(fixture):
        c = info.cover
        assert weierstrass_profile_ok(c)
        if info.contributing:
            assert info.stabilization.is_trivalent()
            assert expunged_violations(c, info.stabilization) == []
            cases = loop_vertex_cases(info)
            assert set(cases.values()) <= {"A", "B", "C"}
            assert info.determinant != 0


def test_genus_cap():
    with pytest.raises(GenusCapExceeded):
        enumerate_all(5, cap=4)


def cover_key(c):
    # isomorphism class of the cover over a fixed target
    return canonical_key(c.source, respect_marking=False,
                         colours={f: (c.flag_map[f], c.degree[f]) for f in range(c.source.n_flags)})


@pytest.mark.parametrize("g", [2, 3])
def test_orbit_dedup_matches_canonical_dedup(g):
    # two independent ways of removing duplicate gluings
    for t in enumerate_trivalent_trees(3 * g, "interchangeable"):
        a = enumerate_covers_over_tree(t.graph, g=g, method="orbits")
        b = enumerate_covers_over_tree(t.graph, g=g, method="canonical")
        ka, kb = sorted(map(cover_key, a)), sorted(map(cover_key, b))
        assert ka == kb
        assert len(set(ka)) == len(ka)


def test_contributing_only_is_a_filter(g3_covers):
    fast = enumerate_all(3, contributing_only=True)
    full = [i for i in g3_covers if i.contributing]
    assert len(fast) == len(full) == 44
    pick = lambda infos: sorted((i.orbit_size, abs(i.determinant), cover_key(i.cover)) for i in infos)
    assert pick(fast) == pick(full)
