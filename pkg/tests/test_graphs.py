import itertools
import math

import pytest

from tropwp.errors import (
    GenusTooSmall,
    InvolutionNotIdempotent,
    MarkingNotBijective,
    RootInvolutionIncompatible,
    RootNotIdempotent,
    SubgraphHasCycle,
    SubgraphHasLegs,
)
from tropwp.graphs import (
    DiscreteGraph,
    GraphBuilder,
    automorphisms,
    canonical_key,
    contract,
    enumerate_trivalent_trees,
    find_isomorphisms,
    forget_legs,
    genus,
    standard_families,
    to_dot,
    validate_graph,
)


def brute_isomorphisms(G1, G2):
    """Oracle: every flag bijection that commutes with root and involution."""
    n = G1.n_flags
    if n != G2.n_flags:
        return 0
    count = 0
    for p in itertools.permutations(range(n)):
        if all(p[G1.root[f]] == G2.root[p[f]] and p[G1.involution[f]] == G2.involution[p[f]]
               for f in range(n)):
            count += 1
    return count


def theta():
    b = GraphBuilder()
    u, v = b.vertex("u"), b.vertex("v")
    for k in range(3):
        b.edge(u, v, f"e{k}")
    return b.build()


def test_validation_errors():
    with pytest.raises(InvolutionNotIdempotent):
        DiscreteGraph([0, 0, 0], [0, 2, 0])
    with pytest.raises(RootNotIdempotent):
        DiscreteGraph([1, 2, 2], [0, 1, 2])
    with pytest.raises(RootInvolutionIncompatible):
        DiscreteGraph([0, 0], [1, 0])
    with pytest.raises(MarkingNotBijective):
        DiscreteGraph([0, 0, 0], [0, 1, 2], marking=[1, 1])


def test_validate_graph_renumbers_and_roundtrips():
    spec = {"flags": ["a", "b", "c"], "root": {"a": "a", "b": "a", "c": "a"},
            "involution": {"a": "a", "b": "b", "c": "c"}, "marking": {"1": "c", "2": "b"}}
    G = validate_graph(spec)
    assert G.n_flags == 3 and len(G.legs) == 2 and G.marking == (2, 1)
    O = standard_families("O", 3)
    assert validate_graph(O.to_dict()) == O


@pytest.mark.parametrize("g", [2, 3, 4, 5])
def test_families_genus_and_shape(g):
    O, T = standard_families("O", g), standard_families("T", g)
    assert genus(O) == g and all(O.val(v) == 3 for v in O.vertices)
    assert genus(T) == 0 and len(T.legs) == 3 * g and T.marking is not None
    assert all(T.val(v) == 3 for v in T.vertices)


def test_genus_too_small():
    with pytest.raises(GenusTooSmall):
        standard_families("O", 1)


@pytest.mark.parametrize("g,expected", [(2, 8), (3, 48), (4, 128), (5, 256)])
def test_automorphisms_of_o(g, expected):
    assert len(automorphisms(standard_families("O", g), False)) == expected


@pytest.mark.parametrize("make", [lambda: standard_families("O", 2), theta])
def test_isomorphisms_match_brute_force(make):
    G = make()
    assert len(automorphisms(G, False)) == brute_isomorphisms(G, G)


def test_isomorphism_between_relabelled_copies():
    G = standard_families("O", 3)
    n = G.n_flags
    perm = list(range(n))[::-1]
    inv = {p: k for k, p in enumerate(perm)}
    H = DiscreteGraph([perm[G.root[inv[f]]] for f in range(n)],
                      [perm[G.involution[inv[f]]] for f in range(n)])
    assert len(find_isomorphisms(G, H, False)) == 48
    assert canonical_key(G, False) == canonical_key(H, False)
    assert canonical_key(G, False) != canonical_key(theta(), False)


def test_contract():
    O = standard_families("O", 2)
    C = contract(O, [O.find("h1")])
    assert len(C.vertices) == 1 and genus(C) == 2
    with pytest.raises(SubgraphHasCycle):
        contract(O, [O.find("l1")])
    T = standard_families("T", 2)
    with pytest.raises(SubgraphHasLegs):
        contract(T, [T.legs[0]])


def double_factorial(k):
    return math.prod(range(k, 0, -2))


@pytest.mark.parametrize("m", [3, 4, 5, 6, 7])
def test_tree_counts(m):
    full = enumerate_trivalent_trees(m)
    assert len(full) == double_factorial(2 * m - 5)
    assert len({canonical_key(t.graph) for t in full}) == len(full)
    quot = enumerate_trivalent_trees(m, "interchangeable")
    assert sum(t.orbit_size for t in quot) == len(full)
    for t in quot:
        assert t.orbit_size * t.automorphisms == math.factorial(m - 1)
    shapes = {canonical_key(t.graph, False) for t in full}
    assert len(shapes) <= len(quot)


def test_forget_legs_on_tree_family():
    s = forget_legs(standard_families("T", 3))
    assert len(s.graph.vertices) == 0 or not s.is_trivalent()
    s2 = forget_legs(standard_families("O", 3))
    assert s2.is_trivalent() and len(s2.graph.edges) == 3 * 3 - 3


def test_forget_legs_smooths_and_prunes():
    b = GraphBuilder()
    u, v, w = b.vertex(), b.vertex(), b.vertex()
    b.edge(u, u)
    b.edge(u, v)
    b.edge(v, w)
    b.leg(w)
    b.leg(v)
    G = b.build()
    s = forget_legs(G)
    assert len(s.graph.vertices) == 1 and len(s.graph.edges) == 1
    assert w in s.expunged_vertices and v in s.expunged_vertices


def test_to_dot():
    text = to_dot(standard_families("O", 2))
    assert text.startswith("graph G {") and "V1" in text and text.rstrip().endswith("}")
