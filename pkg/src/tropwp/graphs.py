"""Discrete graphs with legs, in the flag formalism.

A graph is a finite set of flags ``0..n-1`` with a root map ``r`` and an
involution ``i`` such that ``i(r(f)) = r(f)``.  Vertices are the flags in the
image of ``r``, legs are the remaining fixed points of ``i`` and edges are
the orbits of size two.  An edge is identified by its smaller flag.
"""

from __future__ import annotations

import itertools
import math
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from . import _iso
from .errors import (
    GenusTooSmall,
    InvolutionNotIdempotent,
    MarkingNotBijective,
    NotTrivalent,
    RootInvolutionIncompatible,
    RootNotIdempotent,
    SubgraphHasCycle,
    SubgraphHasLegs,
)

__all__ = [
    "DiscreteGraph",
    "GraphBuilder",
    "validate_graph",
    "genus",
    "contract",
    "find_isomorphisms",
    "automorphisms",
    "canonical_key",
    "MarkedTree",
    "enumerate_trivalent_trees",
    "standard_families",
    "Stabilization",
    "forget_legs",
    "to_dot",
]


class DiscreteGraph:
    """Immutable flag graph.

    Parameters
    ----------
    root, involution:
        Sequences indexed by flag.
    marking:
        Optional sequence of leg flags; ``marking[i]`` is the leg labelled
        ``i + 1``.
    leg_weights:
        Optional mapping leg flag -> positive integer.
    names:
        Optional display names for vertex flags, edge keys and legs.
    """

    __slots__ = ("root", "involution", "marking", "leg_weights", "names", "__dict__")

    def __init__(self, root: Sequence[int], involution: Sequence[int],
                 marking: Sequence[int] | None = None,
                 leg_weights: Mapping[int, int] | None = None,
                 names: Mapping[int, str] | None = None):
        self.root = tuple(root)
        self.involution = tuple(involution)
        self.marking = tuple(marking) if marking is not None else None
        self.leg_weights = dict(leg_weights) if leg_weights else None
        self.names = dict(names) if names else {}
        _check(self)

    # -- derived data -------------------------------------------------
    @property
    def n_flags(self) -> int:
        return len(self.root)

    @cached_property
    def vertices(self) -> tuple[int, ...]:
        return tuple(f for f, r in enumerate(self.root) if r == f)

    @cached_property
    def legs(self) -> tuple[int, ...]:
        return tuple(f for f in range(self.n_flags)
                     if self.root[f] != f and self.involution[f] == f)

    @cached_property
    def edges(self) -> tuple[int, ...]:
        """Edge keys (the smaller flag of each 2-orbit)."""
        return tuple(f for f in range(self.n_flags) if self.involution[f] > f)

    @cached_property
    def flags_at(self) -> dict[int, tuple[int, ...]]:
        at: dict[int, list[int]] = {v: [] for v in self.vertices}
        for f, r in enumerate(self.root):
            if r != f:
                at[r].append(f)
        return {v: tuple(fs) for v, fs in at.items()}

    def is_vertex(self, f: int) -> bool:
        return self.root[f] == f

    def is_leg(self, f: int) -> bool:
        return self.root[f] != f and self.involution[f] == f

    def edge_key(self, h: int) -> int:
        return min(h, self.involution[h])

    def endpoints(self, e: int) -> tuple[int, int]:
        return self.root[e], self.root[self.involution[e]]

    def val(self, v: int) -> int:
        return len(self.flags_at[v])

    def legval(self, v: int) -> int:
        return sum(1 for f in self.flags_at[v] if self.involution[f] == f)

    def leg_label(self, leg: int) -> int | None:
        if self.marking is None:
            return None
        return self.marking.index(leg) + 1

    def name(self, f: int) -> str:
        return self.names.get(f, str(f))

    def find(self, name: str) -> int:
        for f, s in self.names.items():
            if s == name:
                return f
        raise KeyError(name)

    @cached_property
    def components(self) -> list[list[int]]:
        parent = {v: v for v in self.vertices}

        def top(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for e in self.edges:
            a, b = self.endpoints(e)
            parent[top(a)] = top(b)
        comps: dict[int, list[int]] = {}
        for v in self.vertices:
            comps.setdefault(top(v), []).append(v)
        return list(comps.values())

    def is_connected(self) -> bool:
        return len(self.components) <= 1

    # -- conversions --------------------------------------------------
    def without_legs(self) -> "DiscreteGraph":
        keep = [f for f in range(self.n_flags) if not self.is_leg(f)]
        return _restrict(self, keep)[0]

    def to_dict(self) -> dict:
        d: dict = {
            "flags": list(range(self.n_flags)),
            "root": {str(f): r for f, r in enumerate(self.root)},
            "involution": {str(f): i for f, i in enumerate(self.involution)},
        }
        if self.marking is not None:
            d["marking"] = {str(i + 1): leg for i, leg in enumerate(self.marking)}
        if self.leg_weights:
            d["legWeights"] = {str(k): v for k, v in sorted(self.leg_weights.items())}
        if self.names:
            d["names"] = {str(k): v for k, v in sorted(self.names.items())}
        return d

    def __eq__(self, other) -> bool:
        return (isinstance(other, DiscreteGraph) and self.root == other.root
                and self.involution == other.involution and self.marking == other.marking
                and (self.leg_weights or None) == (other.leg_weights or None))

    def __hash__(self) -> int:
        return hash((self.root, self.involution, self.marking))

    def __repr__(self) -> str:
        return (f"DiscreteGraph(|V|={len(self.vertices)}, |E|={len(self.edges)}, "
                f"|L|={len(self.legs)}, g={genus(self)})")


def _check(G: DiscreteGraph) -> None:
    r, i = G.root, G.involution
    n = len(r)
    if len(i) != n:
        raise InvolutionNotIdempotent("root and involution have different sizes")
    for f in range(n):
        if not (0 <= r[f] < n and 0 <= i[f] < n):
            raise InvolutionNotIdempotent(f"flag {f} maps outside the flag set")
        if i[i[f]] != f:
            raise InvolutionNotIdempotent(f"involution is not an involution at flag {f}")
        if r[r[f]] != r[f]:
            raise RootNotIdempotent(f"root is not idempotent at flag {f}")
        if i[r[f]] != r[f]:
            raise RootInvolutionIncompatible(f"involution moves the vertex {r[f]}")
    if G.marking is not None:
        legs = set(G.legs)
        if len(set(G.marking)) != len(G.marking) or set(G.marking) != legs:
            raise MarkingNotBijective("marking is not a bijection onto the legs")
    if G.leg_weights is not None:
        for leg, w in G.leg_weights.items():
            if leg not in G.legs or int(w) < 1:
                raise MarkingNotBijective(f"bad leg weight {leg}: {w}")


def _restrict(G: DiscreteGraph, keep: Sequence[int], root_override: Mapping[int, int] | None = None):
    """Renumber the flags ``keep`` densely (in order) and rebuild the graph."""
    new = {f: k for k, f in enumerate(keep)}
    ro = root_override or {}
    root = [new[ro.get(f, G.root[f])] for f in keep]
    inv = [new[G.involution[f]] for f in keep]
    marking = None
    if G.marking is not None:
        marking = [new[l] for l in G.marking if l in new]
    weights = None
    if G.leg_weights:
        weights = {new[l]: w for l, w in G.leg_weights.items() if l in new}
    names = {new[f]: s for f, s in G.names.items() if f in new}
    return DiscreteGraph(root, inv, marking, weights, names), new


def _key(x):
    try:
        return int(x)
    except (TypeError, ValueError):
        return x


def validate_graph(spec: Mapping) -> DiscreteGraph:
    """Build a graph from a JSON-like description.

    Flag identifiers may be arbitrary; they are renumbered densely in
    sorted order.
    """
    flags = sorted((_key(f) for f in spec["flags"]), key=lambda x: (isinstance(x, str), x))
    idx = {f: k for k, f in enumerate(flags)}

    def lookup(table, f):
        for k in (f, str(f)):
            if k in table:
                return _key(table[k])
        raise InvolutionNotIdempotent(f"flag {f} missing from table")

    try:
        root = [idx[lookup(spec["root"], f)] for f in flags]
        inv = [idx[lookup(spec["involution"], f)] for f in flags]
    except KeyError as exc:
        raise InvolutionNotIdempotent(f"unknown flag {exc}") from None
    marking = None
    if spec.get("marking"):
        m = {int(k): _key(v) for k, v in spec["marking"].items()}
        if sorted(m) != list(range(1, len(m) + 1)):
            raise MarkingNotBijective("marking indices must be 1..n")
        try:
            marking = [idx[m[k]] for k in sorted(m)]
        except KeyError as exc:
            raise MarkingNotBijective(f"marking refers to unknown flag {exc}") from None
    weights = None
    if spec.get("legWeights"):
        weights = {idx[_key(k)]: int(v) for k, v in spec["legWeights"].items()}
    names = {idx[_key(k)]: v for k, v in (spec.get("names") or {}).items()}
    return DiscreteGraph(root, inv, marking, weights, names)


def genus(G: DiscreteGraph) -> int:
    """First Betti number |E| - |V| + #components."""
    return len(G.edges) - len(G.vertices) + len(G.components)


def contract(G: DiscreteGraph, K: Iterable[int]) -> DiscreteGraph:
    """Contract a legless forest ``K`` given by edge flags (either flag of an edge)."""
    edges = set()
    for h in K:
        if G.is_vertex(h):
            continue
        if G.is_leg(h):
            raise SubgraphHasLegs(f"flag {h} is a leg")
        edges.add(G.edge_key(h))
    parent = {v: v for v in G.vertices}

    def top(v):
        while parent[v] != v:
            v = parent[v]
        return v

    for e in sorted(edges):
        a, b = (top(x) for x in G.endpoints(e))
        if a == b:
            raise SubgraphHasCycle(f"edge {e} closes a cycle")
        lo, hi = min(a, b), max(a, b)
        parent[hi] = lo
    removed = set()
    for e in edges:
        removed.update((e, G.involution[e]))
    removed.update(v for v in G.vertices if top(v) != v)
    keep = [f for f in range(G.n_flags) if f not in removed]
    override = {f: top(G.root[f]) for f in keep}
    return _restrict(G, keep, override)[0]


# -- isomorphisms ------------------------------------------------------

def _colours(G: DiscreteGraph, respect_marking: bool, extra: Mapping[int, object] | None = None):
    cols = []
    for f in range(G.n_flags):
        c: tuple = ()
        if respect_marking and G.is_leg(f):
            if G.marking is not None:
                c += ("m", G.marking.index(f))
            if G.leg_weights:
                c += ("w", G.leg_weights.get(f))
        if extra is not None:
            c += (extra.get(f),)
        cols.append(c)
    return cols


def find_isomorphisms(G1: DiscreteGraph, G2: DiscreteGraph, respect_marking: bool = True,
                      colours1: Mapping | None = None, colours2: Mapping | None = None,
                      limit: int | None = None) -> list[dict[int, int]]:
    """All flag bijections commuting with root and involution.

    With ``respect_marking`` the leg labels and leg weights must be preserved.
    Extra per-flag colours may be supplied and are then preserved too.
    """
    out = []
    it = _iso.iter_isomorphisms((G1.root, G1.involution), (G2.root, G2.involution),
                                _colours(G1, respect_marking, colours1),
                                _colours(G2, respect_marking, colours2))
    for phi in it:
        out.append(dict(enumerate(phi)))
        if limit is not None and len(out) >= limit:
            break
    return out


def automorphisms(G: DiscreteGraph, respect_marking: bool = True, colours: Mapping | None = None):
    return find_isomorphisms(G, G, respect_marking, colours, colours)


def canonical_key(G: DiscreteGraph, respect_marking: bool = True, colours: Mapping | None = None):
    key, _ = _iso.canonical_form(G.root, G.involution, _colours(G, respect_marking, colours))
    return key


# -- trees ---------------------------------------------------------------

class MarkedTree:
    """A trivalent genus-0 graph with all legs labelled, plus an orbit size.

    In the interchangeable mode ``orbit_size`` counts the labelled trees
    obtained by permuting the labels 2..m.
    """

    __slots__ = ("graph", "orbit_size", "automorphisms")

    def __init__(self, graph: DiscreteGraph, orbit_size: int = 1, automorphisms: int = 1):
        self.graph = graph
        self.orbit_size = orbit_size
        self.automorphisms = automorphisms

    def __repr__(self):
        return f"MarkedTree({self.graph!r}, orbit={self.orbit_size})"


def _tree_from_adjacency(adj: dict, leaves: Sequence, leaf_label: Mapping) -> DiscreteGraph:
    """Turn a tree on abstract nodes into a flag graph (leaves become legs)."""
    b = GraphBuilder()
    internal = [x for x in adj if x not in set(leaves)]
    vid = {x: b.vertex(f"N{k}") for k, x in enumerate(internal)}
    done = set()
    for x in internal:
        for y in adj[x]:
            if y in vid and (y, x) not in done:
                done.add((x, y))
                b.edge(vid[x], vid[y])
    legs = {}
    for leaf in leaves:
        (nb,) = adj[leaf]
        legs[leaf_label[leaf]] = b.leg(vid[nb], f"L{leaf_label[leaf]}")
    return b.build(marking=[legs[i] for i in sorted(legs)])


def _labelled_trees(m: int):
    # node ids: leaves are ('L', i); internal nodes are ints
    first = {("L", 1): [0], ("L", 2): [0], ("L", 3): [0], 0: [("L", 1), ("L", 2), ("L", 3)]}
    trees = [first]
    for k in range(4, m + 1):
        nxt = []
        for adj in trees:
            pairs = sorted({tuple(sorted((x, y), key=repr)) for x in adj for y in adj[x]}, key=repr)
            for x, y in pairs:
                new = {a: list(bs) for a, bs in adj.items()}
                z = k - 3
                new[x][new[x].index(y)] = z
                new[y][new[y].index(x)] = z
                new[z] = [x, y, ("L", k)]
                new[("L", k)] = [z]
                nxt.append(new)
        trees = nxt
    leaves = [("L", i) for i in range(1, m + 1)]
    return [_tree_from_adjacency(adj, leaves, {leaf: leaf[1] for leaf in leaves}) for adj in trees]


def _rooted_shapes(n: int, memo={}) -> list:
    """Unordered rooted binary trees with ``n`` unlabelled leaves as nested tuples."""
    if n in memo:
        return memo[n]
    if n == 1:
        res = ["*"]
    else:
        res = []
        for a in range(1, n // 2 + 1):
            b = n - a
            for s in _rooted_shapes(a):
                for t in _rooted_shapes(b):
                    if a == b and repr(s) > repr(t):
                        continue
                    res.append((s, t))
    memo[n] = res
    return res


def _shape_symmetries(s) -> int:
    if s == "*":
        return 0
    a, b = s
    return _shape_symmetries(a) + _shape_symmetries(b) + (1 if a == b else 0)


def _tree_from_shape(shape, m: int) -> DiscreteGraph:
    adj: dict = {}
    counter = itertools.count()
    labels: dict = {}
    leaves = []
    next_label = itertools.count(2)

    def build(s):
        if s == "*":
            node = ("L", next(next_label))
            labels[node] = node[1]
            leaves.append(node)
            adj[node] = []
            return node
        node = next(counter)
        adj[node] = []
        for child in s:
            c = build(child)
            adj[node].append(c)
            adj[c].append(node)
        return node

    root = build(shape)
    l1 = ("L", 1)
    adj[l1] = [root]
    adj[root].append(l1)
    labels[l1] = 1
    leaves.insert(0, l1)
    return _tree_from_adjacency(adj, leaves, labels)


def enumerate_trivalent_trees(m: int, mode: str = "fully-labelled") -> list[MarkedTree]:
    """Trivalent trees with ``m`` legs.

    ``mode`` is ``"fully-labelled"`` ((2m-5)!! trees) or ``"interchangeable"``
    (legs 2..m unlabelled; one representative per class with its orbit size).
    """
    if m < 3:
        raise NotTrivalent("need at least three legs")
    if mode in ("fully-labelled", "labelled"):
        return [MarkedTree(t) for t in _labelled_trees(m)]
    if mode in ("interchangeable", "quotient", "legs-2..m-interchangeable"):
        out = []
        for s in sorted(_rooted_shapes(m - 1), key=repr):
            aut = 2 ** _shape_symmetries(s)
            out.append(MarkedTree(_tree_from_shape(s, m), math.factorial(m - 1) // aut, aut))
        return out
    raise ValueError(f"unknown mode {mode!r}")


# -- named families --------------------------------------------------------

class GraphBuilder:
    """Incremental construction of flag graphs with named pieces."""

    def __init__(self):
        self.root: list[int] = []
        self.inv: list[int] = []
        self.names: dict[int, str] = {}
        self.weights: dict[int, int] = {}

    def _new(self, r: int | None) -> int:
        f = len(self.root)
        self.root.append(f if r is None else r)
        self.inv.append(f)
        return f

    def vertex(self, name: str | None = None) -> int:
        v = self._new(None)
        if name:
            self.names[v] = name
        return v

    def edge(self, u: int, v: int, name: str | None = None) -> tuple[int, int]:
        a, b = self._new(u), self._new(v)
        self.inv[a], self.inv[b] = b, a
        if name:
            self.names[a] = name
        return a, b

    def leg(self, v: int, name: str | None = None, weight: int | None = None) -> int:
        f = self._new(v)
        if name:
            self.names[f] = name
        if weight is not None:
            self.weights[f] = weight
        return f

    def build(self, marking: Sequence[int] | None = None) -> DiscreteGraph:
        return DiscreteGraph(self.root, self.inv, marking, self.weights or None, self.names)


def _og(g: int) -> DiscreteGraph:
    b = GraphBuilder()
    if g == 2:
        v1, v2 = b.vertex("V1"), b.vertex("V2")
        b.edge(v1, v1, "l1")
        b.edge(v2, v2, "l2")
        b.edge(v1, v2, "h1")
        return b.build()
    V = {i: b.vertex(f"V{i}") for i in range(1, g + 1)}
    W = {j: b.vertex(f"W{j}") for j in range(0, g - 2)}
    for i in range(1, g + 1):
        b.edge(V[i], V[i], f"l{i}")
    for j in range(0, g - 3):
        b.edge(W[j], W[j + 1], f"e{j}")
    b.edge(W[0], V[1], "h1")
    for i in range(2, g):
        b.edge(V[i], W[i - 2], f"h{i}")
    b.edge(V[g], W[g - 3], f"h{g}")
    return b.build()


def _tg(g: int) -> DiscreteGraph:
    b = GraphBuilder()
    B = {i: b.vertex(f"B{i}") for i in range(1, g + 1)}
    Bp = {i: b.vertex(f"B{i}'") for i in range(1, g + 1)}
    legs = {}
    for i in range(1, g + 1):
        b.edge(B[i], Bp[i], f"b{i}")
        legs[3 * i - 2] = b.leg(Bp[i], f"L{3 * i - 2}")
        legs[3 * i - 1] = b.leg(Bp[i], f"L{3 * i - 1}")
        legs[3 * i] = b.leg(B[i], f"L{3 * i}")
    if g == 2:
        b.edge(B[1], B[2], "q1")
    else:
        M = {j: b.vertex(f"M{j}") for j in range(0, g - 2)}
        for j in range(0, g - 3):
            b.edge(M[j], M[j + 1], f"m{j}")
        b.edge(M[0], B[1], "q1")
        for i in range(2, g):
            b.edge(B[i], M[i - 2], f"q{i}")
        b.edge(B[g], M[g - 3], f"q{g}")
    return b.build(marking=[legs[k] for k in sorted(legs)])


def standard_families(kind: str, g: int) -> DiscreteGraph:
    """The genus-g graph ``O_g`` (kind "O") or the 3g-marked tree ``T_g`` (kind "T")."""
    if g < 2:
        raise GenusTooSmall(f"g = {g} < 2")
    if kind.upper() == "O":
        return _og(g)
    if kind.upper() == "T":
        return _tg(g)
    raise ValueError(f"unknown family {kind!r}")


# -- forgetting legs -----------------------------------------------------------

class Stabilization:
    """Result of forgetting all legs and stabilising.

    Attributes
    ----------
    graph:
        The stable legless graph (flags renumbered).
    paths:
        For each edge key of ``graph``, the list of flags of the original
        graph traversed from one end to the other (each flag points away
        from the previous vertex).
    flag_origin:
        Map from flags of ``graph`` to flags of the original graph.
    expunged_edges, expunged_vertices:
        Edge keys / vertices of the original graph that disappear entirely.
    smoothed_vertices:
        Original 2-valent vertices that became interior points of edges.
    """

    def __init__(self, graph, paths, flag_origin, expunged_edges, expunged_vertices, smoothed_vertices):
        self.graph = graph
        self.paths = paths
        self.flag_origin = flag_origin
        self.expunged_edges = expunged_edges
        self.expunged_vertices = expunged_vertices
        self.smoothed_vertices = smoothed_vertices

    def is_trivalent(self) -> bool:
        return bool(self.graph.vertices) and all(self.graph.val(v) == 3 for v in self.graph.vertices)


def forget_legs(G: DiscreteGraph) -> Stabilization:
    """Forget legs, prune vertices of valency <= 1 and smooth 2-valent vertices."""
    alive_edges = set(G.edges)
    deg = {v: 0 for v in G.vertices}
    for e in alive_edges:
        a, b = G.endpoints(e)
        deg[a] += 1
        deg[b] += 1
    removed_v = set()
    stack = [v for v in G.vertices if deg[v] <= 1]
    while stack:
        v = stack.pop()
        if v in removed_v or deg[v] > 1:
            continue
        removed_v.add(v)
        for h in G.flags_at[v]:
            if G.is_leg(h):
                continue
            e = G.edge_key(h)
            if e in alive_edges:
                alive_edges.discard(e)
                for w in G.endpoints(e):
                    deg[w] -= 1
                    if w not in removed_v and deg[w] <= 1:
                        stack.append(w)
    core = [v for v in G.vertices if v not in removed_v]
    branch = [v for v in core if deg[v] >= 3]
    smoothed = [v for v in core if deg[v] == 2]
    alive_flags = {h for e in alive_edges for h in (e, G.involution[e])}
    used = set()
    b = GraphBuilder()
    vid = {v: b.vertex(G.names.get(v)) for v in branch}
    origin = {vid[v]: v for v in branch}
    paths = {}
    for v in branch:
        for h in G.flags_at[v]:
            if h not in alive_flags or h in used:
                continue
            path = [h]
            cur = h
            while True:
                u = G.root[G.involution[cur]]
                if u in vid:
                    break
                (nxt,) = [x for x in G.flags_at[u] if x in alive_flags and x != G.involution[cur]]
                path.append(nxt)
                cur = nxt
            end = G.involution[cur]
            used.add(h)
            used.add(end)
            a, c = b.edge(vid[v], vid[G.root[end]], G.names.get(G.edge_key(h)))
            origin[a], origin[c] = h, end
            paths[a] = path
    if not branch and alive_edges:
        # a single cycle: keep it as one vertex with a loop
        v = min(core)
        vid[v] = b.vertex(G.names.get(v))
        origin[vid[v]] = v
        h = next(x for x in G.flags_at[v] if x in alive_flags)
        path = [h]
        cur = h
        while G.root[G.involution[cur]] != v:
            u = G.root[G.involution[cur]]
            (nxt,) = [x for x in G.flags_at[u] if x in alive_flags and x != G.involution[cur]]
            path.append(nxt)
            cur = nxt
        a, c = b.edge(vid[v], vid[v])
        origin[a], origin[c] = h, G.involution[cur]
        paths[a] = path
        smoothed = [x for x in smoothed if x != v]
    graph = b.build()
    expunged_e = sorted(set(G.edges) - alive_edges)
    return Stabilization(graph, paths, origin, expunged_e, sorted(removed_v), smoothed)


# -- export ------------------------------------------------------------------

def to_dot(G: DiscreteGraph, edge_labels: Mapping[int, str] | None = None, name: str = "G") -> str:
    """Graphviz rendering: legs become edges to point-shaped anonymous nodes."""
    lines = [f"graph {name} {{"]
    for v in G.vertices:
        lines.append(f'  v{v} [label="{G.name(v)}"];')
    for e in G.edges:
        a, b = G.endpoints(e)
        label = G.name(e)
        if edge_labels and e in edge_labels:
            label += f" ({edge_labels[e]})"
        lines.append(f'  v{a} -- v{b} [label="{label}"];')
    for leg in G.legs:
        lab = G.name(leg)
        if G.marking is not None:
            lab = f"{G.leg_label(leg)}"
        if G.leg_weights and leg in G.leg_weights:
            lab += f" w={G.leg_weights[leg]}"
        lines.append(f'  l{leg} [shape=point, label=""];')
        lines.append(f'  v{G.root[leg]} -- l{leg} [label="{lab}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
