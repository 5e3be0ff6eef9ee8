"""Discrete admissible covers, their matrices and realisations."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Mapping, Sequence

from .divisors import Divisor, MetricGraph, Point, as_fraction, canonical_divisor, vertex_point
from .errors import (
    FiberDegreeMismatch,
    LegBlockMismatch,
    MapContractsEdge,
    NonpositiveLength,
    NotAGraphMap,
    NotHarmonic,
    RHNonzero,
)
from .graphs import DiscreteGraph, _restrict, forget_legs, genus, validate_graph

__all__ = [
    "Cover",
    "validate_cover",
    "rh_equality_check",
    "CoverMatrices",
    "matrices",
    "induced_source_metric",
    "RealizedCover",
    "cover_to_dict",
    "cover_from_dict",
]


class Cover:
    """A map of graphs ``source -> target`` with a degree on every source flag."""

    __slots__ = ("source", "target", "flag_map", "degree", "__dict__")

    def __init__(self, source: DiscreteGraph, target: DiscreteGraph,
                 flag_map: Sequence[int] | Mapping[int, int],
                 degree: Sequence[int] | Mapping[int, int], check: bool = True):
        self.source = source
        self.target = target
        n = source.n_flags
        if isinstance(flag_map, Mapping):
            flag_map = [flag_map[f] for f in range(n)]
        if isinstance(degree, Mapping):
            degree = [degree[f] for f in range(n)]
        self.flag_map = tuple(int(x) for x in flag_map)
        self.degree = tuple(int(x) for x in degree)
        if check:
            _validate(self)

    def __call__(self, f: int) -> int:
        return self.flag_map[f]

    @cached_property
    def deg(self) -> int:
        t = self.target.vertices[0]
        return sum(self.degree[v] for v in self.source.vertices if self.flag_map[v] == t)

    def preimage(self, h: int) -> list[int]:
        return [f for f in range(self.source.n_flags) if self.flag_map[f] == h]

    @cached_property
    def edge_fibers(self) -> dict[int, list[int]]:
        """Target edge key -> source edge keys over it."""
        out: dict[int, list[int]] = {h: [] for h in self.target.edges}
        for e in self.source.edges:
            out[self.target.edge_key(self.flag_map[e])].append(e)
        return out

    def fiber_lcm(self, h: int) -> int:
        return math.lcm(*(self.degree[e] for e in self.edge_fibers[h]))

    def local_partitions(self, V: int) -> dict[int, tuple[int, ...]]:
        """For each target flag at pi(V), the partition of d(V) formed by flags of V over it."""
        A = self.flag_map[V]
        parts: dict[int, list[int]] = {h: [] for h in self.target.flags_at[A]}
        for f in self.source.flags_at[V]:
            parts[self.flag_map[f]].append(self.degree[f])
        return {h: tuple(sorted(p, reverse=True)) for h, p in parts.items()}

    def rh_number(self, V: int) -> int:
        A = self.flag_map[V]
        return self.source.val(V) - 2 - self.degree[V] * (self.target.val(A) - 2)

    def __repr__(self) -> str:
        return f"Cover(deg={self.deg}, source={self.source!r}, target={self.target!r})"


def _validate(c: Cover) -> None:
    G, H, pi, d = c.source, c.target, c.flag_map, c.degree
    if len(pi) != G.n_flags or len(d) != G.n_flags:
        raise NotAGraphMap("flag map and degree must cover every source flag")
    for f in range(G.n_flags):
        if not 0 <= pi[f] < H.n_flags:
            raise NotAGraphMap(f"flag {f} maps outside the target")
        if pi[G.root[f]] != H.root[pi[f]]:
            raise NotAGraphMap(f"flag map does not commute with root at {f}")
        if pi[G.involution[f]] != H.involution[pi[f]]:
            raise NotAGraphMap(f"flag map does not commute with the involution at {f}")
        if H.is_vertex(pi[f]) and not G.is_vertex(f):
            raise MapContractsEdge(f"flag {f} is mapped to a vertex")
        if d[f] < 1 or d[G.involution[f]] != d[f]:
            raise NotAGraphMap(f"bad degree at flag {f}")
    if set(pi) != set(range(H.n_flags)):
        raise NotAGraphMap("flag map is not surjective")
    for V in G.vertices:
        for h, part in c.local_partitions(V).items():
            if sum(part) != d[V]:
                raise NotHarmonic(f"vertex {V}: degrees over target flag {h} sum to {sum(part)}, not {d[V]}")
        if c.rh_number(V) != 0:
            raise RHNonzero(f"vertex {V} has Riemann-Hurwitz number {c.rh_number(V)}")
    for A in H.vertices:
        s = sum(d[V] for V in G.vertices if pi[V] == A)
        if s != c.deg:
            raise FiberDegreeMismatch(f"fiber over {A} has degree {s}, expected {c.deg}")
    if G.leg_weights:
        for leg, w in G.leg_weights.items():
            if d[leg] != w:
                raise LegBlockMismatch(f"leg {leg} has weight {w} but degree {d[leg]}")
    if G.marking is not None and H.marking is not None:
        seq = [(H.marking.index(pi[leg]), -d[leg]) for leg in G.marking]
        if seq != sorted(seq):
            raise LegBlockMismatch("source leg markings do not follow the target blocks")


def validate_cover(spec) -> Cover:
    """Build and validate a cover from a :class:`Cover` or a JSON-like mapping."""
    if isinstance(spec, Cover):
        return Cover(spec.source, spec.target, spec.flag_map, spec.degree)
    return cover_from_dict(spec)


def rh_equality_check(c: Cover) -> int:
    """Residual of the global Riemann-Hurwitz equality (zero for admissible covers)."""
    G, H = c.source, c.target
    lhs = len(G.legs) + 2 * (genus(G) - 1)
    rhs = c.deg * (len(H.legs) + 2 * (genus(H) - 1))
    return lhs - rhs - sum(c.rh_number(V) for V in G.vertices)


@dataclass
class CoverMatrices:
    """Rows are source edges, columns target edges (both as edge keys)."""

    rows: list[int]
    cols: list[int]
    F: list[list[int]]
    I: list[list[Fraction]]
    Dlcm: list[list[int]]


def matrices(c: Cover) -> CoverMatrices:
    rows, cols = list(c.source.edges), list(c.target.edges)
    col = {h: j for j, h in enumerate(cols)}
    lcms = [c.fiber_lcm(h) for h in cols]
    F = [[0] * len(cols) for _ in rows]
    I = [[Fraction(0)] * len(cols) for _ in rows]
    for i, e in enumerate(rows):
        j = col[c.target.edge_key(c.flag_map[e])]
        F[i][j] = lcms[j] // c.degree[e]
        I[i][j] = Fraction(1, c.degree[e])
    D = [[lcms[j] if j == k else 0 for k in range(len(cols))] for j in range(len(cols))]
    return CoverMatrices(rows, cols, F, I, D)


def induced_source_metric(c: Cover, delta: Mapping[int, object], which: str = "I") -> dict[int, Fraction]:
    """Source edge lengths from target lengths (keyed by edge key)."""
    out = {}
    for h in c.target.edges:
        if as_fraction(delta[h]) <= 0:
            raise NonpositiveLength(f"target edge {h} has length {delta[h]}")
    for e in c.source.edges:
        h = c.target.edge_key(c.flag_map[e])
        x = as_fraction(delta[h])
        if which == "I":
            out[e] = x / c.degree[e]
        elif which == "F":
            out[e] = x * (c.fiber_lcm(h) // c.degree[e])
        else:
            raise ValueError(f"which must be 'I' or 'F', got {which!r}")
    return out


def ft_matrix(c: Cover, stab=None) -> tuple[list[int], list[list[int]]]:
    """Matrix of ft o F: rows are the edges of the stabilised source."""
    stab = stab or forget_legs(c.source)
    cols = list(c.target.edges)
    col = {h: j for j, h in enumerate(cols)}
    rows = list(stab.graph.edges)
    M = []
    for a in rows:
        row = [0] * len(cols)
        for f in stab.paths[a]:
            h = c.target.edge_key(c.flag_map[f])
            row[col[h]] += c.fiber_lcm(h) // c.degree[f]
        M.append(row)
    return rows, M


class RealizedCover:
    """A cover together with a metric on the (legless) target.

    The source carries the induced metric ``delta(pi(e)) / d(e)``.  Use
    :meth:`from_F` to realise the metric ``F(delta)`` instead.
    """

    def __init__(self, cover: Cover, target_lengths: Mapping[int, object]):
        self.cover = cover
        H, G = cover.target, cover.source
        keepH = [f for f in range(H.n_flags) if not H.is_leg(f)]
        keepG = [f for f in range(G.n_flags) if not G.is_leg(f)]
        Hn, self._h = _restrict(H, keepH)
        Gn, self._g = _restrict(G, keepG)
        self._h_back = {v: k for k, v in self._h.items()}
        self._g_back = {v: k for k, v in self._g.items()}
        self.delta = {h: as_fraction(target_lengths[h]) for h in H.edges}
        self.target = MetricGraph(Hn, {self._h[h]: x for h, x in self.delta.items()})
        lengths = induced_source_metric(cover, self.delta, "I")
        self.source = MetricGraph(Gn, {self._g[e]: x for e, x in lengths.items()})

    @classmethod
    def from_F(cls, cover: Cover, delta: Mapping[int, object]) -> "RealizedCover":
        return cls(cover, {h: as_fraction(delta[h]) * cover.fiber_lcm(h) for h in cover.target.edges})

    def source_point(self, f: int) -> Point:
        """The vertex point of an original source vertex flag."""
        return vertex_point(self._g[f])

    def target_point(self, f: int) -> Point:
        return vertex_point(self._h[f])

    def pullback(self, D: Divisor) -> Divisor:
        c = self.cover
        items = []
        for x, k in D.items():
            if x.is_vertex:
                A = self._h_back[x.vertex]
                for V in c.source.vertices:
                    if c.flag_map[V] == A:
                        items.append((vertex_point(self._g[V]), k * c.degree[V]))
                continue
            h = self._h_back[x.edge]
            L = self.delta[h]
            for e in c.edge_fibers[h]:
                de = c.degree[e]
                t = x.offset if c.flag_map[e] == h else L - x.offset
                items.append((self.source.point(self._g[e], t / de), k * de))
        return Divisor(items)

    def pushforward(self, D: Divisor) -> Divisor:
        c = self.cover
        items = []
        for y, k in D.items():
            if y.is_vertex:
                items.append((vertex_point(self._h[c.flag_map[self._g_back[y.vertex]]]), k))
                continue
            e = self._g_back[y.edge]
            h = c.target.edge_key(c.flag_map[e])
            t = y.offset * c.degree[e]
            if c.flag_map[e] != h:
                t = self.delta[h] - t
            items.append((self.target.point(self._h[h], t), k))
        return Divisor(items)

    def ramification_divisor(self) -> Divisor:
        c = self.cover
        items = []
        for V in c.source.vertices:
            A = c.flag_map[V]
            r = (self.source.model.val(self._g[V]) - 2
                 - c.degree[V] * (self.target.model.val(self._h[A]) - 2))
            items.append((vertex_point(self._g[V]), r))
        return Divisor(items)

    def canonical_identity_residual(self) -> Divisor:
        """K_source - pi^* K_target - R; the zero divisor for every cover."""
        return (canonical_divisor(self.source) - self.pullback(canonical_divisor(self.target))
                - self.ramification_divisor())


def cover_to_dict(c: Cover) -> dict:
    return {
        "source": c.source.to_dict(),
        "target": c.target.to_dict(),
        "flagMap": {str(f): h for f, h in enumerate(c.flag_map)},
        "degree": {str(f): k for f, k in enumerate(c.degree)},
    }


def cover_from_dict(d: Mapping) -> Cover:
    G = validate_graph(d["source"])
    H = validate_graph(d["target"])
    n = G.n_flags
    fm = {int(k): int(v) for k, v in d["flagMap"].items()}
    dg = {int(k): int(v) for k, v in d["degree"].items()}
    if sorted(fm) != list(range(n)) or sorted(dg) != list(range(n)):
        raise NotAGraphMap("flagMap and degree must list every source flag")
    return Cover(G, H, fm, dg)
