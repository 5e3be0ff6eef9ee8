"""Metric graphs, divisors, reduced divisors and Baker-Norine ranks.

Two rank backends are provided.

``subdivision``
    Scale all lengths and offsets to integers, subdivide into unit
    segments and compute the rank of the resulting finite graph, testing
    every effective divisor supported on subdivision vertices.
``metric``
    Work directly on the metric graph with Dhar's burning algorithm for
    metric graphs; candidate divisors are supported on the model vertices
    together with one interior point of every loop, which is a
    rank-determining set.

Both are exact.  They are compared against each other in the test-suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import (
    DivisorError,
    GenusTooSmall,
    IrrationalSupport,
    NonpositiveLength,
    SubdivisionTooLarge,
)
from .graphs import DiscreteGraph, genus as graph_genus

DEFAULT_BUDGET = 5000


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise IrrationalSupport("floating point values are not accepted; use p/q strings")
    try:
        return Fraction(x)
    except (TypeError, ValueError):
        raise IrrationalSupport(f"cannot interpret {x!r} as an exact rational") from None


def fmt(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True, order=True)
class Point:
    """A point of a metric graph: a model vertex, or an edge with an offset.

    Offsets are measured from the root of the edge key (the smaller flag).
    Use :meth:`MetricGraph.point` to build normalised points.
    """

    edge: int  # -1 for vertices
    offset: Fraction
    vertex: int = -1

    @property
    def is_vertex(self) -> bool:
        return self.edge < 0

    def __repr__(self) -> str:
        if self.is_vertex:
            return f"Point(vertex={self.vertex})"
        return f"Point(edge={self.edge}, offset={fmt(self.offset)})"


def vertex_point(v: int) -> Point:
    return Point(-1, Fraction(0), v)


class MetricGraph:
    """A legless connected model graph with positive rational edge lengths."""

    def __init__(self, model: DiscreteGraph, lengths: Mapping[int, object]):
        if model.legs:
            model = model.without_legs()
        if not model.is_connected():
            raise DivisorError("metric graphs must be connected")
        self.model = model
        self.lengths = {}
        for e in model.edges:
            if e not in lengths:
                raise NonpositiveLength(f"no length for edge {e}")
            x = as_fraction(lengths[e])
            if x <= 0:
                raise NonpositiveLength(f"edge {e} has length {x}")
            self.lengths[e] = x

    @classmethod
    def from_list(cls, model: DiscreteGraph, lengths: Sequence) -> "MetricGraph":
        model = model.without_legs() if model.legs else model
        if len(lengths) != len(model.edges):
            raise NonpositiveLength(f"expected {len(model.edges)} lengths, got {len(lengths)}")
        return cls(model, dict(zip(model.edges, lengths)))

    @cached_property
    def genus(self) -> int:
        return graph_genus(self.model)

    def point(self, edge: int | None = None, offset=0, vertex: int | None = None) -> Point:
        if vertex is not None:
            if not self.model.is_vertex(vertex):
                raise DivisorError(f"{vertex} is not a vertex")
            return vertex_point(vertex)
        e = self.model.edge_key(edge)
        t = as_fraction(offset)
        if e != edge:
            t = self.lengths[e] - t
        L = self.lengths[e]
        if t < 0 or t > L:
            raise DivisorError(f"offset {t} outside edge {e} of length {L}")
        if t == 0:
            return vertex_point(self.model.root[e])
        if t == L:
            return vertex_point(self.model.root[self.model.involution[e]])
        return Point(e, t)

    def vertex_by_name(self, name: str) -> Point:
        return vertex_point(self.model.find(name))

    def edge_by_name(self, name: str) -> int:
        return self.model.find(name)

    def scaled(self, c) -> "MetricGraph":
        c = as_fraction(c)
        return MetricGraph(self.model, {e: L * c for e, L in self.lengths.items()})

    def scale_point(self, p: Point, c) -> Point:
        if p.is_vertex:
            return p
        return Point(p.edge, p.offset * as_fraction(c))

    def total_length(self) -> Fraction:
        return sum(self.lengths.values(), Fraction(0))

    def isometries(self) -> list[dict[int, int]]:
        """Length-preserving automorphisms of the model (as flag maps)."""
        from .graphs import automorphisms
        cols = {}
        for e, L in self.lengths.items():
            cols[e] = cols[self.model.involution[e]] = ("len", L)
        return automorphisms(self.model, False, cols)

    def transport(self, p: Point, sigma: Mapping[int, int]) -> Point:
        """Image of a point under a flag automorphism ``sigma`` of the model."""
        if p.is_vertex:
            return vertex_point(sigma[p.vertex])
        return self.point(sigma[p.edge], p.offset)


class Divisor:
    """Finitely supported integer combination of points."""

    __slots__ = ("_d", "_h")

    def __init__(self, data: Mapping[Point, int] | Iterable[tuple[Point, int]] = ()):
        items = data.items() if isinstance(data, Mapping) else data
        d: dict[Point, int] = {}
        for p, c in items:
            if c:
                d[p] = d.get(p, 0) + int(c)
        self._d = {p: c for p, c in d.items() if c}
        self._h = None

    def __getitem__(self, p: Point) -> int:
        return self._d.get(p, 0)

    def items(self):
        return sorted(self._d.items())

    def support(self) -> list[Point]:
        return sorted(self._d)

    @property
    def degree(self) -> int:
        return sum(self._d.values())

    def is_effective(self) -> bool:
        return all(c > 0 for c in self._d.values())

    def positive(self) -> "Divisor":
        return Divisor({p: c for p, c in self._d.items() if c > 0})

    def negative(self) -> "Divisor":
        return Divisor({p: -c for p, c in self._d.items() if c < 0})

    def __add__(self, other: "Divisor") -> "Divisor":
        d = dict(self._d)
        for p, c in other._d.items():
            d[p] = d.get(p, 0) + c
        return Divisor(d)

    def __neg__(self) -> "Divisor":
        return Divisor({p: -c for p, c in self._d.items()})

    def __sub__(self, other: "Divisor") -> "Divisor":
        return self + (-other)

    def __rmul__(self, k: int) -> "Divisor":
        return Divisor({p: k * c for p, c in self._d.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, Divisor) and self._d == other._d

    def __hash__(self) -> int:
        if self._h is None:
            self._h = hash(frozenset(self._d.items()))
        return self._h

    def __repr__(self) -> str:
        return "Divisor(" + " + ".join(f"{c}*{p!r}" for p, c in self.items()) + ")"


def point_divisor(p: Point, k: int = 1) -> Divisor:
    return Divisor({p: k})


def canonical_divisor(G: MetricGraph) -> Divisor:
    """Sum of (val(v) - 2)[v] over model vertices."""
    m = G.model
    return Divisor({vertex_point(v): m.val(v) - 2 for v in m.vertices})


# -- divisor JSON ---------------------------------------------------------------

def divisor_to_json(G: MetricGraph, D: Divisor) -> list:
    out = []
    for p, c in D.items():
        if p.is_vertex:
            out.append({"at": p.vertex, "coeff": c})
        else:
            out.append({"at": {"edge": p.edge, "offset": fmt(p.offset)}, "coeff": c})
    return out


def divisor_from_json(G: MetricGraph, data: Sequence[Mapping]) -> Divisor:
    items = []
    for entry in data:
        at = entry["at"]
        if isinstance(at, Mapping):
            p = G.point(int(at["edge"]), at.get("offset", 0))
        else:
            p = G.point(vertex=int(at))
        items.append((p, int(entry["coeff"])))
    return Divisor(items)


# -- metric Dhar -------------------------------------------------------------------

class _Refined:
    """Model refined at a finite set of points, as a list of segments."""

    def __init__(self, G: MetricGraph, pts: Iterable[Point]):
        m = G.model
        inner: dict[int, list[Fraction]] = {}
        for p in pts:
            if not p.is_vertex:
                inner.setdefault(p.edge, []).append(p.offset)
        self.segments = []  # (u, w, length, edge, start, end)
        self.at: dict[Point, list[int]] = {}
        for v in m.vertices:
            self.at[vertex_point(v)] = []
        for e in m.edges:
            L = G.lengths[e]
            offs = sorted(set(inner.get(e, ())))
            nodes = [vertex_point(m.root[e])] + [Point(e, t) for t in offs] + [vertex_point(m.root[m.involution[e]])]
            cuts = [Fraction(0)] + offs + [L]
            for k in range(len(nodes) - 1):
                u, w = nodes[k], nodes[k + 1]
                s = len(self.segments)
                self.segments.append((u, w, cuts[k + 1] - cuts[k], e, cuts[k], cuts[k + 1]))
                self.at.setdefault(u, []).append(s)
                self.at.setdefault(w, []).append(s)


def _along(G: MetricGraph, seg, frm: Point, eps: Fraction) -> Point:
    u, w, length, e, a, b = seg
    if eps == length:
        return w if frm == u else u
    if frm == u:
        return Point(e, a + eps)
    return Point(e, b - eps)


def reduce_divisor(G: MetricGraph, D: Divisor, q: Point, max_steps: int = 100000) -> Divisor:
    """The q-reduced divisor equivalent to ``D`` (which must be effective away from q)."""
    D = dict(D._d)
    for p, c in D.items():
        if c < 0 and p != q:
            raise DivisorError("reduction needs a divisor effective away from q")
    for _ in range(max_steps):
        R = _Refined(G, list(D) + [q])
        segs = R.segments
        burnt = {q}
        seg_burnt = [False] * len(segs)
        cnt: dict[Point, int] = {}
        stack = [q]
        while stack:
            u = stack.pop()
            for s in R.at[u]:
                if seg_burnt[s]:
                    continue
                seg_burnt[s] = True
                a, b = segs[s][0], segs[s][1]
                other = b if a == u else a
                if other in burnt:
                    continue
                cnt[other] = cnt.get(other, 0) + 1
                if cnt[other] > D.get(other, 0):
                    burnt.add(other)
                    stack.append(other)
        unburnt = [u for u in R.at if u not in burnt]
        if not unburnt:
            return Divisor(D)
        eps = None
        moves = []
        for u in unburnt:
            for s in R.at[u]:
                if seg_burnt[s]:
                    moves.append((u, s))
                    L = segs[s][2]
                    if eps is None or L < eps:
                        eps = L
        for u, s in moves:
            D[u] = D.get(u, 0) - 1
            x = _along(G, segs[s], u, eps)
            D[x] = D.get(x, 0) + 1
        D = {p: c for p, c in D.items() if c}
    raise DivisorError("reduction did not terminate")


def effective_representative(G: MetricGraph, D: Divisor, reducer=None) -> Divisor | None:
    """An effective divisor equivalent to ``D`` or ``None`` if |D| is empty."""
    reducer = reducer or (lambda E, q: reduce_divisor(G, E, q))
    F = D.positive()
    for p, c in D.negative().items():
        for _ in range(c):
            F = reducer(F, p)
            if F[p] < 1:
                return None
            F = F - point_divisor(p)
    return F


def rank_determining_points(G: MetricGraph) -> list[Point]:
    m = G.model
    pts = [vertex_point(v) for v in m.vertices]
    for e in m.edges:
        a, b = m.endpoints(e)
        if a == b:
            pts.append(Point(e, G.lengths[e] / 2))
    return pts


class _RankSearch:
    """Shared recursion: is |D - E| nonempty for every effective E of degree k on A?"""

    def __init__(self, reducer, candidates, base):
        self.reducer = reducer
        self.A = candidates
        self.base = base
        self.memo: dict = {}

    def all_removable(self, F: Divisor, k: int, start: int = 0) -> bool:
        if k == 0:
            return True
        key = (self.reducer(F, self.base), k, start)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        ok = True
        for i in range(start, len(self.A)):
            v = self.A[i]
            Fv = self.reducer(F, v)
            if Fv[v] < 1 or not self.all_removable(Fv - point_divisor(v), k - 1, i):
                ok = False
                break
        self.memo[key] = ok
        return ok

    def rank(self, D: Divisor, effective_rep) -> int:
        if D.degree < 0:
            return -1
        F = effective_rep(D)
        if F is None:
            return -1
        r = 0
        while r < D.degree and self.all_removable(F, r + 1):
            r += 1
        return r


# -- subdivision backend ------------------------------------------------------------------

class Subdivision:
    """Unit subdivision of a metric graph after scaling lengths to integers."""

    def __init__(self, G: MetricGraph, extra: Iterable[Point] = (), refine: int = 1,
                 budget: int = DEFAULT_BUDGET):
        dens = [L.denominator for L in G.lengths.values()]
        dens += [p.offset.denominator for p in extra if not p.is_vertex]
        scale = math.lcm(*dens) * refine
        m = G.model
        if any(a == b and G.lengths[e] * scale == 1 for e in m.edges for a, b in [m.endpoints(e)]):
            scale *= 2
        self.scale = scale
        size = len(m.vertices) + sum(int(L * scale) - 1 for L in G.lengths.values())
        if size > budget:
            raise SubdivisionTooLarge(f"unit subdivision needs {size} vertices (budget {budget})")
        self.G = G
        self.index: dict[tuple, int] = {}
        for v in m.vertices:
            self.index[("v", v)] = len(self.index)
        self.adj: list[list[int]] = [[] for _ in m.vertices]
        for e in m.edges:
            n = int(G.lengths[e] * scale)
            prev = self.index[("v", m.root[e])]
            for k in range(1, n):
                cur = len(self.adj)
                self.index[("e", e, k)] = cur
                self.adj.append([])
                self.adj[prev].append(cur)
                self.adj[cur].append(prev)
                prev = cur
            last = self.index[("v", m.root[m.involution[e]])]
            self.adj[prev].append(last)
            self.adj[last].append(prev)
        self.n = len(self.adj)

    def vertex_of(self, p: Point) -> int:
        if p.is_vertex:
            return self.index[("v", p.vertex)]
        t = p.offset * self.scale
        if t.denominator != 1:
            raise IrrationalSupport(f"{p} is not a subdivision vertex")
        return self.index[("e", p.edge, int(t))]

    def vector(self, D: Divisor) -> tuple[int, ...]:
        vec = [0] * self.n
        for p, c in D.items():
            vec[self.vertex_of(p)] += c
        return tuple(vec)

    def reduce(self, D: tuple[int, ...], q: int) -> tuple[int, ...]:
        D = list(D)
        adj = self.adj
        while True:
            burnt = [False] * self.n
            burnt[q] = True
            cnt = [0] * self.n
            stack = [q]
            while stack:
                u = stack.pop()
                for w in adj[u]:
                    if not burnt[w]:
                        cnt[w] += 1
                        if cnt[w] > D[w]:
                            burnt[w] = True
                            stack.append(w)
            if all(burnt):
                return tuple(D)
            for u in range(self.n):
                if not burnt[u]:
                    for w in adj[u]:
                        if burnt[w]:
                            D[u] -= 1
                            D[w] += 1


class _VecDivisor:
    """Adapter giving subdivision vectors the small interface used by _RankSearch."""

    __slots__ = ("v",)

    def __init__(self, v):
        self.v = tuple(v)

    def __getitem__(self, i):
        return self.v[i]

    def __sub__(self, other):
        return _VecDivisor(a - b for a, b in zip(self.v, other.v))

    def __eq__(self, other):
        return self.v == other.v

    def __hash__(self):
        return hash(self.v)


def _subdivision_rank(G: MetricGraph, D: Divisor, refine: int, budget: int) -> int:
    S = Subdivision(G, D.support(), refine, budget)
    if D.degree < 0:
        return -1
    vec = S.vector(D)
    n = S.n

    def unit(i):
        v = [0] * n
        v[i] = 1
        return _VecDivisor(v)

    def reducer(F, q):
        return _VecDivisor(S.reduce(F.v, q))

    def eff(_D):
        F = [max(c, 0) for c in vec]
        for i, c in enumerate(vec):
            for _ in range(-c if c < 0 else 0):
                F = list(S.reduce(tuple(F), i))
                if F[i] < 1:
                    return None
                F[i] -= 1
        return _VecDivisor(F)

    class _Search(_RankSearch):
        def all_removable(self, F, k, start=0):
            if k == 0:
                return True
            key = (self.reducer(F, self.base), k, start)
            hit = self.memo.get(key)
            if hit is not None:
                return hit
            ok = True
            for i in range(start, len(self.A)):
                Fv = self.reducer(F, i)
                if Fv[i] < 1 or not self.all_removable(Fv - unit(i), k - 1, i):
                    ok = False
                    break
            self.memo[key] = ok
            return ok

    search = _Search(reducer, list(range(n)), 0)
    return search.rank(D, eff)


def _metric_rank(G: MetricGraph, D: Divisor) -> int:
    reducer = lambda F, q: reduce_divisor(G, F, q)
    A = rank_determining_points(G)
    search = _RankSearch(reducer, A, A[0])
    return search.rank(D, lambda E: effective_representative(G, E, reducer))


def rank(G: MetricGraph, D: Divisor, method: str = "subdivision", refine: int = 1,
         budget: int = DEFAULT_BUDGET) -> int:
    """Baker-Norine rank of ``D`` on ``G``.

    ``method`` is ``"subdivision"`` (unit subdivision, all vertices as
    candidates), ``"metric"`` (metric reduced divisors on a
    rank-determining set) or ``"auto"`` (subdivision when it fits the
    budget, metric otherwise).
    """
    for p in D.support():
        if not p.is_vertex and not isinstance(p.offset, Fraction):
            raise IrrationalSupport(f"{p} has a non-rational offset")
    if D.degree < 0:
        return -1
    if method == "metric":
        return _metric_rank(G, D)
    if method == "subdivision":
        return _subdivision_rank(G, D, refine, budget)
    if method == "auto":
        try:
            return _subdivision_rank(G, D, refine, budget)
        except SubdivisionTooLarge:
            return _metric_rank(G, D)
    raise ValueError(f"unknown rank method {method!r}")


def riemann_roch_residual(G: MetricGraph, D: Divisor, method: str = "subdivision", **kw) -> int:
    K = canonical_divisor(G)
    return rank(G, D, method, **kw) - rank(G, K - D, method, **kw) - D.degree + (G.genus - 1)


def is_weierstrass(G: MetricGraph, x: Point, method: str = "auto", **kw) -> bool:
    """True when rank(g[x]) >= 1."""
    g = G.genus
    if g < 2:
        raise GenusTooSmall("Weierstrass points need genus at least 2")
    D = point_divisor(x, g)
    if method == "metric":
        for v in rank_determining_points(G):
            if reduce_divisor(G, D, v)[v] < 1:
                return False
        return True
    return rank(G, D, method, **kw) >= 1


def iter_effective(points: Sequence[Point], k: int, start: int = 0) -> Iterator[Divisor]:
    """All effective divisors of degree ``k`` on ``points`` (lexicographic)."""
    if k == 0:
        yield Divisor()
        return
    for i in range(start, len(points)):
        for rest in iter_effective(points, k - 1, i):
            yield rest + point_divisor(points[i])
