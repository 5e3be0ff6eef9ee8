"""Geometric Weierstrass points of a generic metric graph.

For every contributing cover and every isomorphism ``phi`` from the
stabilised source to the model of the metric graph we solve
``(ft o F) delta = lengths`` exactly.  Positive solutions are fibre points;
the root of the weight-g leg then lands on a point of the metric graph.

Counting conventions
--------------------
A fibre point is a cover with marked source legs together with an
identification ``phi`` taken modulo automorphisms of the marked cover.
Starting from an unmarked cover ``pi`` over a tree ``T`` this gives, per
valid ``phi``, the weight ``1 / |rho(Aut_m)|`` where ``Aut_m`` are the
automorphisms fixing every source leg and ``rho`` is their action on the
stabilised source.  A marked class is an orbit of fibre points under
relabelling of source legs and of target legs 2..3g.  Its point is exact.
The point table identifies points related by an isometry of the metric
graph, since the point of a cover is only determined up to isometry.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .covers import Cover
from .divisors import MetricGraph, Point, fmt, is_weierstrass, vertex_point
from .enumeration import CoverInfo, enumerate_all
from .errors import (
    GenericityViolation,
    GenusTooSmall,
    InconsistentClassMultiplicity,
    NonTrivalentModel,
)
from .graphs import DiscreteGraph, canonical_key, find_isomorphisms, standard_families
from .hurwitz import (
    cover_multiplicity,
    standard_weight,
    symmetry_data,
    target_automorphisms_fixing_first,
)
from .linalg import solve

PRIMES = [p for p in range(11, 400) if all(p % k for k in range(2, int(p ** 0.5) + 1))]


def generic_lengths(n: int, seed: int = 0) -> list[Fraction]:
    """``n`` lengths p/q with pairwise distinct primes, reproducible from ``seed``."""
    rng = random.Random(seed)
    primes = rng.sample(PRIMES, 2 * n)
    return [Fraction(primes[2 * i], primes[2 * i + 1]) for i in range(n)]


def generic_metric_graph(model: DiscreteGraph, seed: int = 0) -> MetricGraph:
    return MetricGraph.from_list(model, generic_lengths(len(model.edges), seed))


# -- per-cover symmetry data -----------------------------------------------------------

@dataclass
class CoverSymmetry:
    weight: Fraction
    VS: int
    HS: int
    rho_marked: int  # actions on the stabilised source of leg-fixing automorphisms
    group_A: int


def cover_symmetry(info: CoverInfo) -> CoverSymmetry:
    c = info.cover
    g = c.deg
    s = symmetry_data(c, info.stabilization)
    return CoverSymmetry(standard_weight(c).weight, s.VS, s.HS, s.rho_marked,
                         math.factorial(g - 2) ** (3 * g - 1))


# -- witnesses -------------------------------------------------------------------------

@dataclass
class GwpWitness:
    info: CoverInfo
    source_iso: dict[int, int]
    target_lengths: dict[int, Fraction]
    point: Point
    weight_det: Fraction  # standard weight * |det|
    symmetry: CoverSymmetry
    key: tuple = ()

    @property
    def cover(self) -> Cover:
        return self.info.cover

    def class_share(self) -> Fraction:
        """Contribution of this identification to its class multiplicity."""
        s = self.symmetry
        return self.weight_det / (s.VS * self.info.tree_automorphisms * s.rho_marked)

    def fibre_share(self) -> Fraction:
        """Contribution (with tree orbit) to the fully labelled fibre sum."""
        s = self.symmetry
        return self.info.orbit_size * Fraction(s.group_A, s.VS) * self.weight_det / s.rho_marked


def _check_model(G: MetricGraph) -> int:
    g = G.genus
    if g < 2:
        raise GenusTooSmall("geometric Weierstrass points need genus at least 2")
    m = G.model
    if any(m.val(v) != 3 for v in m.vertices) or len(m.edges) != 3 * g - 3:
        raise NonTrivalentModel("the model must be trivalent with 3g-3 edges")
    return g


def locate_point(info: CoverInfo, iso: dict[int, int], delta: dict[int, Fraction], G: MetricGraph) -> Point:
    """Position of the root of the weight-g leg, transported by ``iso``."""
    c = info.cover
    src = c.source
    stab = info.stabilization
    l1 = c.target.marking[0]
    big = next(f for f in src.legs if c.flag_map[f] == l1)
    V = src.root[big]
    # walk out of expunged trees to the core
    expunged = set(stab.expunged_vertices)
    seen = {V}
    frontier = [V]
    while V in expunged:
        nxt = []
        for u in frontier:
            for h in src.flags_at[u]:
                if src.is_leg(h):
                    continue
                w = src.root[src.involution[h]]
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        core = [w for w in nxt if w not in expunged]
        if core:
            V = core[0]
            break
        frontier = nxt
    back = {o: x for x, o in stab.flag_origin.items()}
    if V in back:
        return vertex_point(iso[back[V]])
    flen = lambda f: delta[c.target.edge_key(c.flag_map[f])] * (c.fiber_lcm(c.target.edge_key(c.flag_map[f])) // c.degree[f])
    for a, path in stab.paths.items():
        dist = Fraction(0)
        for f in path:
            dist += flen(f)
            if src.root[src.involution[f]] == V:
                return G.point(iso[a], dist)
    raise ValueError("weight-g leg root not found on the stabilised source")


def canonical_point(G: MetricGraph, p: Point, isometries) -> Point:
    return min(G.transport(p, s) for s in isometries)


def fiber_witnesses(G: MetricGraph, covers: Iterable[CoverInfo], strict: bool = True) -> list[GwpWitness]:
    """All positive solutions of the fibre system over ``G``.

    Raises :class:`GenericityViolation` when some solution has a zero
    component (unless ``strict`` is false, in which case it is skipped).
    """
    _check_model(G)
    model = G.model
    out = []
    for info in covers:
        if not info.contributing:
            continue
        isos = find_isomorphisms(info.stabilization.graph, model, respect_marking=False)
        if not isos:
            continue
        sym = None
        cols = info.cover.target.edges
        rows = info.ft_rows
        for iso in isos:
            rhs = [G.lengths[model.edge_key(iso[a])] for a in rows]
            sol = solve(info.ftF, rhs)
            if any(x == 0 for x in sol):
                if strict:
                    raise GenericityViolation("a target length vanishes; lengths are not generic")
                continue
            if any(x < 0 for x in sol):
                continue
            delta = dict(zip(cols, sol))
            if sym is None:
                sym = cover_symmetry(info)
            pt = locate_point(info, iso, delta, G)
            out.append(GwpWitness(info, iso, delta, pt, sym.weight * abs(info.determinant), sym))
    return out


# -- classes ---------------------------------------------------------------------------

@dataclass
class MarkedClass:
    witnesses: list[GwpWitness]
    multiplicity: Fraction
    cover_multiplicity: int
    point: Point
    points: list[Point] = field(default_factory=list)


def _class_key(w: GwpWitness, target_auts) -> tuple:
    c = w.cover
    stab = w.info.stabilization
    origin = {o: x for x, o in stab.flag_origin.items()}
    best = None
    for beta in target_auts:
        cols = {}
        for f in range(c.source.n_flags):
            x = origin.get(f)
            cols[f] = (beta[c.flag_map[f]], c.degree[f], w.source_iso[x] if x is not None else None)
        k = canonical_key(c.source, False, cols)
        if best is None or k < best:
            best = k
    return (id(c.target), best)


def marked_classes(witnesses: Sequence[GwpWitness]) -> list[MarkedClass]:
    """Group witnesses into orbits and check the multiplicity of each orbit.

    The multiplicity of a class is the sum over its fibre points of
    standard weight * |det| divided by the order of the relabelling group.
    It must agree with :func:`cover_multiplicity` of every member.
    """
    taut_cache: dict[int, list] = {}
    groups: dict[tuple, list[GwpWitness]] = {}
    for w in witnesses:
        T = w.cover.target
        if id(T) not in taut_cache:
            taut_cache[id(T)] = target_automorphisms_fixing_first(w.cover)
        w.key = _class_key(w, taut_cache[id(T)])
        groups.setdefault(w.key, []).append(w)
    classes = []
    for ws in groups.values():
        mult = sum((w.class_share() for w in ws), Fraction(0))
        values = {cover_multiplicity(c, w.info.ftF)
                  for c, w in {id(w.cover): (w.cover, w) for w in ws}.values()}
        if len(values) != 1 or mult != next(iter(values)):
            raise InconsistentClassMultiplicity(
                f"class multiplicity {mult} against cover multiplicities {sorted(values)}")
        pts = sorted({w.point for w in ws})
        if len(pts) != 1:
            raise InconsistentClassMultiplicity("class members locate different points")
        classes.append(MarkedClass(ws, mult, values.pop(), pts[0], pts))
    classes.sort(key=lambda k: (k.point, -k.multiplicity))
    return classes


@dataclass
class GwpReport:
    graph: MetricGraph
    classes: list[MarkedClass]
    point_table: dict[Point, Fraction]
    total: Fraction
    fibre_total: Fraction
    weierstrass_checked: dict[Point, bool]
    seed: int | None = None

    def multiplicities(self) -> list[int]:
        return sorted((int(v) for v in self.point_table.values()), reverse=True)

    def to_dict(self) -> dict:
        G = self.graph
        def pt(p: Point):
            if p.is_vertex:
                return {"vertex": p.vertex, "name": G.model.name(p.vertex)}
            return {"edge": p.edge, "name": G.model.name(p.edge), "offset": fmt(p.offset),
                    "length": fmt(G.lengths[p.edge])}
        return {
            "genus": G.genus,
            "lengths": {str(e): fmt(x) for e, x in sorted(G.lengths.items())},
            "seed": self.seed,
            "total": fmt(self.total),
            "fibreTotal": fmt(self.fibre_total),
            "points": [
                {"point": pt(p), "multiplicity": fmt(m),
                 "isWeierstrass": self.weierstrass_checked.get(p)}
                for p, m in sorted(self.point_table.items())
            ],
            "classes": [
                {"point": pt(k.point), "multiplicity": fmt(k.multiplicity),
                 "coverMultiplicity": k.cover_multiplicity,
                 "locations": [pt(p) for p in k.points],
                 "witnesses": len(k.witnesses),
                 "targetLengths": [{str(h): fmt(x) for h, x in sorted(w.target_lengths.items())}
                                   for w in k.witnesses[:1]]}
                for k in self.classes
            ],
        }


_cover_cache: dict[tuple, list[CoverInfo]] = {}


def covers_for_genus(g: int, mode: str = "quotient", contributing_only: bool = False, **kw) -> list[CoverInfo]:
    """Cached :func:`enumerate_all`; a cached full list also serves contributing-only requests."""
    if (g, mode, False) in _cover_cache:
        full = _cover_cache[(g, mode, False)]
        return [i for i in full if i.contributing] if contributing_only else full
    key = (g, mode, contributing_only)
    if key not in _cover_cache:
        _cover_cache[key] = enumerate_all(g, mode, contributing_only=contributing_only, **kw)
    return _cover_cache[key]


def count_gwp(G: MetricGraph, covers: Sequence[CoverInfo] | None = None, verify_rank: bool = True,
              seed: int | None = None, **kw) -> GwpReport:
    g = _check_model(G)
    if covers is None:
        covers = covers_for_genus(g, "quotient", contributing_only=True, **kw)
    ws = fiber_witnesses(G, covers)
    classes = marked_classes(ws)
    isometries = G.isometries()
    table: dict[Point, Fraction] = {}
    for k in classes:
        p = canonical_point(G, k.point, isometries)
        table[p] = table.get(p, Fraction(0)) + k.multiplicity
    total = sum(table.values(), Fraction(0))
    fibre = sum((w.fibre_share() for w in ws), Fraction(0))
    checked = {}
    if verify_rank:
        for p in table:
            checked[p] = is_weierstrass(G, p, method="metric")
    return GwpReport(G, classes, table, total, fibre, checked, seed)


def pushforward_total(g: int, mode: str = "quotient", seed: int = 0, **kw) -> Fraction:
    """Sum of standard weight * |det| over the fully labelled fibre over a generic O_g."""
    G = generic_metric_graph(standard_families("O", g), seed)
    ws = fiber_witnesses(G, covers_for_genus(g, mode, contributing_only=True, **kw))
    return sum((w.fibre_share() for w in ws), Fraction(0))


def expected_pushforward_total(g: int) -> int:
    return math.factorial(3 * g - 1) * math.factorial(g - 2) ** (3 * g - 1) * (g ** 3 - g)
