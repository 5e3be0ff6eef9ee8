"""Enumeration of top-dimensional covers with the Weierstrass profile.

Covers of a trivalent tree are assembled vertex by vertex in breadth-first
order from the vertex carrying the first leg.  Over each target vertex we
choose a *local cover*: a multiset of genus-0 tripod covers ("blocks") whose
partitions over the three incident directions add up to the fibre
partitions.  Flags over the edge towards the already processed part are then
glued to the waiting flags by a weight preserving bijection.

Children of non-isomorphic partial covers are never isomorphic, and neither
are children built from different local covers.  Two gluings of the same
parent and local cover give isomorphic children exactly when they differ by
an automorphism of the parent (acting on the waiting flags) and one of the
new local piece (acting on the new flags).  The default search therefore
keeps one gluing per orbit of this double action; the ``"canonical"``
method instead deduplicates all children by canonical forms and serves as a
cross-check.
"""

from __future__ import annotations

import itertools
import math
import os
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

from . import _iso
from .covers import Cover, ft_matrix, rh_equality_check, validate_cover
from .errors import GenusCapExceeded, NotTrivalent, ProfileSumMismatch
from .graphs import DiscreteGraph, MarkedTree, Stabilization, enumerate_trivalent_trees, forget_legs, genus
from .hurwitz import hurwitz_genus0, partitions
from .linalg import det

DEFAULT_GENUS_CAP = 4

Block = tuple  # (degree, (partition_0, partition_1, partition_2))


def weierstrass_profile(g: int) -> list[tuple[int, ...]]:
    """Partitions over the legs 1..3g: (g) then 3g-1 copies of (2, 1^(g-2))."""
    if g < 2:
        from .errors import GenusTooSmall
        raise GenusTooSmall(f"g = {g} < 2")
    return [(g,)] + [(2,) + (1,) * (g - 2)] * (3 * g - 1)


@lru_cache(maxsize=None)
def tripod_blocks(d_max: int) -> tuple[Block, ...]:
    """All realisable genus-0 tripod covers of degree at most ``d_max``."""
    out = []
    for d in range(1, d_max + 1):
        parts = partitions(d)
        for a, b, c in itertools.product(parts, repeat=3):
            if len(a) + len(b) + len(c) == d + 2 and hurwitz_genus0(d, [a, b, c]) != 0:
                out.append((d, (a, b, c)))
    return tuple(out)


@dataclass(frozen=True)
class LocalCover:
    blocks: tuple[Block, ...]

    @property
    def degree(self) -> int:
        return sum(b[0] for b in self.blocks)


def _sub(rem: Counter, part: tuple[int, ...]) -> Counter | None:
    need = Counter(part)
    for k, n in need.items():
        if rem[k] < n:
            return None
    out = rem.copy()
    out.subtract(need)
    return +out


def local_covers(d: int, profiles: Sequence[Sequence[int] | None],
                 leg_constraints: Sequence[bool] | None = None) -> list[LocalCover]:
    """Decompositions of a degree-``d`` fibre over a tripod into blocks.

    ``profiles[i]`` is the fibre partition over direction ``i`` or ``None``
    when it is free.  ``leg_constraints`` is accepted for documentation: a
    leg direction always has a fixed profile.
    """
    if len(profiles) != 3:
        raise NotTrivalent("local covers are defined over trivalent vertices")
    fixed = []
    for p in profiles:
        if p is None:
            fixed.append(None)
        else:
            if sum(p) != d:
                raise ProfileSumMismatch(f"partition {tuple(p)} does not sum to {d}")
            fixed.append(Counter(p))
    if leg_constraints is not None:
        for i, is_leg in enumerate(leg_constraints):
            if is_leg and profiles[i] is None:
                raise ProfileSumMismatch("leg directions need a fixed profile")
    key = tuple(None if p is None else tuple(sorted(p, reverse=True)) for p in profiles)
    return list(_local_covers(d, key))


@lru_cache(maxsize=None)
def _local_covers(d: int, profiles: tuple) -> tuple[LocalCover, ...]:
    fixed = [None if p is None else Counter(p) for p in profiles]
    blocks = tripod_blocks(d)
    out = []

    def rec(start: int, remaining: int, rem: list, chosen: list):
        if remaining == 0:
            if all(r is None or not r for r in rem):
                out.append(LocalCover(tuple(chosen)))
            return
        for i in range(start, len(blocks)):
            bd, parts = blocks[i]
            if bd > remaining:
                continue
            new = []
            for r, p in zip(rem, parts):
                if r is None:
                    new.append(None)
                    continue
                s = _sub(r, p)
                if s is None:
                    break
                new.append(s)
            else:
                chosen.append(blocks[i])
                rec(i, remaining - bd, new, chosen)
                chosen.pop()

    rec(0, d, fixed, [])
    return tuple(out)


# -- partial covers -----------------------------------------------------------------

class _Partial:
    """A partially assembled source graph.

    ``vroot``/``vtarget``/``vdeg`` describe vertices; every other flag has a
    source vertex, a target flag, a weight and a partner (itself while the
    flag is a leg or still waiting to be glued).
    """

    __slots__ = ("vtarget", "vdeg", "fvert", "ftarget", "fweight", "partner", "_key")

    def __init__(self):
        self.vtarget: list[int] = []
        self.vdeg: list[int] = []
        self.fvert: list[int] = []
        self.ftarget: list[int] = []
        self.fweight: list[int] = []
        self.partner: list[int] = []
        self._key = None

    def copy(self) -> "_Partial":
        p = _Partial()
        p.vtarget = list(self.vtarget)
        p.vdeg = list(self.vdeg)
        p.fvert = list(self.fvert)
        p.ftarget = list(self.ftarget)
        p.fweight = list(self.fweight)
        p.partner = list(self.partner)
        return p

    def structure(self):
        nv = len(self.vtarget)
        root = list(range(nv)) + [v for v in self.fvert]
        inv = list(range(nv)) + [nv + q for q in self.partner]
        cols = [("V", t, d) for t, d in zip(self.vtarget, self.vdeg)]
        cols += [("F", t, w) for t, w in zip(self.ftarget, self.fweight)]
        return root, inv, cols

    def key(self):
        if self._key is None:
            root, inv, cols = self.structure()
            self._key = _iso.canonical_form(root, inv, cols)[0]
        return self._key


def _bfs(T: DiscreteGraph, start: int):
    """Target vertices in BFS order with the flag at each vertex pointing to its parent."""
    order = [(start, None)]
    seen = {start}
    k = 0
    while k < len(order):
        v, _ = order[k]
        k += 1
        for h in T.flags_at[v]:
            if T.is_leg(h):
                continue
            j = T.involution[h]
            w = T.root[j]
            if w not in seen:
                seen.add(w)
                order.append((w, j))
    return order


def _waiting_action(st: _Partial, waiting: list[int]) -> list[dict[int, int]]:
    """Permutations of the waiting flags induced by automorphisms of ``st``."""
    if len(waiting) < 2:
        return [{q: q for q in waiting}]
    root, inv, cols = st.structure()
    nv = len(st.vtarget)
    stable = None
    found = []
    for perm in itertools.permutations(waiting):
        pi = dict(zip(waiting, perm))
        if any(st.fweight[q] != st.fweight[pi[q]] for q in waiting):
            continue
        # twins: unglued flags of one vertex with equal weight
        if all(st.fvert[q] == st.fvert[pi[q]] for q in waiting):
            found.append(pi)
            continue
        if stable is None:
            stable = _iso.refine([(root, inv, _iso._incident(root))],
                                 [_iso.initial_colours(root, inv, cols)])[0]
        # refined colours are invariant, so they must be preserved
        if any(stable[nv + q] != stable[nv + pi[q]] for q in waiting):
            continue
        c1, c2 = list(cols), list(cols)
        for k, q in enumerate(waiting):
            c1[nv + q] = (cols[nv + q], k)
            c2[nv + pi[q]] = (cols[nv + pi[q]], k)
        if next(_iso.iter_isomorphisms((root, inv), (root, inv), c1, c2), None) is not None:
            found.append(pi)
    return found


def _local_action(new_flags: list[int], block_of: dict[int, int], lc: LocalCover,
                  weight: Sequence[int]) -> list[dict[int, int]]:
    """Permutations of the new flags induced by automorphisms of the local piece."""
    out = []
    for perm in itertools.permutations(new_flags):
        sigma = dict(zip(new_flags, perm))
        if any(weight[q] != weight[sigma[q]] for q in new_flags):
            continue
        bmap: dict[int, int] = {}
        ok = True
        for q in new_flags:
            a, b = block_of[q], block_of[sigma[q]]
            if bmap.setdefault(a, b) != b or lc.blocks[a] != lc.blocks[b]:
                ok = False
                break
        if ok and len(set(bmap.values())) == len(bmap):
            out.append(sigma)
    return out


def _matching_orbits(st: _Partial, old: list[int], new: list[int], alphas, betas):
    seen = set()
    for match in _matchings(st, old, new):
        key = frozenset(match)
        if key in seen:
            continue
        for a in alphas:
            for b in betas:
                seen.add(frozenset((a[x], b[y]) for x, y in match))
        yield match


def enumerate_covers_over_tree(T, profile: Sequence[Sequence[int]] | None = None,
                               g: int | None = None, method: str = "orbits") -> list[Cover]:
    """All covers (up to isomorphism over the identity of ``T``) with the given leg profiles.

    ``profile[k]`` is the partition over the leg labelled ``k + 1``.
    Source legs are marked in block order.  ``method`` selects the
    deduplication: ``"orbits"`` (default) or ``"canonical"``.
    """
    H = T.graph if isinstance(T, MarkedTree) else T
    return [_to_cover(st, H, method == "canonical") for st in _assemble(T, profile, g, method)]


def _assemble(T, profile, g, method) -> list[_Partial]:
    if isinstance(T, MarkedTree):
        T = T.graph
    if method not in ("orbits", "canonical"):
        raise ValueError(f"unknown method {method!r}")
    if T.marking is None:
        raise NotTrivalent("target tree needs a leg marking")
    if any(T.val(v) != 3 for v in T.vertices) or genus(T) != 0:
        raise NotTrivalent("target must be a trivalent tree")
    if profile is None:
        if g is None:
            g = len(T.legs) // 3
        profile = weierstrass_profile(g)
    profile = [tuple(sorted(p, reverse=True)) for p in profile]
    d = sum(profile[0])
    if len(profile) != len(T.legs) or any(sum(p) != d for p in profile):
        raise ProfileSumMismatch("profile does not match the legs of the tree")
    leg_part = {leg: profile[k] for k, leg in enumerate(T.marking)}
    order = _bfs(T, T.root[T.marking[0]])

    states = [_Partial()]
    for A, parent in order:
        dirs = list(T.flags_at[A])
        if parent is not None:
            dirs.remove(parent)
            dirs.insert(0, parent)
        children: list[_Partial] = []
        by_key: dict = {}
        for st in states:
            waiting = []
            if parent is not None:
                up = T.involution[parent]
                waiting = [q for q, t in enumerate(st.ftarget) if t == up and st.partner[q] == q]
            profs = []
            for h in dirs:
                if h == parent:
                    profs.append(tuple(sorted((st.fweight[q] for q in waiting), reverse=True)))
                elif T.is_leg(h):
                    profs.append(leg_part[h])
                else:
                    profs.append(None)
            alphas = None
            for lc in local_covers(d, profs):
                base = st.copy()
                new_flags = []
                block_of = {}
                for i, (bd, parts) in enumerate(lc.blocks):
                    v = len(base.vtarget)
                    base.vtarget.append(A)
                    base.vdeg.append(bd)
                    for h, part in zip(dirs, parts):
                        for w in part:
                            q = len(base.fvert)
                            base.fvert.append(v)
                            base.ftarget.append(h)
                            base.fweight.append(w)
                            base.partner.append(q)
                            if h == parent:
                                new_flags.append(q)
                                block_of[q] = i
                if parent is None:
                    children.append(base)
                    continue
                if method == "canonical":
                    gluings = _matchings(base, waiting, new_flags)
                else:
                    if alphas is None:
                        alphas = _waiting_action(st, waiting)
                    betas = _local_action(new_flags, block_of, lc, base.fweight)
                    gluings = _matching_orbits(base, waiting, new_flags, alphas, betas)
                for match in gluings:
                    s = base.copy()
                    for a, b in match:
                        s.partner[a] = b
                        s.partner[b] = a
                    if method == "canonical":
                        by_key.setdefault(s.key(), s)
                    else:
                        children.append(s)
        states = [by_key[k] for k in sorted(by_key)] if method == "canonical" and parent is not None else children
    return states


def _stable_core_ok(st: _Partial, g: int) -> bool:
    """Necessary condition for contributing: the stabilised source is trivalent
    with 2g - 2 vertices.  Checked on the raw arrays, before building a cover."""
    nv = len(st.vtarget)
    nbrs: list[list[int]] = [[] for _ in range(nv)]
    for q, r in enumerate(st.partner):
        if r != q:
            nbrs[st.fvert[q]].append(st.fvert[r])
    deg = [len(x) for x in nbrs]
    alive = [True] * nv
    stack = [v for v in range(nv) if deg[v] <= 1]
    while stack:
        v = stack.pop()
        if not alive[v]:
            continue
        alive[v] = False
        for w in nbrs[v]:
            if alive[w]:
                deg[w] -= 1
                if deg[w] <= 1:
                    stack.append(w)
    core = [deg[v] for v in range(nv) if alive[v] and deg[v] != 2]
    return len(core) == 2 * g - 2 and all(k == 3 for k in core)


def _matchings(st: _Partial, old: list[int], new: list[int]):
    by_w_old: dict[int, list[int]] = {}
    by_w_new: dict[int, list[int]] = {}
    for q in old:
        by_w_old.setdefault(st.fweight[q], []).append(q)
    for q in new:
        by_w_new.setdefault(st.fweight[q], []).append(q)
    weights = sorted(by_w_old)
    per_weight = [[list(zip(by_w_old[w], perm)) for perm in itertools.permutations(by_w_new[w])]
                  for w in weights]
    for combo in itertools.product(*per_weight):
        yield [pair for part in combo for pair in part]


def _to_cover(st: _Partial, T: DiscreteGraph, canonical: bool = False, check: bool = True) -> Cover:
    root, inv, cols = st.structure()
    n = len(root)
    nv = len(st.vtarget)
    order = list(range(n))
    if canonical:
        # renumber flags canonically so that output is independent of search order
        _, lab = _iso.canonical_form(root, inv, cols)
        order.sort(key=lambda f: lab[f])
    new = {f: k for k, f in enumerate(order)}
    r = [new[root[f]] for f in order]
    i = [new[inv[f]] for f in order]
    fmap, deg = [], []
    for f in order:
        if f < nv:
            fmap.append(st.vtarget[f])
            deg.append(st.vdeg[f])
        else:
            fmap.append(st.ftarget[f - nv])
            deg.append(st.fweight[f - nv])
    legs = [k for k in range(n) if r[k] != k and i[k] == k]
    tlabel = {leg: j for j, leg in enumerate(T.marking)}
    legs.sort(key=lambda k: (tlabel[fmap[k]], -deg[k], k))
    weights = {k: deg[k] for k in legs}
    src = DiscreteGraph(r, i, legs, weights)
    return Cover(src, T, fmap, deg, check=check)


# -- structural analysis -----------------------------------------------------------

@dataclass
class CoverInfo:
    """A cover together with data used downstream."""

    cover: Cover
    orbit_size: int = 1
    tree_automorphisms: int = 1
    stabilization: Stabilization | None = None
    ft_rows: list[int] = field(default_factory=list)
    ftF: list[list[int]] = field(default_factory=list)
    determinant: int = 0
    contributing: bool = False


def analyse(c: Cover, orbit_size: int = 1, tree_aut: int = 1) -> CoverInfo:
    g = c.deg
    stab = forget_legs(c.source)
    info = CoverInfo(c, orbit_size, tree_aut, stab)
    if not stab.is_trivalent() or len(stab.graph.edges) != 3 * g - 3:
        return info
    rows, M = ft_matrix(c, stab)
    info.ft_rows, info.ftF = rows, M
    if len(M) != len(c.target.edges):
        return info
    D = det(M)
    info.determinant = int(D)
    info.contributing = D != 0
    return info


def expunged_violations(c: Cover, stab: Stabilization | None = None) -> list[str]:
    """Expunged vertices must have local degree 1 and expunged edges weight 1."""
    stab = stab or forget_legs(c.source)
    out = []
    for v in stab.expunged_vertices:
        if c.degree[v] != 1:
            out.append(f"expunged vertex {v} has degree {c.degree[v]}")
    for e in stab.expunged_edges:
        if c.degree[e] != 1:
            out.append(f"expunged edge {e} has weight {c.degree[e]}")
    return out


def _legs_at(c: Cover, V: int) -> list[int]:
    return [f for f in c.source.flags_at[V] if c.source.is_leg(f)]


def classify_loop_vertex(c: Cover, stab: Stabilization, a: int) -> str:
    """Case (A), (B) or (C) for the stabilised vertex ``a`` carrying a loop.

    Let V be the source vertex behind ``a`` and e1 the target edge under the
    loop.  The loop must map onto a leaf edge of the target ending at a vertex
    with two legs, and:

    * (A) the weight-g leg sits at the far end of the loop, over e1 the
      fibre is two edges (the loop halves) and over the other edge at V it is (g);
    * (B) the weight-g leg sits at V, the fibre over e1 is (1^g) and over
      the other edge (g);
    * (C) neither, the fibre over e1 is (1^g) and over the other edge
      (2, 1^(g-2)).

    Raises ``ValueError`` when none applies.
    """
    G, H = c.source, c.target
    g = c.deg
    V = stab.flag_origin[a]
    loop = [h for h in stab.graph.flags_at[a]
            if stab.graph.root[stab.graph.involution[h]] == a]
    if len(loop) != 2:
        raise ValueError("vertex carries no loop")
    path = stab.paths[min(loop)]
    e1s = {H.edge_key(c.flag_map[f]) for f in path}
    if len(e1s) != 1:
        raise ValueError("loop is not over a single target edge")
    (e1,) = e1s
    A = c.flag_map[V]
    leaf_end = [x for x in H.endpoints(e1) if x != A]
    if len(leaf_end) != 1 or H.legval(leaf_end[0]) != 2:
        raise ValueError("loop is not over a leaf edge")
    others = [h for h in H.flags_at[A] if not H.is_leg(h) and H.edge_key(h) != e1]
    if len(others) != 1:
        raise ValueError("image of the loop vertex is not adjacent to exactly one other edge")
    e2 = H.edge_key(others[0])
    fib = lambda e: tuple(sorted((c.degree[x] for x in c.edge_fibers[e]), reverse=True))
    l1 = c.target.marking[0]
    big = next(f for f in G.legs if c.flag_map[f] == l1)
    if c.flag_map[G.root[big]] == leaf_end[0] and len(fib(e1)) == 2 and fib(e2) == (g,):
        return "A"
    if G.root[big] == V and fib(e1) == (1,) * g and fib(e2) == (g,):
        return "B"
    if fib(e1) == (1,) * g and fib(e2) == (2,) + (1,) * (g - 2):
        return "C"
    raise ValueError(f"loop vertex fits none of the cases: e1 {fib(e1)}, e2 {fib(e2)}")


def loop_vertex_cases(info: CoverInfo) -> dict[int, str]:
    stab = info.stabilization
    out = {}
    for a in stab.graph.vertices:
        flags = stab.graph.flags_at[a]
        if any(stab.graph.root[stab.graph.involution[h]] == a for h in flags):
            out[a] = classify_loop_vertex(info.cover, stab, a)
    return out


# -- drivers ----------------------------------------------------------------------

def _workers() -> int:
    try:
        return max(1, int(os.environ.get("TW_WORKERS", "1")))
    except ValueError:
        return 1


def _over_tree(args):
    tree, g, contributing_only = args
    states = _assemble(tree.graph, None, g, "orbits")
    if contributing_only:
        states = [st for st in states if _stable_core_ok(st, g)]
    # discarded covers are never validated; the kept ones are checked below
    infos = [analyse(_to_cover(st, tree.graph, check=not contributing_only),
                     tree.orbit_size, tree.automorphisms) for st in states]
    if contributing_only:
        infos = [i for i in infos if i.contributing]
        for i in infos:
            validate_cover(i.cover)
    return infos


def enumerate_all(g: int, mode: str = "quotient", cap: int = DEFAULT_GENUS_CAP,
                  workers: int | None = None, contributing_only: bool = False) -> list[CoverInfo]:
    """All Weierstrass-profile covers of all trivalent 3g-marked trees.

    ``mode`` is ``"fully-labelled"`` or ``"quotient"`` (legs 2..3g
    interchangeable, each cover carrying the orbit size of its tree).
    With ``contributing_only`` the covers that cannot contribute (stabilised
    source not trivalent, or det(ft o F) = 0) are dropped as they are found.
    """
    if g > cap:
        raise GenusCapExceeded(f"g = {g} exceeds the cap {cap}")
    if g < 2:
        from .errors import GenusTooSmall
        raise GenusTooSmall(f"g = {g} < 2")
    tmode = "fully-labelled" if mode in ("fully-labelled", "labelled") else "interchangeable"
    trees = enumerate_trivalent_trees(3 * g, tmode)
    jobs = [(t, g, contributing_only) for t in trees]
    workers = workers or _workers()
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(workers) as ex:
            chunks = list(ex.map(_over_tree, jobs, chunksize=1))
    else:
        chunks = [_over_tree(j) for j in jobs]
    return [info for chunk in chunks for info in chunk]
