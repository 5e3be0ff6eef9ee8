"""Genus-0 Hurwitz numbers, the standard weight of a cover and multiplicities."""

from __future__ import annotations

import math
import threading
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from . import _perm
from .covers import Cover
from .errors import NonIntegralMultiplicity, ProfileSumMismatch, WrongProfile
from .graphs import find_isomorphisms, forget_legs

MAX_DEGREE = 8

Partition = tuple  # weakly decreasing tuple of positive ints


def partition(parts: Iterable[int]) -> tuple[int, ...]:
    p = tuple(sorted((int(x) for x in parts), reverse=True))
    if not p or p[-1] < 1:
        raise ProfileSumMismatch(f"invalid partition {p}")
    return p


def partitions(d: int, largest: int | None = None) -> list[tuple[int, ...]]:
    """All partitions of ``d`` in decreasing lexicographic order."""
    if largest is None:
        largest = d
    if d == 0:
        return [()]
    out = []
    for k in range(min(d, largest), 0, -1):
        for rest in partitions(d - k, k):
            out.append((k,) + rest)
    return out


_memo: dict[tuple, Fraction] = {}
_lock = threading.Lock()


def _count(d: int, profiles: tuple[tuple[int, ...], ...]) -> int:
    """#{(s_1..s_k) of the given cycle types, product identity, transitive}."""
    first, rest = profiles[0], profiles[1:]
    s1 = _perm.from_cycles(d, first)
    size1 = len(_perm.conjugacy_class(d, first))
    classes = [_perm.conjugacy_class(d, p) for p in rest[:-1]]
    last = rest[-1]
    total = 0

    def rec(i, prod, chosen):
        nonlocal total
        if i == len(classes):
            s_last = _perm.inverse(prod)
            if _perm.cycle_type(s_last) == last and _perm.is_transitive(d, chosen + [s_last]):
                total += 1
            return
        for s in classes[i]:
            chosen.append(s)
            rec(i + 1, _perm.compose(prod, s), chosen)
            chosen.pop()

    rec(0, s1, [s1])
    return total * size1


def hurwitz_genus0(d: int, profiles: Sequence[Sequence[int]]) -> Fraction:
    """Automorphism-weighted count of genus-0 covers of P^1 with the given branch profiles."""
    profs = tuple(sorted(partition(p) for p in profiles))
    for p in profs:
        if sum(p) != d:
            raise ProfileSumMismatch(f"profile {p} does not sum to {d}")
    if d > MAX_DEGREE:
        raise ProfileSumMismatch(f"degree {d} exceeds the brute-force cap {MAX_DEGREE}")
    if sum(d - len(p) for p in profs) != 2 * d - 2:
        return Fraction(0)
    if d == 1:
        return Fraction(1)
    profs = tuple(p for p in profs if p != (1,) * d) or ((1,) * d,)
    key = (d, profs)
    with _lock:
        if key in _memo:
            return _memo[key]
    if len(profs) == 1:
        value = Fraction(0)
    else:
        order = sorted(profs, key=lambda p: len(_perm.conjugacy_class(d, p)))
        # largest class first (fixed by conjugation), smallest classes enumerated
        order = [order[-1]] + order[:-1]
        value = Fraction(_count(d, tuple(order)), math.factorial(d))
    with _lock:
        _memo[key] = value
    return value


# -- weights --------------------------------------------------------------------

def cf_factor(c: Cover, V: int) -> int:
    groups = Counter((c.flag_map[f], c.degree[f]) for f in c.source.flags_at[V])
    return math.prod(math.factorial(k) for k in groups.values())


@dataclass
class WeightReport:
    weight: Fraction
    per_vertex: list[tuple[int, Fraction, int]] = field(default_factory=list)
    edge_product: int = 1
    lcm_denominator: int = 1


def standard_weight(c: Cover) -> WeightReport:
    per = []
    num = Fraction(1)
    for V in c.source.vertices:
        H = hurwitz_genus0(c.degree[V], list(c.local_partitions(V).values()))
        cf = cf_factor(c, V)
        per.append((V, H, cf))
        num *= H * cf
    edges = math.prod(c.degree[e] for e in c.source.edges)
    lcms = math.prod(c.fiber_lcm(h) for h in c.target.edges)
    return WeightReport(edges * num / lcms, per, edges, lcms)


# -- symmetry ----------------------------------------------------------------------

def weierstrass_profile_ok(c: Cover) -> bool:
    g = c.deg
    H = c.target
    if H.marking is None or len(H.marking) != 3 * g:
        return False
    for k, leg in enumerate(H.marking):
        part = tuple(sorted((c.degree[f] for f in c.preimage(leg)), reverse=True))
        want = (g,) if k == 0 else (2,) + (1,) * (g - 2)
        if part != want:
            return False
    return True


def target_automorphisms_fixing_first(c: Cover) -> list[dict[int, int]]:
    H = c.target
    l1 = H.marking[0]
    return find_isomorphisms(H, H, respect_marking=False, colours1={l1: 1}, colours2={l1: 1})


def cover_automorphisms(c: Cover, beta: dict[int, int] | None = None, limit: int | None = None) -> list[dict[int, int]]:
    """Source flag bijections s with d o s = d and pi o s = beta o pi (legs unmarked)."""
    G = c.source
    beta = beta or {h: h for h in range(c.target.n_flags)}
    c1 = {f: (beta[c.flag_map[f]], c.degree[f]) for f in range(G.n_flags)}
    c2 = {f: (c.flag_map[f], c.degree[f]) for f in range(G.n_flags)}
    return find_isomorphisms(G, G, respect_marking=False, colours1=c1, colours2=c2, limit=limit)


@dataclass
class SymmetryData:
    """Automorphism data of a cover used by the multiplicity.

    ``rho_marked`` is the number of distinct actions on the stabilised
    source of automorphisms fixing every source leg.
    """

    VS: int
    HS: int
    rho_marked: int
    automorphisms: int


def _ft_action(stab, sigma) -> tuple[int, ...]:
    back = {o: x for x, o in stab.flag_origin.items()}
    return tuple(back[sigma[stab.flag_origin[x]]] for x in range(stab.graph.n_flags))


def symmetry_data(c: Cover, stab=None) -> SymmetryData:
    """Stabiliser sizes of a fibre point of the cover.

    A pair (a, beta) of a source-leg relabelling and a target relabelling
    fixes the fibre point when some isomorphism ``s`` from the cover to its
    relabelling acts on the stabilised source like an automorphism fixing
    all source legs.  VS counts such pairs with beta trivial, HS counts the
    target relabellings beta that occur.
    """
    if not weierstrass_profile_ok(c):
        raise WrongProfile("cover does not have the Weierstrass profile")
    stab = stab or forget_legs(c.source)
    legs = c.source.legs
    auts = cover_automorphisms(c)
    rho = {_ft_action(stab, s) for s in auts if all(s[l] == l for l in legs)}
    VS = len({tuple(s[l] for l in legs) for s in auts if _ft_action(stab, s) in rho})
    HS = 0
    for beta in target_automorphisms_fixing_first(c):
        if any(_ft_action(stab, s) in rho for s in cover_automorphisms(c, beta)):
            HS += 1
    return SymmetryData(VS, HS, len(rho), len(auts))


def stabilizers(c: Cover) -> tuple[int, int]:
    """(VS, HS) for a cover with the Weierstrass profile, see :func:`symmetry_data`."""
    s = symmetry_data(c)
    return s.VS, s.HS


def cover_multiplicity(c: Cover, ftF: Sequence[Sequence[int]] | None = None) -> int:
    """standard weight * |det(ft o F)| / (HS * VS), which must be an integer."""
    from .linalg import det
    if ftF is None:
        from .covers import ft_matrix
        ftF = ft_matrix(c)[1]
    if len(ftF) != len(ftF[0]):
        return 0
    VS, HS = stabilizers(c)
    m = standard_weight(c).weight * abs(det(ftF)) / (HS * VS)
    if m.denominator != 1 or m < 0:
        raise NonIntegralMultiplicity(f"multiplicity {m} is not a non-negative integer")
    return int(m)
