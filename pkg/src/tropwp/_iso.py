"""Colour refinement, isomorphism search and canonical forms for flag structures.

A flag structure is given by two integer lists ``root`` and ``inv`` over the
flags ``0..n-1`` together with a list of initial colours.  Colours may be any
values; they are compared through ``repr`` so that the result never depends
on flag numbering.
"""

from __future__ import annotations

from typing import Iterator, Sequence


def _incident(root: Sequence[int]) -> list[list[int]]:
    at: list[list[int]] = [[] for _ in root]
    for f, r in enumerate(root):
        if r != f:
            at[r].append(f)
    return at


def _rank(keys: Sequence) -> list[int]:
    order = sorted(set(keys))
    index = {k: i for i, k in enumerate(order)}
    return [index[k] for k in keys]


def initial_colours(root, inv, colours) -> list:
    """Attach the structural type of each flag (vertex, leg, half-edge)."""
    out = []
    for f in range(len(root)):
        kind = 0 if root[f] == f else (1 if inv[f] == f else 2)
        out.append((kind, repr(colours[f]) if colours is not None else ""))
    return out


class Partition:
    """Ordered partition of the flags of one structure, refined in place.

    Cells are identified by their start position in ``lab``; the colour of a
    flag is the start of its cell.  Refinement splits cells by the number of
    neighbours in a splitter cell, always in position order, so the result is
    equivariant under isomorphisms.
    """

    __slots__ = ("root", "inv", "at", "lab", "cell", "end")

    def __init__(self, root, inv, at, keys=None):
        self.root, self.inv, self.at = root, inv, at
        if keys is None:
            return
        n = len(root)
        self.lab = sorted(range(n), key=lambda x: keys[x])
        self.cell = [0] * n
        self.end = {}
        s = 0
        for k in range(1, n + 1):
            if k == n or keys[self.lab[k]] != keys[self.lab[s]]:
                for x in self.lab[s:k]:
                    self.cell[x] = s
                self.end[s] = k
                s = k

    def copy(self) -> "Partition":
        p = Partition(self.root, self.inv, self.at)
        p.lab, p.cell, p.end = list(self.lab), list(self.cell), dict(self.end)
        return p

    def colours(self) -> list[int]:
        return self.cell

    def discrete(self) -> bool:
        return len(self.end) == len(self.lab)

    def individualise(self, f: int) -> None:
        s = self.cell[f]
        e = self.end[s]
        if e - s == 1:
            return
        lab = self.lab
        i = lab.index(f, s, e)
        lab[s], lab[i] = lab[i], lab[s]
        self.end[s] = s + 1
        self.end[s + 1] = e
        for x in lab[s + 1:e]:
            self.cell[x] = s + 1
        self.refine([s])

    def refine(self, queue: list[int] | None = None) -> None:
        root, inv, at = self.root, self.inv, self.at
        lab, cell, end = self.lab, self.cell, self.end
        if queue is None:
            queue = sorted(end)
        pending = set(queue)
        queue = list(queue)
        qi = 0
        while qi < len(queue):
            s = queue[qi]
            qi += 1
            if s not in pending:
                continue
            pending.discard(s)
            members = lab[s:end[s]]
            for rel in range(3):
                count: dict[int, int] = {}
                for y in members:
                    if rel == 0:
                        xs = at[y]
                    elif rel == 1:
                        x = inv[y]
                        xs = (x,) if x != y else ()
                    else:
                        x = root[y]
                        xs = (x,) if x != y else ()
                    for x in xs:
                        count[x] = count.get(x, 0) + 1
                if not count:
                    continue
                touched: dict[int, list[int]] = {}
                for x in count:
                    touched.setdefault(cell[x], []).append(x)
                for c in sorted(touched):
                    e = end[c]
                    xs = touched[c]
                    if len(xs) == e - c and len({count[x] for x in xs}) == 1:
                        continue
                    block = sorted(lab[c:e], key=lambda x: count.get(x, 0))
                    lab[c:e] = block
                    starts = [c]
                    for k in range(1, e - c):
                        if count.get(block[k], 0) != count.get(block[k - 1], 0):
                            starts.append(c + k)
                    starts.append(e)
                    pieces = list(zip(starts, starts[1:]))
                    for a, b in pieces:
                        end[a] = b
                        for x in lab[a:b]:
                            cell[x] = a
                    if c in pending:
                        add = pieces[1:]
                    else:
                        big = max(pieces, key=lambda ab: ab[1] - ab[0])
                        add = [ab for ab in pieces if ab != big]
                    for a, _ in add:
                        if a not in pending:
                            pending.add(a)
                            queue.append(a)
                    # members of the splitter may have moved; keep its snapshot


def refine(structs: Sequence[tuple], colours: Sequence[list]) -> list[list[int]]:
    """Equitable refinement of each structure from jointly ranked initial colours.

    ``structs`` holds ``(root, inv, at)`` triples.  Colours are cell
    positions; they are comparable across structures whose initial colour
    multisets agree.
    """
    flat = [c for cs in colours for c in cs]
    ranks = _rank(flat)
    out = []
    pos = 0
    for (root, inv, at), cs in zip(structs, colours):
        keys = ranks[pos:pos + len(cs)]
        pos += len(cs)
        P = Partition(root, inv, at, keys)
        P.refine()
        out.append(P.colours())
    return out


def _plan(root, inv, at, colours) -> list[tuple[str, int, int]]:
    n = len(root)
    seen = [False] * n
    plan: list[tuple[str, int, int]] = []
    sizes: dict[int, int] = {}
    for f in range(n):
        sizes[colours[f]] = sizes.get(colours[f], 0) + 1
    starts = sorted((f for f in range(n) if root[f] == f), key=lambda v: (sizes[colours[v]], colours[v], v))
    for s in starts:
        if seen[s]:
            continue
        seen[s] = True
        plan.append(("start", s, -1))
        queue = [s]
        while queue:
            v = queue.pop(0)
            for h in sorted(at[v], key=lambda x: (sizes[colours[x]], colours[x])):
                if seen[h]:
                    continue
                seen[h] = True
                plan.append(("at", h, v))
                j = inv[h]
                if j != h and not seen[j]:
                    seen[j] = True
                    plan.append(("inv", j, h))
                    w = root[j]
                    if not seen[w]:
                        seen[w] = True
                        plan.append(("root", w, j))
                        queue.append(w)
    return plan


def iter_isomorphisms(a: tuple, b: tuple, ca: list, cb: list) -> Iterator[list[int]]:
    """Yield every colour preserving isomorphism from structure ``a`` to ``b``.

    Structures are ``(root, inv)`` pairs and ``ca``/``cb`` initial colours.
    Each isomorphism is a list mapping flags of ``a`` to flags of ``b``.
    """
    ra, ia = a
    rb, ib = b
    n = len(ra)
    if n != len(rb):
        return
    ata, atb = _incident(ra), _incident(rb)
    ia0, ib0 = initial_colours(ra, ia, ca), initial_colours(rb, ib, cb)
    if sorted(ia0) != sorted(ib0):
        return
    ca, cb = refine([(ra, ia, ata), (rb, ib, atb)], [ia0, ib0])
    if sorted(ca) != sorted(cb):
        return
    plan = _plan(ra, ia, ata, ca)
    by_colour: dict[int, list[int]] = {}
    for f in range(n):
        if rb[f] == f:
            by_colour.setdefault(cb[f], []).append(f)
    phi = [-1] * n
    used = [False] * n

    def assign(f: int, g: int) -> bool:
        if used[g] or ca[f] != cb[g]:
            return False
        phi[f] = g
        used[g] = True
        return True

    def undo(f: int) -> None:
        used[phi[f]] = False
        phi[f] = -1

    def rec(k: int) -> Iterator[list[int]]:
        if k == len(plan):
            yield list(phi)
            return
        kind, f, ref = plan[k]
        if kind == "start":
            cands = by_colour.get(ca[f], [])
        elif kind == "at":
            cands = atb[phi[ref]]
        elif kind == "inv":
            cands = [ib[phi[ref]]]
        else:
            cands = [rb[phi[ref]]]
        for g in cands:
            if not assign(f, g):
                continue
            ok = True
            if kind == "inv":
                w = ra[f]
                if phi[w] != -1 and phi[w] != rb[g]:
                    ok = False
            if ok:
                yield from rec(k + 1)
            undo(f)

    yield from rec(0)


def canonical_form(root: Sequence[int], inv: Sequence[int], colours=None) -> tuple[tuple, list[int]]:
    """Canonical encoding of a coloured flag structure.

    Returns ``(key, labelling)`` where ``labelling[f]`` is the canonical
    position of flag ``f``.  Two structures have equal keys exactly when
    they are isomorphic as coloured structures.
    """
    n = len(root)
    at = _incident(root)
    init = initial_colours(root, inv, colours)
    init_repr = [repr(c) for c in init]
    P0 = Partition(root, inv, at, _rank(init))
    P0.refine()
    best: list = [None, None]

    def twins(f: int, g: int, c: list[int]) -> bool:
        if root[f] != root[g] or root[f] == f:
            return False
        if init[f] != init[g]:
            return False
        jf, jg = inv[f], inv[g]
        if jf == f and jg == g:
            return True
        if jf == g:
            return True
        return root[jf] == root[jg] and init[jf] == init[jg] and c[jf] == c[jg]

    def rec(P: Partition) -> None:
        c = P.colours()
        if P.discrete():
            lab = c
            inv_lab = [0] * n
            for f in range(n):
                inv_lab[lab[f]] = f
            key = tuple((init_repr[f], lab[root[f]], lab[inv[f]]) for f in inv_lab)
            if best[0] is None or key < best[0]:
                best[0] = key
                best[1] = list(lab)
            return
        s = min((a for a, b in P.end.items() if b - a > 1), key=lambda a: (P.end[a] - a, a))
        cell = sorted(P.lab[s:P.end[s]])
        reps: list[int] = []
        for f in cell:
            if not any(twins(f, g, c) for g in reps):
                reps.append(f)
        for f in reps:
            Q = P.copy()
            Q.individualise(f)
            rec(Q)

    rec(P0)
    return best[0], best[1]
