"""Small permutation helpers (permutations are tuples on 0..d-1)."""

from __future__ import annotations

import itertools
from functools import lru_cache


def cycle_type(p: tuple[int, ...]) -> tuple[int, ...]:
    seen = [False] * len(p)
    lens = []
    for i in range(len(p)):
        if not seen[i]:
            k, j = 0, i
            while not seen[j]:
                seen[j] = True
                j = p[j]
                k += 1
            lens.append(k)
    return tuple(sorted(lens, reverse=True))


def compose(p: tuple[int, ...], q: tuple[int, ...]) -> tuple[int, ...]:
    """(p o q)(i) = p(q(i))."""
    return tuple(p[i] for i in q)


def inverse(p: tuple[int, ...]) -> tuple[int, ...]:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def from_cycles(d: int, lengths) -> tuple[int, ...]:
    p = list(range(d))
    start = 0
    for n in lengths:
        for k in range(n):
            p[start + k] = start + (k + 1) % n
        start += n
    return tuple(p)


@lru_cache(maxsize=None)
def conjugacy_class(d: int, ctype: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    return tuple(p for p in itertools.permutations(range(d)) if cycle_type(p) == ctype)


def is_transitive(d: int, perms) -> bool:
    parent = list(range(d))

    def top(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for p in perms:
        for i, j in enumerate(p):
            parent[top(i)] = top(j)
    return len({top(i) for i in range(d)}) == 1
