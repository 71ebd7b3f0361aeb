"""Maximum matching on general graphs via augmenting paths with blossom
contraction (Edmonds), O(V^3).

Graphs are (n, adjacency) where adjacency[v] is a neighbor bitmask; an
`alive` mask restricts queries to an induced subgraph without reindexing.
Bipartite algorithms are insufficient here: odd cycles are the whole point.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional


def _bits(mask: int) -> Iterator[int]:
    v = 0
    while mask:
        if mask & 1:
            yield v
        mask >>= 1
        v += 1


def maximum_matching(n: int, adjacency: tuple, alive: Optional[int] = None) -> list[int]:
    """Return match[v] = partner of v, or -1, over the vertices in `alive`."""
    if alive is None:
        alive = (1 << n) - 1
    match = [-1] * n
    parent = [-1] * n
    base = list(range(n))

    def lca(a: int, b: int) -> int:
        used = [False] * n
        x = a
        while True:
            x = base[x]
            used[x] = True
            if match[x] == -1:
                break
            x = parent[match[x]]
        y = b
        while True:
            y = base[y]
            if used[y]:
                return y
            y = parent[match[y]]

    def mark_path(v: int, b: int, child: int, blossom: list[bool]):
        while base[v] != b:
            blossom[base[v]] = True
            blossom[base[match[v]]] = True
            parent[v] = child
            child = match[v]
            v = parent[match[v]]

    def find_augmenting_path(root: int) -> int:
        for v in range(n):
            parent[v] = -1
            base[v] = v
        used = [False] * n
        used[root] = True
        queue = [root]
        while queue:
            v = queue.pop(0)
            for to in _bits(adjacency[v] & alive):
                if base[v] == base[to] or match[v] == to:
                    continue
                if to == root or (match[to] != -1 and parent[match[to]] != -1):
                    # an odd cycle: contract the blossom down to its base
                    curbase = lca(v, to)
                    blossom = [False] * n
                    mark_path(v, curbase, to, blossom)
                    mark_path(to, curbase, v, blossom)
                    for u in range(n):
                        if blossom[base[u]]:
                            base[u] = curbase
                            if not used[u]:
                                used[u] = True
                                queue.append(u)
                elif parent[to] == -1:
                    parent[to] = v
                    if match[to] == -1:
                        return to
                    used[match[to]] = True
                    queue.append(match[to])
        return -1

    for v in _bits(alive):
        if match[v] == -1:
            leaf = find_augmenting_path(v)
            while leaf != -1:
                prev = parent[leaf]
                nxt = match[prev]
                match[leaf] = prev
                match[prev] = leaf
                leaf = nxt
    return match


def matching_number(n: int, adjacency: tuple, alive: Optional[int] = None) -> int:
    match = maximum_matching(n, adjacency, alive)
    return sum(1 for v in range(n) if match[v] != -1) // 2


@dataclass(frozen=True)
class Matching:
    pairs: frozenset  # frozenset of (u, v) with u < v

    @property
    def size(self) -> int:
        return len(self.pairs)

    def partner(self, v: int) -> Optional[int]:
        for a, b in self.pairs:
            if a == v:
                return b
            if b == v:
                return a
        return None


def max_matching(n: int, adjacency: tuple, alive: Optional[int] = None) -> Matching:
    match = maximum_matching(n, adjacency, alive)
    pairs = frozenset((v, match[v]) for v in range(n)
                      if match[v] != -1 and v < match[v])
    return Matching(pairs)


def vertex_in_all_max_matchings(n: int, adjacency: tuple, v: int,
                                alive: Optional[int] = None) -> bool:
    """True iff deleting v shrinks the matching number."""
    if alive is None:
        alive = (1 << n) - 1
    if not (alive >> v) & 1:
        raise ValueError(f"vertex {v} is not in the queried subgraph")
    full = matching_number(n, adjacency, alive)
    return matching_number(n, adjacency, alive & ~(1 << v)) < full


def edge_in_some_max_matching(n: int, adjacency: tuple, a: int, b: int,
                              alive: Optional[int] = None) -> bool:
    """Standard criterion: (a,b) lies in a maximum matching iff removing both
    endpoints costs exactly one matched edge."""
    if alive is None:
        alive = (1 << n) - 1
    if not (adjacency[a] >> b) & 1:
        raise ValueError(f"({a},{b}) is not an edge")
    full = matching_number(n, adjacency, alive)
    rest = matching_number(n, adjacency, alive & ~(1 << a) & ~(1 << b))
    return rest == full - 1


def brute_force_max_matchings(n: int, adjacency: tuple,
                              alive: Optional[int] = None) -> list[frozenset]:
    """Enumerate every maximum matching; test oracle, exponential."""
    if alive is None:
        alive = (1 << n) - 1
    edges = [(u, v) for u in _bits(alive) for v in _bits(adjacency[u] & alive) if u < v]
    all_matchings: set[frozenset] = set()

    def extend(idx: int, used: int, chosen: tuple):
        if idx == len(edges):
            all_matchings.add(frozenset(chosen))
            return
        u, v = edges[idx]
        if not (used >> u) & 1 and not (used >> v) & 1:
            extend(idx + 1, used | (1 << u) | (1 << v), chosen + ((u, v),))
        extend(idx + 1, used, chosen)

    extend(0, 0, ())
    top = max(len(m) for m in all_matchings)
    return sorted((m for m in all_matchings if len(m) == top), key=sorted)
