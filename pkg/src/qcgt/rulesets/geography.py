"""Geography: walk a token along edges, never revisiting a vertex.

A position carries its own adjacency structure, not just the token and the
visited set: superpositions produced by the directed-to-undirected reduction
entangle realizations whose *graphs* differ while token and visited agree.
Vertices are dense integer ids; names map to ids at instance load time.
"""

from __future__ import annotations

import struct
from typing import Iterator, NamedTuple, Optional

from ..core import Player, Ruleset


class GeographyPosition(NamedTuple):
    adjacency: tuple  # adjacency[u] = bitmask of successors of u
    token: int
    visited: int      # bitmask, always includes the token


def adjacency_from_edges(n: int, edges, directed: bool) -> tuple:
    adj = [0] * n
    for u, v in edges:
        adj[u] |= 1 << v
        if not directed:
            adj[v] |= 1 << u
    return tuple(adj)


class GeographyRuleset(Ruleset):
    kind = "geography"
    impartial = True

    def __init__(self, names: list[str], edges: list[tuple[int, int]],
                 start: int, directed: bool, visited: Optional[int] = None):
        self.names = list(names)
        self.directed = bool(directed)
        n = len(self.names)
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError("edge references a vertex outside the instance")
        if not 0 <= start < n:
            raise ValueError("start vertex outside the instance")
        self.edges = tuple(sorted(set(edges)))
        self.start = start
        self.start_visited = (1 << start) if visited is None else visited
        if not (self.start_visited >> start) & 1:
            raise ValueError("the token's vertex must be visited")
        self.adjacency = adjacency_from_edges(n, self.edges, directed)
        self._ids = {name: i for i, name in enumerate(self.names)}
        if len(self._ids) != n:
            raise ValueError("vertex names must be unique")

    def initial_position(self) -> GeographyPosition:
        return GeographyPosition(self.adjacency, self.start, self.start_visited)

    def apply(self, position: GeographyPosition, move: int, player: Player):
        adj, token, visited = position
        if not 0 <= move < len(adj):
            return None
        if not (adj[token] >> move) & 1 or (visited >> move) & 1:
            return None
        return GeographyPosition(adj, move, visited | (1 << move))

    def moves(self, position: GeographyPosition, player: Player) -> Iterator[int]:
        adj, token, visited = position
        free = adj[token] & ~visited
        v = 0
        while free:
            if free & 1:
                yield v
            free >>= 1
            v += 1

    def encode_position(self, position: GeographyPosition) -> bytes:
        # field order matches the tuple so byte order equals value order
        adj, token, visited = position
        return struct.pack(f">{len(adj)}QH", *adj, token) + visited.to_bytes(
            (len(adj) + 7) // 8 or 1, "big")

    def encode_move(self, move: int) -> bytes:
        return struct.pack(">H", move)

    def instance_digest(self) -> bytes:
        return b"geo:%d:%d:%s" % (self.directed, len(self.names),
                                  ",".join(self.names).encode())

    def vertex_id(self, name: str) -> int:
        if name not in self._ids:
            raise ValueError(f"unknown vertex {name!r}")
        return self._ids[name]

    def position_to_json(self, position: GeographyPosition):
        adj, token, visited = position
        edges = []
        for u in range(len(adj)):
            mask = adj[u]
            v = 0
            while mask:
                if mask & 1 and (self.directed or u <= v):
                    edges.append([self.names[u], self.names[v]])
                mask >>= 1
                v += 1
        return {
            "edges": edges,
            "token": self.names[token],
            "visited": [self.names[i] for i in range(len(adj)) if (visited >> i) & 1],
        }

    def position_from_json(self, data) -> GeographyPosition:
        n = len(self.names)
        edges = [(self.vertex_id(u), self.vertex_id(v)) for u, v in data["edges"]]
        visited = 0
        for name in data["visited"]:
            visited |= 1 << self.vertex_id(name)
        token = self.vertex_id(data["token"])
        if not (visited >> token) & 1:
            raise ValueError("the token's vertex must be visited")
        return GeographyPosition(adjacency_from_edges(n, edges, self.directed),
                                 token, visited)

    def move_to_json(self, move: int):
        return {"to": self.names[move]}

    def move_from_json(self, data) -> int:
        return self.vertex_id(data["to"])

    def to_json(self) -> dict:
        return {
            "ruleset": "geography",
            "directed": self.directed,
            "vertices": list(self.names),
            "edges": [[self.names[u], self.names[v]] for u, v in self.edges],
            "start": self.names[self.start],
            "visited": [self.names[i] for i in range(len(self.names))
                        if (self.start_visited >> i) & 1],
        }

    @classmethod
    def from_json(cls, data: dict) -> "GeographyRuleset":
        names = [str(v) for v in data["vertices"]]
        ids = {name: i for i, name in enumerate(names)}
        try:
            edges = [(ids[u], ids[v]) for u, v in data["edges"]]
            start = ids[data["start"]]
            visited = 0
            for name in data.get("visited", [data["start"]]):
                visited |= 1 << ids[name]
        except KeyError as exc:
            raise ValueError(f"unknown vertex {exc.args[0]!r} in instance") from exc
        return cls(names, edges, start, bool(data.get("directed", False)), visited)
