"""Node Kayles and its partizan variants.

Plain: place a token on any vertex not occupied and not adjacent to a token;
the occupied vertices stay an independent set.  Bigraph: vertices are colored
Blue/Red and each player may only use their own color.  Snort: players place
colored tokens and may not play adjacent to the opponent's color (own color
is fine), so occupied sets need not be independent.
"""

from __future__ import annotations

import struct
from typing import Iterator, NamedTuple, Optional

from ..core import Player, Ruleset

PLAIN = "plain"
BIGRAPH = "bigraph"
SNORT = "snort"

BLUE = "blue"
RED = "red"

_PLAYER_COLOR = {Player.LEFT: BLUE, Player.RIGHT: RED}


class SnortPosition(NamedTuple):
    blue: int  # bitmask of Blue tokens
    red: int   # bitmask of Red tokens


class NodeKaylesRuleset(Ruleset):
    kind = "node_kayles"

    def __init__(self, names: list[str], edges: list[tuple[int, int]],
                 variant: str = PLAIN, occupied: int = 0,
                 colors: Optional[dict[int, str]] = None,
                 snort_blue: int = 0, snort_red: int = 0):
        if variant not in (PLAIN, BIGRAPH, SNORT):
            raise ValueError(f"unknown node_kayles variant {variant!r}")
        self.names = list(names)
        self.variant = variant
        self.impartial = variant == PLAIN
        n = len(self.names)
        self._ids = {name: i for i, name in enumerate(self.names)}
        if len(self._ids) != n:
            raise ValueError("vertex names must be unique")
        adj = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError("edge references a vertex outside the instance")
            if u != v:
                adj[u] |= 1 << v
                adj[v] |= 1 << u
        self.edges = tuple(sorted({(min(u, v), max(u, v)) for u, v in edges if u != v}))
        self.adjacency = tuple(adj)
        self.blue_mask = 0
        self.red_mask = 0
        if variant == BIGRAPH:
            colors = colors or {}
            for v in range(n):
                color = colors.get(v)
                if color == BLUE:
                    self.blue_mask |= 1 << v
                elif color == RED:
                    self.red_mask |= 1 << v
                else:
                    raise ValueError("bigraph variant needs a blue/red color per vertex")
        self.start_occupied = occupied
        self.start_snort = SnortPosition(snort_blue, snort_red)
        if variant == SNORT and snort_blue & snort_red:
            raise ValueError("a vertex cannot hold tokens of both colors")

    def initial_position(self):
        if self.variant == SNORT:
            return self.start_snort
        return self.start_occupied

    def apply(self, position, move: int, player: Player):
        if not 0 <= move < len(self.names):
            return None
        adj = self.adjacency[move]
        if self.variant == SNORT:
            blue, red = position
            if ((blue | red) >> move) & 1:
                return None
            enemy = red if player is Player.LEFT else blue
            if adj & enemy:
                return None
            if player is Player.LEFT:
                return SnortPosition(blue | (1 << move), red)
            return SnortPosition(blue, red | (1 << move))
        occupied = position
        if (occupied >> move) & 1 or adj & occupied:
            return None
        if self.variant == BIGRAPH:
            own = self.blue_mask if player is Player.LEFT else self.red_mask
            if not (own >> move) & 1:
                return None
        return occupied | (1 << move)

    def moves(self, position, player: Player) -> Iterator[int]:
        for v in range(len(self.names)):
            if self.apply(position, v, player) is not None:
                yield v

    def encode_position(self, position) -> bytes:
        if self.variant == SNORT:
            return struct.pack(">QQ", position.blue, position.red)
        return struct.pack(">Q", position)

    def encode_move(self, move: int) -> bytes:
        return struct.pack(">H", move)

    def instance_digest(self) -> bytes:
        return b"nk:%s:%s:%s" % (self.variant.encode(),
                                 ",".join(self.names).encode(),
                                 repr(self.edges).encode())

    def vertex_id(self, name: str) -> int:
        if name not in self._ids:
            raise ValueError(f"unknown vertex {name!r}")
        return self._ids[name]

    def _mask_names(self, mask: int) -> list[str]:
        return [self.names[i] for i in range(len(self.names)) if (mask >> i) & 1]

    def position_to_json(self, position):
        if self.variant == SNORT:
            colors = {self.names[i]: BLUE for i in range(len(self.names))
                      if (position.blue >> i) & 1}
            colors.update({self.names[i]: RED for i in range(len(self.names))
                           if (position.red >> i) & 1})
            return {"occupied": self._mask_names(position.blue | position.red),
                    "colors": colors}
        return {"occupied": self._mask_names(position)}

    def position_from_json(self, data):
        occupied = 0
        for name in data["occupied"]:
            occupied |= 1 << self.vertex_id(name)
        if self.variant == SNORT:
            blue = red = 0
            for name, color in data.get("colors", {}).items():
                if color == BLUE:
                    blue |= 1 << self.vertex_id(name)
                else:
                    red |= 1 << self.vertex_id(name)
            if blue | red != occupied:
                raise ValueError("snort occupied set must match token colors")
            return SnortPosition(blue, red)
        return occupied

    def move_to_json(self, move: int):
        return {"vertex": self.names[move]}

    def move_from_json(self, data) -> int:
        return self.vertex_id(data["vertex"])

    def to_json(self) -> dict:
        out = {
            "ruleset": "node_kayles",
            "variant": self.variant,
            "vertices": list(self.names),
            "edges": [[self.names[u], self.names[v]] for u, v in self.edges],
        }
        if self.variant == SNORT:
            state = self.position_to_json(self.start_snort)
            out["occupied"] = state["occupied"]
            out["colors"] = state["colors"]
        else:
            out["occupied"] = self._mask_names(self.start_occupied)
            if self.variant == BIGRAPH:
                out["colors"] = {
                    self.names[i]: (BLUE if (self.blue_mask >> i) & 1 else RED)
                    for i in range(len(self.names))
                }
        return out

    @classmethod
    def from_json(cls, data: dict) -> "NodeKaylesRuleset":
        names = [str(v) for v in data["vertices"]]
        ids = {name: i for i, name in enumerate(names)}
        try:
            edges = [(ids[u], ids[v]) for u, v in data["edges"]]
            variant = data.get("variant", PLAIN)
            colors_json = data.get("colors") or {}
            occupied = 0
            for name in data.get("occupied", []):
                occupied |= 1 << ids[name]
            if variant == SNORT:
                blue = red = 0
                for name, color in colors_json.items():
                    if color == BLUE:
                        blue |= 1 << ids[name]
                    elif color == RED:
                        red |= 1 << ids[name]
                    else:
                        raise ValueError(f"unknown token color {color!r}")
                if occupied and blue | red != occupied:
                    raise ValueError("snort occupied set must match token colors")
                return cls(names, edges, variant=SNORT,
                           snort_blue=blue, snort_red=red)
            colors = {ids[name]: color for name, color in colors_json.items()}
            return cls(names, edges, variant=variant, occupied=occupied,
                       colors=colors)
        except KeyError as exc:
            raise ValueError(f"unknown vertex {exc.args[0]!r} in instance") from exc
