"""Nim: piles of pebbles, reduce any pile by any positive amount.

Positions are fixed-length tuples of pile sizes; pile labels are positional
indices and no symmetry pruning is ever applied — quantum play is sensitive
to the labeling.
"""

from __future__ import annotations

import struct
from typing import Iterator, NamedTuple, Optional

from ..core import Player, Ruleset


class NimMove(NamedTuple):
    pile: int
    take: int


class NimRuleset(Ruleset):
    kind = "nim"
    impartial = True

    def __init__(self, piles: tuple[int, ...]):
        if not piles or any(p < 0 for p in piles):
            raise ValueError("nim needs a nonempty vector of non-negative piles")
        self.piles = tuple(int(p) for p in piles)

    def initial_position(self) -> tuple[int, ...]:
        return self.piles

    def apply(self, position, move: NimMove, player: Player) -> Optional[tuple]:
        pile, take = move
        if take < 1 or pile < 0 or pile >= len(position) or take > position[pile]:
            return None
        return position[:pile] + (position[pile] - take,) + position[pile + 1:]

    def moves(self, position, player: Player) -> Iterator[NimMove]:
        for pile, size in enumerate(position):
            for take in range(1, size + 1):
                yield NimMove(pile, take)

    def encode_position(self, position) -> bytes:
        return struct.pack(f">{len(position)}I", *position)

    def encode_move(self, move: NimMove) -> bytes:
        return struct.pack(">HI", move.pile, move.take)

    def instance_digest(self) -> bytes:
        return b"nim:%d" % len(self.piles)

    def position_to_json(self, position):
        return list(position)

    def position_from_json(self, data):
        piles = tuple(int(x) for x in data)
        if len(piles) != len(self.piles) or any(p < 0 for p in piles):
            raise ValueError("nim position must match the instance pile count")
        return piles

    def move_to_json(self, move: NimMove):
        return {"pile": move.pile, "take": move.take}

    def move_from_json(self, data) -> NimMove:
        return NimMove(int(data["pile"]), int(data["take"]))

    def to_json(self) -> dict:
        return {"ruleset": "nim", "piles": list(self.piles)}

    @classmethod
    def from_json(cls, data: dict) -> "NimRuleset":
        return cls(tuple(int(p) for p in data["piles"]))
