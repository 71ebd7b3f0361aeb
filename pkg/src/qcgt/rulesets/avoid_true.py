"""Avoid True: set variables of a positive CNF true without satisfying it.

A clause is active while all of its variables are free.  Setting v true is
feasible only if some clause stays unsatisfied afterwards, i.e. some active
clause avoids v.  The position is just the free-variable set.
"""

from __future__ import annotations

import struct
from typing import Iterator, Optional

from ..core import Player, Ruleset


class AvoidTrueRuleset(Ruleset):
    kind = "avoid_true"
    impartial = True

    def __init__(self, names: list[str], clauses: list[int],
                 free: Optional[int] = None):
        self.names = list(names)
        self._ids = {name: i for i, name in enumerate(self.names)}
        if len(self._ids) != len(self.names):
            raise ValueError("variable names must be unique")
        full = (1 << len(self.names)) - 1
        for c in clauses:
            if c == 0:
                raise ValueError("clauses must be nonempty")
            if c & ~full:
                raise ValueError("clause references a variable outside the ground set")
        self.clauses = tuple(clauses)
        self.start_free = full if free is None else free
        self._pos_bytes = (len(self.names) + 7) // 8 or 1
        self._move_enc = tuple(struct.pack(">H", v) for v in range(len(self.names)))
        self._succ_cache: dict[int, tuple] = {}
        self._parity_cache: dict[int, int] = {}

    def initial_position(self) -> int:
        return self.start_free

    def apply(self, position: int, move: int, player: Player) -> Optional[int]:
        if not (position >> move) & 1:
            return None
        bit = 1 << move
        for clause in self.clauses:
            if clause & ~position == 0 and not clause & bit:
                return position & ~bit
        return None

    def _successor_pairs(self, free: int) -> tuple:
        """v is feasible iff some active clause misses it, i.e. v lies outside
        the intersection of the active clauses.  Cached per free-mask; the
        same masks recur across many superpositions."""
        cached = self._succ_cache.get(free)
        if cached is not None:
            return cached
        blocked = -1
        has_active = False
        for clause in self.clauses:
            if clause & ~free == 0:
                has_active = True
                blocked &= clause
        feasible = free & ~blocked if has_active else 0
        pairs = []
        v = 0
        while feasible:
            if feasible & 1:
                pairs.append((v, free & ~(1 << v)))
            feasible >>= 1
            v += 1
        result = tuple(pairs)
        self._succ_cache[free] = result
        return result

    def moves(self, position: int, player: Player) -> Iterator[int]:
        return (v for v, _ in self._successor_pairs(position))

    def successors(self, position: int, player: Player) -> Iterator[tuple]:
        return iter(self._successor_pairs(position))

    def active_parity_flags(self, free: int) -> int:
        """Bit 0: some active clause has odd width; bit 1: even; bit 2: none."""
        cached = self._parity_cache.get(free)
        if cached is not None:
            return cached
        flags = 0
        for clause in self.clauses:
            if clause & ~free == 0:
                flags |= 1 << (~bin(clause).count("1") & 1)
        if not flags:
            flags = 4
        self._parity_cache[free] = flags
        return flags

    def encode_position(self, position: int) -> bytes:
        return position.to_bytes(self._pos_bytes, "big")

    def encode_move(self, move: int) -> bytes:
        return self._move_enc[move]

    def instance_digest(self) -> bytes:
        return b"at:%s:%s" % (",".join(self.names).encode(),
                              repr(self.clauses).encode())

    def variable_id(self, name: str) -> int:
        if name not in self._ids:
            raise ValueError(f"unknown variable {name!r}")
        return self._ids[name]

    def position_to_json(self, position: int):
        return {"free": [self.names[i] for i in range(len(self.names))
                         if (position >> i) & 1]}

    def position_from_json(self, data) -> int:
        free = 0
        for name in data["free"]:
            free |= 1 << self.variable_id(name)
        return free

    def move_to_json(self, move: int):
        return {"variable": self.names[move]}

    def move_from_json(self, data) -> int:
        return self.variable_id(data["variable"])

    def to_json(self) -> dict:
        return {
            "ruleset": "avoid_true",
            "variables": list(self.names),
            "clauses": [[self.names[i] for i in range(len(self.names))
                         if (c >> i) & 1] for c in self.clauses],
        }

    @classmethod
    def from_json(cls, data: dict) -> "AvoidTrueRuleset":
        names = [str(v) for v in data["variables"]]
        ids = {name: i for i, name in enumerate(names)}
        clauses = []
        try:
            for clause in data["clauses"]:
                mask = 0
                for name in clause:
                    mask |= 1 << ids[name]
                clauses.append(mask)
        except KeyError as exc:
            raise ValueError(f"unknown variable {exc.args[0]!r} in clause") from exc
        return cls(names, clauses)
