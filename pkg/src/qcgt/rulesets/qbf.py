"""Games on quantified Boolean formulas.

True (Left) wants every clause to hold a true literal; False (Right) wants a
clause whose literals are all false.  The `qbf` family assigns variables in
the prescribed alternating order; the `qsat` family lets each player pick any
of their own unassigned variables.  Six termination variants turn the logic
problem into a normal-play game:

  phantom          after all assignments, the mover gets one extra move iff
                   their win condition holds (merged_phantom folds the test
                   into the final variable assignment instead)
  clause_selector  False may pick an all-false clause at the end and wins
  literal_selector False picks any clause; True must answer with a literal
                   they satisfied in it
  tko              once a win condition holds the non-winner cannot move
  ko               an assignment may carry a declare-end flag, feasible only
                   when it clinches the mover's win condition
  haymaker         a standalone end-blow move, feasible once the mover's win
                   condition already holds; afterwards the opponent is stuck

Selector, phantom, KO-declare, and end-blow moves are distinct labeled move
kinds, so quantum superpositions over them are well-defined.
"""

from __future__ import annotations

import struct
from typing import Iterator, NamedTuple, Optional, Union

from ..core import Player, Ruleset

FAMILY_QBF = "qbf"
FAMILY_QSAT = "qsat"

PHANTOM = "phantom"
CLAUSE_SELECTOR = "clause_selector"
LITERAL_SELECTOR = "literal_selector"
TKO = "tko"
KO = "ko"
HAYMAKER = "haymaker"

VARIANTS = (PHANTOM, CLAUSE_SELECTOR, LITERAL_SELECTOR, TKO, KO, HAYMAKER)

TRUE_PLAYER = Player.LEFT
FALSE_PLAYER = Player.RIGHT


class Assign(NamedTuple):
    var: int
    value: bool
    declare: bool = False  # KO only: also declare the game over


class Phantom(NamedTuple):
    pass


class SelectClause(NamedTuple):
    clause: int


class SelectLiteral(NamedTuple):
    var: int
    negated: bool


class Blow(NamedTuple):
    pass


QbfMove = Union[Assign, Phantom, SelectClause, SelectLiteral, Blow]


class QbfPosition(NamedTuple):
    assigned: int             # bitmask over variables
    values: int               # bitmask of assigned-true variables
    phantom_used: bool = False
    selected_clause: int = -1  # literal_selector/clause_selector endgame
    literal_done: bool = False
    ended: bool = False        # KO declared or haymaker blown


class QbfRuleset(Ruleset):
    kind = "qbf"
    impartial = False

    def __init__(self, true_vars: list[str], false_vars: list[str],
                 clauses: list[tuple[tuple[int, bool], ...]],
                 family: str = FAMILY_QSAT, variant: str = PHANTOM,
                 merged_phantom: bool = False):
        if family not in (FAMILY_QBF, FAMILY_QSAT):
            raise ValueError(f"unknown family {family!r}")
        if variant not in VARIANTS:
            raise ValueError(f"unknown variant {variant!r}")
        if not (len(true_vars) == len(false_vars)
                or len(true_vars) == len(false_vars) + 1):
            raise ValueError("True needs the same number of variables as False, or one more")
        self.family = family
        self.variant = variant
        self.merged_phantom = merged_phantom and variant == PHANTOM
        self.names = list(true_vars) + list(false_vars)
        self._ids = {name: i for i, name in enumerate(self.names)}
        if len(self._ids) != len(self.names):
            raise ValueError("variable names must be unique")
        self.n_true = len(true_vars)
        n = len(self.names)
        self.owner_mask = {
            TRUE_PLAYER: (1 << self.n_true) - 1,
            FALSE_PLAYER: ((1 << n) - 1) ^ ((1 << self.n_true) - 1),
        }
        for clause in clauses:
            if not clause:
                raise ValueError("clauses must be nonempty")
            for var, _neg in clause:
                if not 0 <= var < n:
                    raise ValueError("clause references a variable outside the ground set")
        self.clauses = tuple(tuple(sorted(set(c))) for c in clauses)
        # prescribed assignment order for the qbf family: T1 F1 T2 F2 ...
        order = []
        for i in range(self.n_true):
            order.append(i)
            if i < n - self.n_true:
                order.append(self.n_true + i)
        self.order = tuple(order)

    # -- logic ------------------------------------------------------------

    def literal_value(self, pos: QbfPosition, var: int, negated: bool) -> Optional[bool]:
        if not (pos.assigned >> var) & 1:
            return None
        value = bool((pos.values >> var) & 1)
        return value != negated

    def condition_holds(self, pos: QbfPosition, player: Player) -> bool:
        if player is TRUE_PLAYER:
            return all(any(self.literal_value(pos, v, neg) for v, neg in clause)
                       for clause in self.clauses)
        return any(all(self.literal_value(pos, v, neg) is False for v, neg in clause)
                   for clause in self.clauses)

    def all_assigned(self, pos: QbfPosition) -> bool:
        return pos.assigned == (1 << len(self.names)) - 1

    def _next_ordered_var(self, pos: QbfPosition) -> Optional[int]:
        count = bin(pos.assigned).count("1")
        return self.order[count] if count < len(self.order) else None

    def _assignable_vars(self, pos: QbfPosition, player: Player) -> list[int]:
        if self.family == FAMILY_QBF:
            nxt = self._next_ordered_var(pos)
            if nxt is None or not (self.owner_mask[player] >> nxt) & 1:
                return []
            return [nxt]
        free = self.owner_mask[player] & ~pos.assigned
        return [v for v in range(len(self.names)) if (free >> v) & 1]

    def _assign(self, pos: QbfPosition, var: int, value: bool) -> QbfPosition:
        return pos._replace(assigned=pos.assigned | (1 << var),
                            values=pos.values | (value << var))

    # -- ruleset interface -------------------------------------------------

    def initial_position(self) -> QbfPosition:
        return QbfPosition(0, 0)

    def apply(self, pos: QbfPosition, move: QbfMove, player: Player):
        if pos.ended:
            return None
        variant = self.variant
        if isinstance(move, Assign):
            if move.declare and variant != KO:
                return None
            if variant == TKO and self.condition_holds(pos, player.opponent):
                return None
            if move.var not in self._assignable_vars(pos, player):
                return None
            nxt = self._assign(pos, move.var, move.value)
            if self.merged_phantom and self.all_assigned(nxt) \
                    and not self.condition_holds(nxt, player):
                return None
            if move.declare:
                if not self.condition_holds(nxt, player):
                    return None
                nxt = nxt._replace(ended=True)
            return nxt
        if isinstance(move, Phantom):
            if variant != PHANTOM or self.merged_phantom:
                return None
            if pos.phantom_used or not self.all_assigned(pos):
                return None
            if not self.condition_holds(pos, player):
                return None
            return pos._replace(phantom_used=True)
        if isinstance(move, SelectClause):
            if variant not in (CLAUSE_SELECTOR, LITERAL_SELECTOR):
                return None
            if player is not FALSE_PLAYER or not self.all_assigned(pos):
                return None
            if pos.selected_clause >= 0 or not 0 <= move.clause < len(self.clauses):
                return None
            if variant == CLAUSE_SELECTOR:
                clause = self.clauses[move.clause]
                if not all(self.literal_value(pos, v, neg) is False for v, neg in clause):
                    return None
            return pos._replace(selected_clause=move.clause)
        if isinstance(move, SelectLiteral):
            if variant != LITERAL_SELECTOR or player is not TRUE_PLAYER:
                return None
            if pos.selected_clause < 0 or pos.literal_done:
                return None
            literal = (move.var, move.negated)
            if literal not in self.clauses[pos.selected_clause]:
                return None
            if self.literal_value(pos, move.var, move.negated) is not True:
                return None
            return pos._replace(literal_done=True)
        if isinstance(move, Blow):
            if variant != HAYMAKER or not self.condition_holds(pos, player):
                return None
            return pos._replace(ended=True)
        return None

    def moves(self, pos: QbfPosition, player: Player) -> Iterator[QbfMove]:
        candidates: list[QbfMove] = []
        for var in self._assignable_vars(pos, player):
            for value in (False, True):
                candidates.append(Assign(var, value))
                if self.variant == KO:
                    candidates.append(Assign(var, value, declare=True))
        if self.variant == PHANTOM and not self.merged_phantom:
            candidates.append(Phantom())
        if self.variant == HAYMAKER:
            candidates.append(Blow())
        if self.variant in (CLAUSE_SELECTOR, LITERAL_SELECTOR):
            candidates.extend(SelectClause(c) for c in range(len(self.clauses)))
        if self.variant == LITERAL_SELECTOR and pos.selected_clause >= 0:
            candidates.extend(SelectLiteral(v, neg)
                              for v, neg in self.clauses[pos.selected_clause])
        feasible = [(self.encode_move(m), m) for m in candidates
                    if self.apply(pos, m, player) is not None]
        for _, m in sorted(feasible):
            yield m

    def encode_position(self, pos: QbfPosition) -> bytes:
        # selected_clause is shifted by one so byte order equals value order
        return struct.pack(">QQ?H??", pos.assigned, pos.values, pos.phantom_used,
                           pos.selected_clause + 1, pos.literal_done, pos.ended)

    def encode_move(self, move: QbfMove) -> bytes:
        if isinstance(move, Assign):
            return b"a" + struct.pack(">H??", move.var, move.value, move.declare)
        if isinstance(move, Blow):
            return b"b"
        if isinstance(move, SelectClause):
            return b"c" + struct.pack(">H", move.clause)
        if isinstance(move, SelectLiteral):
            return b"l" + struct.pack(">H?", move.var, move.negated)
        return b"p"

    def instance_digest(self) -> bytes:
        return b"qbf:%s:%s:%d:%s:%s:%d" % (
            self.family.encode(), self.variant.encode(), self.n_true,
            ",".join(self.names).encode(), repr(self.clauses).encode(),
            self.merged_phantom)

    def variable_id(self, name: str) -> int:
        if name not in self._ids:
            raise ValueError(f"unknown variable {name!r}")
        return self._ids[name]

    def position_to_json(self, pos: QbfPosition):
        assignment = {self.names[v]: bool((pos.values >> v) & 1)
                      for v in range(len(self.names)) if (pos.assigned >> v) & 1}
        out: dict = {"assignment": assignment}
        if pos.phantom_used:
            out["phantom_used"] = True
        if pos.selected_clause >= 0:
            out["selected_clause"] = pos.selected_clause
        if pos.literal_done:
            out["literal_done"] = True
        if pos.ended:
            out["ended"] = True
        return out

    def position_from_json(self, data) -> QbfPosition:
        assigned = values = 0
        for name, value in data.get("assignment", {}).items():
            var = self.variable_id(name)
            assigned |= 1 << var
            values |= bool(value) << var
        return QbfPosition(assigned, values,
                           bool(data.get("phantom_used", False)),
                           int(data.get("selected_clause", -1)),
                           bool(data.get("literal_done", False)),
                           bool(data.get("ended", False)))

    def move_to_json(self, move: QbfMove):
        if isinstance(move, Assign):
            out = {"kind": "assign", "var": self.names[move.var], "value": move.value}
            if move.declare:
                out["declare"] = True
            return out
        if isinstance(move, Phantom):
            return {"kind": "phantom"}
        if isinstance(move, SelectClause):
            return {"kind": "select_clause", "clause": move.clause}
        if isinstance(move, SelectLiteral):
            return {"kind": "select_literal", "var": self.names[move.var],
                    "neg": move.negated}
        return {"kind": "blow"}

    def move_from_json(self, data) -> QbfMove:
        kind = data.get("kind", "assign")
        if kind == "assign":
            return Assign(self.variable_id(data["var"]), bool(data["value"]),
                          bool(data.get("declare", False)))
        if kind == "phantom":
            return Phantom()
        if kind == "select_clause":
            return SelectClause(int(data["clause"]))
        if kind == "select_literal":
            return SelectLiteral(self.variable_id(data["var"]), bool(data["neg"]))
        if kind == "blow":
            return Blow()
        raise ValueError(f"unknown qbf move kind {kind!r}")

    def to_json(self) -> dict:
        out = {
            "ruleset": "qbf",
            "family": self.family,
            "variant": self.variant,
            "true_vars": self.names[:self.n_true],
            "false_vars": self.names[self.n_true:],
            "clauses": [[{"var": self.names[v], "neg": neg} for v, neg in clause]
                        for clause in self.clauses],
        }
        if self.merged_phantom:
            out["merged_phantom"] = True
        return out

    @classmethod
    def from_json(cls, data: dict) -> "QbfRuleset":
        true_vars = [str(v) for v in data["true_vars"]]
        false_vars = [str(v) for v in data["false_vars"]]
        ids = {name: i for i, name in enumerate(true_vars + false_vars)}
        clauses = []
        try:
            for clause in data["clauses"]:
                clauses.append(tuple((ids[lit["var"]], bool(lit.get("neg", False)))
                                     for lit in clause))
        except KeyError as exc:
            raise ValueError(f"unknown variable {exc.args[0]!r} in clause") from exc
        return cls(true_vars, false_vars, clauses,
                   family=data.get("family", FAMILY_QSAT),
                   variant=data.get("variant", PHANTOM),
                   merged_phantom=bool(data.get("merged_phantom", False)))
