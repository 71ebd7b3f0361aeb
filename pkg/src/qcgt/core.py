"""Flavor-parameterized quantum-lift semantics over arbitrary rulesets.

A quantum game is played on a superposition of classical positions
("realizations").  A classical move is applied to every realization at once;
realizations where it is infeasible collapse (are dropped).  A quantum move is
a superposition of 2..w distinct classical move labels; its result is the
union of the per-component applications.  The five flavors A/B/C/C'/D differ
only in when classical moves are permitted.

Everything in this module is an immutable value; operations are pure
functions, safe to share across threads.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import Any, Iterator, Optional, Sequence, Union


class Player(Enum):
    LEFT = "L"
    RIGHT = "R"

    @property
    def opponent(self) -> "Player":
        return Player.RIGHT if self is Player.LEFT else Player.LEFT


class OutcomeClass(Enum):
    N = "N"  # next (first) player wins
    P = "P"  # previous (second) player wins
    L = "L"  # Left wins regardless of who starts
    R = "R"  # Right wins regardless of who starts


class Flavor(Enum):
    A = "A"            # classical moves never allowed
    B = "B"            # classical moves only when no quantum move is available
    C = "C"            # only safe classical moves (feasible in every realization)
    C_PRIME = "CPrime"  # only respectful moves (feasible in every non-terminal realization)
    D = "D"            # no restriction

    @classmethod
    def parse(cls, text: str) -> "Flavor":
        canon = text.strip().replace("'", "Prime").replace("_", "").lower()
        for fl in cls:
            if canon in (fl.name.replace("_", "").lower(), fl.value.lower()):
                return fl
        raise ValueError(f"unknown flavor {text!r}")

    def display(self) -> str:
        return "C'" if self is Flavor.C_PRIME else self.value


class IllegalMoveError(Exception):
    """Move not legal at the given state under its flavor/config."""

    def __init__(self, message: str, reason: str = "illegal"):
        super().__init__(message)
        self.reason = reason


class BudgetExhaustedError(IllegalMoveError):
    def __init__(self, message: str = "no quantum budget remaining"):
        super().__init__(message, reason="budget")


class DimensionCapExceededError(IllegalMoveError):
    def __init__(self, message: str = "resulting superposition exceeds the dimension cap"):
        super().__init__(message, reason="dimension_cap")


class Ruleset:
    """A concrete game: positions, move labels, and the move function.

    `apply` returns the successor position, or None when the (position, move)
    pair is infeasible — None is the only infeasibility signal, there are no
    sentinel positions.  `moves` enumerates exactly the feasible labels, in
    canonical (encoded-byte) order.  Encodings must be injective.
    """

    kind: str = "abstract"
    impartial: bool = True

    def apply(self, position: Any, move: Any, player: Player) -> Optional[Any]:
        raise NotImplementedError

    def moves(self, position: Any, player: Player) -> Iterator[Any]:
        raise NotImplementedError

    def successors(self, position: Any, player: Player) -> Iterator[tuple]:
        """(move, result) pairs for the feasible moves; hot path for search."""
        for m in self.moves(position, player):
            yield m, self.apply(position, m, player)

    def encode_position(self, position: Any) -> bytes:
        raise NotImplementedError

    def encode_move(self, move: Any) -> bytes:
        raise NotImplementedError

    def instance_digest(self) -> bytes:
        raise NotImplementedError

    def is_classically_terminal(self, position: Any, player: Player) -> bool:
        return next(iter(self.moves(position, player)), None) is None

    # JSON codecs; the wire formats live with each ruleset.
    def position_to_json(self, position: Any) -> Any:
        raise NotImplementedError

    def position_from_json(self, data: Any) -> Any:
        raise NotImplementedError

    def move_to_json(self, move: Any) -> Any:
        raise NotImplementedError

    def move_from_json(self, data: Any) -> Any:
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError

    def initial_position(self) -> Any:
        raise NotImplementedError


class Superposition:
    """Canonical nonempty deduplicated list of realizations.

    Realizations are kept sorted in their canonical order; a 1-wide
    superposition is a classical position.  Positions are plain value types
    whose natural ordering agrees with their byte codec (a contract each
    ruleset's tests pin down), so sorting and hashing skip the codec.
    """

    __slots__ = ("realizations",)

    def __init__(self, realizations: tuple):
        self.realizations = realizations

    @classmethod
    def of(cls, ruleset: Ruleset, positions: Sequence[Any]) -> "Superposition":
        sp = filter_positions(ruleset, positions)
        if sp is None:
            raise ValueError("a superposition needs at least one realization")
        return sp

    @property
    def width(self) -> int:
        return len(self.realizations)

    @property
    def is_classical(self) -> bool:
        return len(self.realizations) == 1

    def encoded(self, ruleset: Ruleset) -> bytes:
        return b"|".join(ruleset.encode_position(p) for p in self.realizations)

    def __eq__(self, other) -> bool:
        return isinstance(other, Superposition) and self.realizations == other.realizations

    def __hash__(self) -> int:
        return hash(self.realizations)

    def __repr__(self) -> str:
        return f"<{' | '.join(map(repr, self.realizations))}>"


def filter_positions(ruleset: Ruleset, candidates: Sequence[Optional[Any]]) -> Optional[Superposition]:
    """Drop None entries and duplicates; None iff every candidate is None."""
    seen = {pos for pos in candidates if pos is not None}
    if not seen:
        return None
    return Superposition(tuple(sorted(seen)))


class QuantumMove:
    """Sorted superposition of 2..w distinct classical move labels."""

    __slots__ = ("components", "key")

    def __init__(self, components: tuple, key: bytes):
        self.components = components
        self.key = key

    @classmethod
    def of(cls, ruleset: Ruleset, components: Sequence[Any]) -> "QuantumMove":
        items = sorted({ruleset.encode_move(m): m for m in components}.items())
        if len(items) < 2:
            raise ValueError("a quantum move needs at least 2 distinct components")
        key = b"|".join(enc for enc, _ in items)
        return cls(tuple(m for _, m in items), key)

    @property
    def width(self) -> int:
        return len(self.components)

    def __eq__(self, other) -> bool:
        return isinstance(other, QuantumMove) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return f"<{' | '.join(map(repr, self.components))}>"


Move = Union[Any, QuantumMove]


@dataclass(frozen=True)
class GameConfig:
    """Flavor, width bound, and the practical variants (budgets, cap, demi)."""

    flavor: Flavor = Flavor.D
    width: int = 2
    budget_left: Optional[int] = None
    budget_right: Optional[int] = None
    dimension_cap: Optional[int] = None
    demi: bool = False

    def __post_init__(self):
        if self.width < 2:
            raise ValueError("superposition width bound must be >= 2")
        for b in (self.budget_left, self.budget_right):
            if b is not None and b < 0:
                raise ValueError("quantum budgets must be non-negative")
        if self.dimension_cap is not None and self.dimension_cap < 1:
            raise ValueError("dimension cap must be >= 1")

    def to_json(self) -> dict:
        out: dict = {"flavor": self.flavor.display(), "width": self.width}
        if self.budget_left is not None:
            out["budget_left"] = self.budget_left
        if self.budget_right is not None:
            out["budget_right"] = self.budget_right
        if self.dimension_cap is not None:
            out["dimension_cap"] = self.dimension_cap
        if self.demi:
            out["demi"] = True
        return out

    @classmethod
    def from_json(cls, data: dict) -> "GameConfig":
        return cls(
            flavor=Flavor.parse(str(data.get("flavor", "D"))),
            width=int(data.get("width", 2)),
            budget_left=data.get("budget_left"),
            budget_right=data.get("budget_right"),
            dimension_cap=data.get("dimension_cap"),
            demi=bool(data.get("demi", False)),
        )


@dataclass(frozen=True)
class MoveRecord:
    move: Move
    player: Player


class GameState:
    """Board + mover + config + remaining budgets; immutable."""

    __slots__ = ("ruleset", "board", "to_move", "config", "budgets")

    def __init__(self, ruleset: Ruleset, board: Superposition, to_move: Player,
                 config: GameConfig, budgets: tuple[Optional[int], Optional[int]]):
        self.ruleset = ruleset
        self.board = board
        self.to_move = to_move
        self.config = config
        self.budgets = budgets  # (left remaining, right remaining)

    def budget_of(self, player: Player) -> Optional[int]:
        return self.budgets[0] if player is Player.LEFT else self.budgets[1]

    def _with(self, board: Superposition, budgets=None) -> "GameState":
        return GameState(self.ruleset, board, self.to_move.opponent, self.config,
                         self.budgets if budgets is None else budgets)

    def __repr__(self) -> str:
        return (f"GameState({self.ruleset.kind}, {self.board!r}, "
                f"to_move={self.to_move.value}, flavor={self.config.flavor.display()})")


def initial_state(ruleset: Ruleset, config: GameConfig,
                  board: Optional[Union[Superposition, Any]] = None,
                  to_move: Player = Player.LEFT) -> GameState:
    if board is None:
        board = ruleset.initial_position()
    if not isinstance(board, Superposition):
        board = Superposition.of(ruleset, [board])
    return GameState(ruleset, board, to_move, config,
                     (config.budget_left, config.budget_right))


def component_universe(state: GameState) -> list:
    """All classical labels feasible in at least one realization, canonical order."""
    ruleset, mover = state.ruleset, state.to_move
    seen = {}
    for r in state.board.realizations:
        for m in ruleset.moves(r, mover):
            enc = ruleset.encode_move(m)
            if enc not in seen:
                seen[enc] = m
    return [m for _, m in sorted(seen.items())]


def _feasible_counts(state: GameState) -> tuple[dict, int, int]:
    """Per-label feasible-realization counts, plus total and non-terminal widths.

    A label feasible in a realization makes that realization non-terminal, so
    the per-label count doubles as its non-terminal feasibility count.
    """
    ruleset, mover = state.ruleset, state.to_move
    counts: dict[bytes, list] = {}
    nonterminal = 0
    for r in state.board.realizations:
        empty = True
        for m in ruleset.moves(r, mover):
            empty = False
            enc = ruleset.encode_move(m)
            entry = counts.get(enc)
            if entry is None:
                counts[enc] = [m, 1]
            else:
                entry[1] += 1
        if not empty:
            nonterminal += 1
    return counts, state.board.width, nonterminal


def legal_classical_moves(state: GameState) -> list:
    """Classical labels legal under the state's flavor, in canonical order.

    D (and demi): feasible in >= 1 realization.  C: feasible in all.
    C': feasible in all non-terminal realizations and in >= 1 overall.
    B: the D set, but empty while any quantum move is available.  A: empty.
    """
    flavor = state.config.flavor
    if flavor is Flavor.A and not state.config.demi:
        return []
    counts, total, nonterminal = _feasible_counts(state)
    universe = [(enc, m, n) for enc, (m, n) in sorted(counts.items())]
    if state.config.demi or flavor in (Flavor.D, Flavor.B):
        if flavor is Flavor.B and not state.config.demi and _has_quantum_move(state):
            return []
        return [m for _, m, _ in universe]
    if flavor is Flavor.C:
        return [m for _, m, n in universe if n == total]
    if flavor is Flavor.C_PRIME:
        return [m for _, m, n in universe if n == nonterminal]
    return []


def _quantum_allowed(state: GameState) -> bool:
    if state.config.demi:
        return False
    budget = state.budget_of(state.to_move)
    return budget is None or budget > 0


def _quantum_result(state: GameState, components: Sequence[Any]) -> Optional[Superposition]:
    ruleset, mover = state.ruleset, state.to_move
    results = []
    for comp in components:
        for r in state.board.realizations:
            results.append(ruleset.apply(r, comp, mover))
    return filter_positions(ruleset, results)


def legal_quantum_moves(state: GameState) -> Iterator[QuantumMove]:
    """Eligible quantum moves, lazily, in (width, lexicographic) order.

    A k-subset (2 <= k <= min(w, |U|)) of the component universe U is
    eligible: every label in U is feasible in at least one realization by
    construction.  Budget, demi, and the dimension cap filter the stream.
    """
    if not _quantum_allowed(state):
        return
    ruleset = state.ruleset
    universe = component_universe(state)
    if len(universe) < 2:
        return
    cap = state.config.dimension_cap
    for k in range(2, min(state.config.width, len(universe)) + 1):
        for combo in combinations(universe, k):
            if cap is not None:
                result = _quantum_result(state, combo)
                if result is None or result.width > cap:
                    continue
            enc = b"|".join(ruleset.encode_move(m) for m in combo)
            yield QuantumMove(tuple(combo), enc)


def _has_quantum_move(state: GameState) -> bool:
    return next(iter(legal_quantum_moves(state)), None) is not None


def legal_moves(state: GameState) -> Iterator[Move]:
    yield from legal_classical_moves(state)
    yield from legal_quantum_moves(state)


def is_terminal(state: GameState) -> bool:
    """True iff the mover has no legal move, classical or quantum."""
    if legal_classical_moves(state):
        return False
    return not _has_quantum_move(state)


def apply_classical(state: GameState, move: Any) -> GameState:
    """Apply a classical label to every realization and filter the collapses."""
    ruleset, mover = state.ruleset, state.to_move
    enc = ruleset.encode_move(move)
    legal = {ruleset.encode_move(m) for m in legal_classical_moves(state)}
    if enc not in legal:
        flavor = state.config.flavor
        reason = "illegal"
        feasible_any = any(ruleset.apply(r, move, mover) is not None
                           for r in state.board.realizations)
        if feasible_any:
            if flavor is Flavor.A:
                reason = "classical-forbidden"
            elif flavor is Flavor.B:
                reason = "quantum-available"
            elif flavor is Flavor.C:
                reason = "unsafe"
            elif flavor is Flavor.C_PRIME:
                reason = "disrespectful"
        raise IllegalMoveError(
            f"classical move {move!r} is not legal in flavor {flavor.display()}",
            reason=reason)
    board = filter_positions(
        ruleset, [ruleset.apply(r, move, mover) for r in state.board.realizations])
    assert board is not None  # legality guarantees >= 1 surviving realization
    return state._with(board)


def apply_quantum(state: GameState, qmove: QuantumMove) -> GameState:
    """Apply a quantum move: union of per-component applications, filtered."""
    if state.config.demi:
        raise IllegalMoveError("quantum moves are disabled in demi-quantum games",
                               reason="demi")
    budget = state.budget_of(state.to_move)
    if budget is not None and budget <= 0:
        raise BudgetExhaustedError()
    if qmove.width > state.config.width:
        raise IllegalMoveError(
            f"quantum move width {qmove.width} exceeds bound {state.config.width}",
            reason="width")
    ruleset, mover = state.ruleset, state.to_move
    for comp in qmove.components:
        if all(ruleset.apply(r, comp, mover) is None for r in state.board.realizations):
            raise IllegalMoveError(
                f"component {comp!r} is infeasible in every realization",
                reason="ineligible")
    board = _quantum_result(state, qmove.components)
    assert board is not None
    cap = state.config.dimension_cap
    if cap is not None and board.width > cap:
        raise DimensionCapExceededError(
            f"result has {board.width} realizations, cap is {cap}")
    if budget is None:
        budgets = state.budgets
    elif mover is Player.LEFT:
        budgets = (budget - 1, state.budgets[1])
    else:
        budgets = (state.budgets[0], budget - 1)
    return state._with(board, budgets)


def apply_move(state: GameState, move: Move) -> GameState:
    if isinstance(move, QuantumMove):
        return apply_quantum(state, move)
    return apply_classical(state, move)


def bft(start: Union[Superposition, Any], moves: Sequence[Move], config: GameConfig,
        ruleset: Ruleset, to_move: Player = Player.LEFT) -> GameState:
    """Bounded forward transform: fold the move sequence over the start state."""
    state = initial_state(ruleset, config, start, to_move)
    for i, move in enumerate(moves):
        try:
            state = apply_move(state, move)
        except IllegalMoveError as exc:
            raise IllegalMoveError(f"move {i} ({move!r}): {exc}", reason=exc.reason) from exc
    return state


def move_key(ruleset: Ruleset, move: Move) -> bytes:
    """Canonical ordering key; classical labels sort before quantum moves."""
    if isinstance(move, QuantumMove):
        return b"q" + move.key
    return b"c" + ruleset.encode_move(move)


def canonical_key(state: GameState) -> bytes:
    """Injective key over (instance, board, mover, config, budgets).

    For impartial rulesets with symmetric budgets the mover is normalized
    away: both players see identical move sets, so outcomes coincide.
    """
    cfg = state.config
    if state.ruleset.impartial and state.budgets[0] == state.budgets[1]:
        mover = b"*"
    else:
        mover = state.to_move.value.encode()
    flavor_tag = {Flavor.A: b"A", Flavor.B: b"B", Flavor.C: b"C",
                  Flavor.C_PRIME: b"P", Flavor.D: b"D"}[cfg.flavor]
    head = struct.pack(
        ">cHBi", flavor_tag, cfg.width, cfg.demi,
        -1 if cfg.dimension_cap is None else cfg.dimension_cap,
    )
    budgets = b"%d,%d" % tuple(-1 if b is None else b for b in state.budgets)
    return b";".join((state.ruleset.instance_digest(), head, budgets, mover,
                      state.board.encoded(state.ruleset)))


def move_to_json(ruleset: Ruleset, move: Move) -> dict:
    if isinstance(move, QuantumMove):
        return {"quantum": [ruleset.move_to_json(c) for c in move.components]}
    return {"classical": ruleset.move_to_json(move)}


def move_from_json(ruleset: Ruleset, data: dict) -> Move:
    if not isinstance(data, dict):
        raise ValueError("a move payload must be an object")
    if "quantum" in data:
        comps = [ruleset.move_from_json(c) for c in data["quantum"]]
        return QuantumMove.of(ruleset, comps)
    if "classical" in data:
        return ruleset.move_from_json(data["classical"])
    raise ValueError("a move payload needs a 'classical' or 'quantum' field")
