"""Outcome-class computation for classical and quantum games.

`solve` is the exhaustive memoized search over quantum states;
`classical_solve` is its quantum-free counterpart and the oracle everywhere.
`solve_polyspace` re-derives the same outcomes without ever materializing a
superposition or a transposition table, by re-streaming QP-tree leaves.
"""

from __future__ import annotations

import time
from collections import OrderedDict
from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import Any, Iterator, Optional, Sequence

from .core import (
    Flavor,
    GameConfig,
    GameState,
    Move,
    OutcomeClass,
    Player,
    QuantumMove,
    Ruleset,
    Superposition,
    apply_move,
    canonical_key,
    initial_state,
    legal_classical_moves,
    legal_quantum_moves,
    move_key,
)


class ResourceExceededError(Exception):
    """A solve hit its node, time, or table limit; never a guessed outcome."""


class HeightExceededError(Exception):
    """A polyspace search branch outgrew the caller's height bound."""


@dataclass(frozen=True)
class SolveLimits:
    max_nodes: int = 20_000_000
    max_seconds: float = 3600.0
    max_table_entries: int = 4_000_000

    def __post_init__(self):
        if self.max_nodes <= 0 or self.max_seconds <= 0 or self.max_table_entries <= 0:
            raise ValueError("solve limits must be positive")


@dataclass
class SolveResult:
    outcome: OutcomeClass
    best_move: Optional[Move]
    nodes: int
    table_hits: int


class _Search:
    """Shared memoized mover-wins search with bounded transposition table.

    Children are produced by one fused pass per node: every label's
    per-realization application results are computed once and shared between
    the classical child and every quantum child that uses the label.
    """

    def __init__(self, limits: SolveLimits):
        self.limits = limits
        self.table: OrderedDict = OrderedDict()
        self.nodes = 0
        self.hits = 0
        self.deadline = time.monotonic() + limits.max_seconds

    def _tick(self):
        self.nodes += 1
        if self.nodes > self.limits.max_nodes:
            raise ResourceExceededError(f"node limit {self.limits.max_nodes} reached")
        if self.nodes % 1024 == 0 and time.monotonic() > self.deadline:
            raise ResourceExceededError("time limit reached")

    def _store(self, key, value: bool):
        if len(self.table) >= self.limits.max_table_entries:
            self.table.popitem(last=False)
        self.table[key] = value

    def _children(self, state: GameState) -> Iterator[tuple]:
        """(is_quantum, child board) pairs, legal under the state's config."""
        ruleset, mover, cfg = state.ruleset, state.to_move, state.config
        label_data: dict[bytes, list] = {}
        nonterminal = 0
        for r in state.board.realizations:
            empty = True
            for m, res in ruleset.successors(r, mover):
                empty = False
                enc = ruleset.encode_move(m)
                entry = label_data.get(enc)
                if entry is None:
                    entry = label_data[enc] = [0, set()]
                entry[0] += 1
                entry[1].add(res)
            if not empty:
                nonterminal += 1
        if not label_data:
            return
        universe = sorted(label_data.items())
        total = state.board.width
        budget = state.budget_of(mover)
        cap = cfg.dimension_cap
        quantum_ok = (not cfg.demi and (budget is None or budget > 0)
                      and len(universe) >= 2)

        def quantum_children():
            if not quantum_ok:
                return
            for k in range(2, min(cfg.width, len(universe)) + 1):
                for combo in combinations(universe, k):
                    merged = set()
                    for _, (_, results) in combo:
                        merged |= results
                    if cap is not None and len(merged) > cap:
                        continue
                    yield True, Superposition(tuple(sorted(merged)))

        flavor = cfg.flavor
        if cfg.demi or flavor is Flavor.D:
            classical = universe
        elif flavor is Flavor.A:
            classical = []
        elif flavor is Flavor.B:
            classical = [] if next(iter(quantum_children()), None) is not None \
                else universe
        elif flavor is Flavor.C:
            classical = [item for item in universe if item[1][0] == total]
        else:  # C'
            classical = [item for item in universe if item[1][0] == nonterminal]
        for _, (_, results) in classical:
            yield False, Superposition(tuple(sorted(results)))
        yield from quantum_children()

    def win(self, state: GameState) -> bool:
        """True iff the player to move has a winning strategy."""
        board, mover, budgets = state.board, state.to_move, state.budgets
        ruleset = state.ruleset
        if ruleset.impartial and budgets[0] == budgets[1]:
            key = board.realizations if budgets[0] is None \
                else (board.realizations, budgets)
        else:
            key = (board.realizations, mover, budgets)
        cached = self.table.get(key)
        if cached is not None:
            self.hits += 1
            self.table.move_to_end(key)
            return cached
        self._tick()
        decided = _parity_cutoff(state)
        if decided is not None:
            self._store(key, decided)
            return decided
        result = False
        opponent = mover.opponent
        cfg = state.config
        for is_quantum, child_board in self._children(state):
            if is_quantum and budgets != (None, None):
                if mover is Player.LEFT:
                    nb = (None if budgets[0] is None else budgets[0] - 1, budgets[1])
                else:
                    nb = (budgets[0], None if budgets[1] is None else budgets[1] - 1)
            else:
                nb = budgets
            child = GameState(ruleset, child_board, opponent, cfg, nb)
            if not self.win(child):
                result = True
                break
        self._store(key, result)
        return result

    def root_scan(self, state: GameState) -> tuple[bool, Optional[Move]]:
        """Mover-wins plus the canonically smallest winning move.

        Moves stream through the public legality path in canonical order, so
        the first winning classical move is final; quantum moves of width 2
        also stream in key order, wider configs finish the scan.
        """
        ruleset = state.ruleset
        for move in legal_classical_moves(state):
            if not self.win(apply_move(state, move)):
                return True, move
        best = None
        for move in legal_quantum_moves(state):
            if not self.win(apply_move(state, move)):
                if state.config.width == 2:
                    return True, move
                if best is None or move_key(ruleset, move) < move_key(ruleset, best):
                    best = move
        return best is not None, best


def _parity_cutoff(state: GameState) -> Optional[bool]:
    """Avoid-True destiny as a search cutoff: does the mover win?

    When every active clause in every realization shares one parity, the
    winner under arbitrary play is fixed: the mover with an even free count
    always has a move against all-odd clauses (pick a free variable outside
    one odd clause), and the odd-count mover against all-even, so only the
    opposite side can ever get stuck.  Because every realization then has a
    single possible winner, quantumness doesn't matter (flavor A excepted)
    and the quantum outcome equals that winner.
    """
    from .rulesets.avoid_true import AvoidTrueRuleset

    ruleset = state.ruleset
    if not isinstance(ruleset, AvoidTrueRuleset):
        return None
    if state.config.flavor is Flavor.A and not state.config.demi:
        return None
    flags = 0
    for free in state.board.realizations:
        flags |= ruleset.active_parity_flags(free)
        if flags not in (1, 2):  # mixed parity or a satisfied realization
            return None
    free_parity = bin(state.board.realizations[0]).count("1") & 1
    # all-odd: the even-count mover wins; all-even: the odd-count mover wins
    return free_parity == (0 if flags == 1 else 1)


def solve(state: GameState, limits: Optional[SolveLimits] = None) -> SolveResult:
    """Outcome class of a quantum state, with the mover's best move if winning.

    Impartial rulesets get a single rooted search (N/P); partizan rulesets are
    classified from two rooted searches, one per starting player.
    best_move is the canonically smallest winning move for state.to_move.
    """
    search = _Search(limits or SolveLimits())
    ruleset = state.ruleset
    if ruleset.impartial and state.budgets[0] == state.budgets[1]:
        mover_wins, best = search.root_scan(state)
        outcome = OutcomeClass.N if mover_wins else OutcomeClass.P
        return SolveResult(outcome, best, search.nodes, search.hits)
    as_left = GameState(ruleset, state.board, Player.LEFT, state.config, state.budgets)
    as_right = GameState(ruleset, state.board, Player.RIGHT, state.config, state.budgets)
    left_wins, best_left = search.root_scan(as_left)
    right_wins, best_right = search.root_scan(as_right)
    if left_wins and right_wins:
        outcome = OutcomeClass.N
    elif not left_wins and not right_wins:
        outcome = OutcomeClass.P
    elif left_wins:
        outcome = OutcomeClass.L
    else:
        outcome = OutcomeClass.R
    if state.to_move is Player.LEFT:
        best = best_left if left_wins else None
    else:
        best = best_right if right_wins else None
    return SolveResult(outcome, best, search.nodes, search.hits)


class _ClassicalSearch:
    """Memoized mover-wins search on the classical game (no quantum moves)."""

    def __init__(self, ruleset: Ruleset, limits: SolveLimits):
        self.ruleset = ruleset
        self.limits = limits
        self.table: dict[bytes, bool] = {}
        self.nodes = 0
        self.deadline = time.monotonic() + limits.max_seconds

    def win(self, position: Any, player: Player) -> bool:
        key = self.ruleset.encode_position(position)
        if not self.ruleset.impartial:
            key += player.value.encode()
        cached = self.table.get(key)
        if cached is not None:
            return cached
        self.nodes += 1
        if self.nodes > self.limits.max_nodes or len(self.table) > self.limits.max_table_entries:
            raise ResourceExceededError("classical solve limit reached")
        if self.nodes % 4096 == 0 and time.monotonic() > self.deadline:
            raise ResourceExceededError("classical solve time limit reached")
        result = False
        for move in self.ruleset.moves(position, player):
            nxt = self.ruleset.apply(position, move, player)
            if not self.win(nxt, player.opponent):
                result = True
                break
        self.table[key] = result
        return result

    def winning_moves(self, position: Any, player: Player) -> list:
        wins = []
        for move in self.ruleset.moves(position, player):
            nxt = self.ruleset.apply(position, move, player)
            if not self.win(nxt, player.opponent):
                wins.append(move)
        return wins


def classical_solve(ruleset: Ruleset, position: Any,
                    limits: Optional[SolveLimits] = None) -> OutcomeClass:
    """Exhaustive classical outcome (no quantum moves), the oracle everywhere."""
    search = _ClassicalSearch(ruleset, limits or SolveLimits())
    if ruleset.impartial:
        return OutcomeClass.N if search.win(position, Player.LEFT) else OutcomeClass.P
    left = search.win(position, Player.LEFT)
    right = search.win(position, Player.RIGHT)
    if left and right:
        return OutcomeClass.N
    if not left and not right:
        return OutcomeClass.P
    return OutcomeClass.L if left else OutcomeClass.R


def classical_mover_wins(ruleset: Ruleset, position: Any, player: Player,
                         limits: Optional[SolveLimits] = None) -> bool:
    return _ClassicalSearch(ruleset, limits or SolveLimits()).win(position, player)


def nim_xor_outcome(piles: Sequence[int]) -> OutcomeClass:
    """Bouton's criterion: first player wins iff the pile XOR is nonzero."""
    acc = 0
    for p in piles:
        acc ^= p
    return OutcomeClass.N if acc else OutcomeClass.P


@dataclass(frozen=True)
class QpTreeCursor:
    """A classical start plus the move sequence that defines a superposition."""

    ruleset: Ruleset
    start: Any
    moves: tuple
    to_move: Player = Player.LEFT


def qp_leaves(cursor: QpTreeCursor) -> Iterator[Any]:
    """Depth-first stream of the level-T positions of the QP-tree.

    Memory stays O(T x per-position size); duplicates may repeat in the
    stream, deduplication is the consumer's choice.
    """
    ruleset = cursor.ruleset
    moves = cursor.moves

    def walk(position, depth, player):
        if depth == len(moves):
            yield position
            return
        move = moves[depth]
        components = move.components if isinstance(move, QuantumMove) else (move,)
        for comp in components:
            nxt = ruleset.apply(position, comp, player)
            if nxt is not None:
                yield from walk(nxt, depth + 1, player.opponent)

    yield from walk(cursor.start, 0, cursor.to_move)


class _PolyspaceSearch:
    """Game-tree DFS over move sequences; every state question is answered by
    re-streaming QP-tree leaves, so memory is O(height), not O(states)."""

    def __init__(self, ruleset: Ruleset, start: Any, config: GameConfig,
                 height_bound: int, to_move: Player):
        self.ruleset = ruleset
        self.start = start
        self.config = config
        self.height_bound = height_bound
        self.root_player = to_move

    def _leaf_scan(self, moves: tuple, mover: Player):
        """One pass over the leaves: per-label feasibility counts and widths."""
        counts: dict[bytes, list] = {}
        total = 0
        nonterminal = 0
        for leaf in qp_leaves(QpTreeCursor(self.ruleset, self.start, moves,
                                           self.root_player)):
            total += 1
            empty = True
            for m in self.ruleset.moves(leaf, mover):
                empty = False
                enc = self.ruleset.encode_move(m)
                entry = counts.get(enc)
                if entry is None:
                    counts[enc] = [m, 1]
                else:
                    entry[1] += 1
            if not empty:
                nonterminal += 1
        return counts, total, nonterminal

    def _result_width_ok(self, moves: tuple, candidate: Move, mover: Player) -> bool:
        cap = self.config.dimension_cap
        if cap is None:
            return True
        seen: set[bytes] = set()
        for leaf in qp_leaves(QpTreeCursor(self.ruleset, self.start,
                                           moves + (candidate,), self.root_player)):
            seen.add(self.ruleset.encode_position(leaf))
            if len(seen) > cap:
                return False
        return True

    def _legal_moves(self, moves: tuple, mover: Player,
                     budget: Optional[int]) -> Iterator[Move]:
        # Note: leaves are *not* deduplicated here.  All legality questions
        # depend only on which labels are feasible somewhere / everywhere,
        # and duplicates cannot change any of the three counters in a way
        # that crosses those thresholds: a duplicated leaf inflates `total`
        # and each of its labels' counts by the same amount.
        counts, total, nonterminal = self._leaf_scan(moves, mover)
        universe = sorted(counts.items())
        flavor = self.config.flavor
        quantum_ok = not self.config.demi and (budget is None or budget > 0) \
            and len(universe) >= 2

        def quantum_stream():
            if not quantum_ok:
                return
            labels = [m for _, (m, _) in universe]
            for k in range(2, min(self.config.width, len(labels)) + 1):
                for combo in combinations(labels, k):
                    qm = QuantumMove.of(self.ruleset, combo)
                    if self._result_width_ok(moves, qm, mover):
                        yield qm

        has_quantum = False
        if flavor is Flavor.B and not self.config.demi:
            has_quantum = next(iter(quantum_stream()), None) is not None

        if self.config.demi or flavor is Flavor.D or (flavor is Flavor.B and not has_quantum):
            classical = [m for _, (m, _) in universe]
        elif flavor is Flavor.C:
            classical = [m for _, (m, n) in universe if n == total]
        elif flavor is Flavor.C_PRIME:
            classical = [m for _, (m, n) in universe if n == nonterminal]
        else:  # A, or B with quantum available
            classical = []
        # the dimension cap restricts quantum moves only
        yield from classical
        yield from quantum_stream()

    def win(self, moves: tuple, mover: Player, budgets: tuple) -> bool:
        if len(moves) > self.height_bound:
            raise HeightExceededError(
                f"branch reached {len(moves)} plies, bound is {self.height_bound}")
        budget = budgets[0] if mover is Player.LEFT else budgets[1]
        for move in self._legal_moves(moves, mover, budget):
            if isinstance(move, QuantumMove) and budget is not None:
                nxt_budgets = (budgets[0] - 1, budgets[1]) if mover is Player.LEFT \
                    else (budgets[0], budgets[1] - 1)
            else:
                nxt_budgets = budgets
            if not self.win(moves + (move,), mover.opponent, nxt_budgets):
                return True
        return False


def solve_polyspace(ruleset: Ruleset, start: Any, moves: Sequence[Move],
                    config: GameConfig, height_bound: int,
                    to_move: Player = Player.LEFT) -> OutcomeClass:
    """Outcome of bft(start, moves) computed in O(height) memory.

    The caller asserts the ruleset is polynomially short via height_bound;
    HeightExceededError signals that assumption was wrong.
    """
    search = _PolyspaceSearch(ruleset, start, config, height_bound + len(moves),
                              to_move)
    moves = tuple(moves)
    mover = to_move if len(moves) % 2 == 0 else to_move.opponent
    budgets = [config.budget_left, config.budget_right]
    walker = to_move
    for m in moves:
        if isinstance(m, QuantumMove):
            idx = 0 if walker is Player.LEFT else 1
            if budgets[idx] is not None:
                budgets[idx] -= 1
        walker = walker.opponent
    budgets_t = (budgets[0], budgets[1])
    if ruleset.impartial and budgets_t[0] == budgets_t[1]:
        mover_wins = search.win(moves, mover, budgets_t)
        return OutcomeClass.N if mover_wins else OutcomeClass.P
    left = search.win(moves, Player.LEFT, budgets_t)
    right = search.win(moves, Player.RIGHT, budgets_t)
    if left and right:
        return OutcomeClass.N
    if not left and not right:
        return OutcomeClass.P
    return OutcomeClass.L if left else OutcomeClass.R


class Quantumness(Enum):
    STRONG = "Strong"
    WEAK = "Weak"
    NONE = "None"


def classify_quantumness(ruleset: Ruleset, position: Any, config: GameConfig,
                         limits: Optional[SolveLimits] = None) -> Quantumness:
    """Strong: the quantum lift flips the outcome class of this classical start.

    Weak: the outcome survives, but at some classical state reachable under
    quantum play (winner to move) every classically-winning label fails
    quantumly: the classically-winning and quantumly-winning move sets are
    disjoint.  None otherwise.  The check is exhaustive over reachable states.
    """
    limits = limits or SolveLimits()
    oc_classical = classical_solve(ruleset, position, limits)
    root = initial_state(ruleset, config, position)
    search = _Search(limits)
    root_win = search.win(root)
    oc_quantum = OutcomeClass.N if root_win else OutcomeClass.P
    if not ruleset.impartial:
        raise ValueError("the quantumness classifier is defined for impartial rulesets")
    if oc_classical is not oc_quantum:
        return Quantumness.STRONG

    winner_is_mover = oc_quantum is OutcomeClass.N
    classical_search = _ClassicalSearch(ruleset, limits)

    seen = {canonical_key(root)}
    frontier = [(root, winner_is_mover)]  # (state, winner to move here?)
    explored = 0
    while frontier:
        state, winner_to_move = frontier.pop()
        explored += 1
        if explored > limits.max_nodes:
            raise ResourceExceededError("classifier reachability limit hit")
        if winner_to_move and state.board.is_classical:
            classical_pos = state.board.realizations[0]
            wc = classical_search.winning_moves(classical_pos, state.to_move)
            if wc and search.win(state):
                legal_here = {ruleset.encode_move(m)
                              for m in legal_classical_moves(state)}
                none_survive = all(
                    ruleset.encode_move(m) not in legal_here
                    or search.win(apply_move(state, m))
                    for m in wc)
                if none_survive:
                    return Quantumness.WEAK
        for move in legal_classical_moves(state):
            nxt = apply_move(state, move)
            key = canonical_key(nxt)
            if key not in seen:
                seen.add(key)
                frontier.append((nxt, not winner_to_move))
        for move in legal_quantum_moves(state):
            nxt = apply_move(state, move)
            key = canonical_key(nxt)
            if key not in seen:
                seen.add(key)
                frontier.append((nxt, not winner_to_move))
    return Quantumness.NONE


class SchaeferRole(Enum):
    TRUE_PLAYER = "True"    # moves while the free-variable count is even
    FALSE_PLAYER = "False"  # moves while the free-variable count is odd


def destiny_check(instance, realizations) -> Optional[SchaeferRole]:
    """Predict the winner of a Schaefer-lift position under *arbitrary* play.

    If every active clause in every realization has an even variable count,
    the odd-parity mover (False) wins; if every one is odd, True wins; mixed
    parities predict nothing.  (The parity argument: with an even ground set,
    a player facing only odd clauses on an even free count always has a
    feasible move, so only their opponent can get stuck, and vice versa.)
    """
    if isinstance(realizations, Superposition):
        frees = list(realizations.realizations)
    elif isinstance(realizations, int):
        frees = [realizations]
    else:
        frees = list(realizations)
    widths = set()
    for free in frees:
        for clause in instance.clauses:
            if clause & ~free == 0:
                widths.add(bin(clause).count("1") % 2)
    if widths == {0}:
        return SchaeferRole.FALSE_PLAYER
    if widths == {1}:
        return SchaeferRole.TRUE_PLAYER
    return None
