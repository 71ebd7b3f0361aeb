"""Polynomial-time play for Quantum Undirected Geography with classical start.

The classical winner (hero) plays only classical moves and answers the
opponent's (villain's) quantum moves by tracking entanglement in an overlay
partition of the still-relevant vertices: each class holds vertices of which,
in every live realization, all but one are visited.  The overlay graph G'
joins two classes iff every cross pair is a base edge; the hero moves along
maximum matchings of G' and keeps the invariant that after landing on x some
maximum matching of G' avoids c(x).

Restricted to flavor D and width 2 with a classical start; anything else is
rejected outright.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .core import (
    Flavor,
    GameConfig,
    GameState,
    Move,
    OutcomeClass,
    Player,
    QuantumMove,
    apply_move,
    initial_state,
    legal_classical_moves,
    legal_quantum_moves,
)
from .matching import (
    edge_in_some_max_matching,
    matching_number,
    vertex_in_all_max_matchings,
)
from .rulesets.geography import GeographyRuleset


class NotWinnableError(Exception):
    """The hero was asked to open from a position they lose classically."""


class IllegalVillainMoveError(Exception):
    """The observed villain move is not legal at the current state."""


class InvariantBrokenError(Exception):
    """The hero could not find a reply the strategy promises exists; a bug."""


def classical_ug_outcome(ruleset: GeographyRuleset, start: int,
                         visited: Optional[int] = None) -> OutcomeClass:
    """Fraenkel-Scheinerman-Ullman: the mover wins iff the current vertex is
    in every maximum matching of the unvisited graph (plus the vertex)."""
    if ruleset.directed:
        raise ValueError("the matching criterion applies to undirected graphs only")
    n = len(ruleset.names)
    if visited is None:
        visited = 1 << start
    alive = ((1 << n) - 1) & ~visited | (1 << start)
    if vertex_in_all_max_matchings(n, ruleset.adjacency, start, alive):
        return OutcomeClass.N
    return OutcomeClass.P


@dataclass
class ContractionGraph:
    """Overlay partition of the remaining vertices with all-pairs-adjacent
    contracted edges, recomputed from the definition after each change."""

    n: int
    base_adjacency: tuple
    classes: dict[int, frozenset] = field(default_factory=dict)

    @classmethod
    def fresh(cls, n: int, base_adjacency: tuple) -> "ContractionGraph":
        cg = cls(n, base_adjacency)
        cg.classes = {v: frozenset((v,)) for v in range(n)}
        return cg

    def class_of(self, v: int) -> int:
        for cid, members in self.classes.items():
            if v in members:
                return cid
        raise KeyError(f"vertex {v} is not in the overlay")

    def has_vertex(self, v: int) -> bool:
        return any(v in members for members in self.classes.values())

    def remove_class(self, cid: int):
        del self.classes[cid]

    def contract(self, cid_a: int, cid_b: int) -> int:
        merged = self.classes.pop(cid_a) | self.classes.pop(cid_b)
        cid = min(merged)
        self.classes[cid] = merged
        return cid

    def overlay(self) -> tuple[list[int], tuple, dict[int, int]]:
        """Class ids in canonical order, their adjacency masks, and id->index."""
        order = sorted(self.classes)
        index = {cid: i for i, cid in enumerate(order)}
        masks = []
        for cid in order:
            mask = 0
            members = self.classes[cid]
            for other in order:
                if other == cid:
                    continue
                if all((self.base_adjacency[x] >> y) & 1
                       for x in members for y in self.classes[other]):
                    mask |= 1 << index[other]
            masks.append(mask)
        return order, tuple(masks), index


@dataclass
class HeroSession:
    """Single-owner mutable session driving the hero's replies."""

    ruleset: GeographyRuleset
    hero: Player
    state: GameState
    contraction: ContractionGraph
    transcript: list = field(default_factory=list)
    last_landing: int = -1  # vertex the previous classical mover departed from

    def assert_invariant(self, landing: int):
        order, masks, index = self.contraction.overlay()
        cid = self.contraction.class_of(landing)
        alive = (1 << len(order)) - 1
        full = matching_number(len(order), masks, alive)
        without = matching_number(len(order), masks, alive & ~(1 << index[cid]))
        if without != full:
            raise InvariantBrokenError(
                f"no maximum matching of G' avoids the landing class {cid}")

    def clone(self) -> "HeroSession":
        cg = ContractionGraph(self.contraction.n, self.contraction.base_adjacency,
                              dict(self.contraction.classes))
        return HeroSession(ruleset=self.ruleset, hero=self.hero, state=self.state,
                           contraction=cg, transcript=list(self.transcript),
                           last_landing=self.last_landing)


def _check_config(config: GameConfig):
    if config.flavor is not Flavor.D or config.width != 2 or config.demi \
            or config.dimension_cap is not None \
            or config.budget_left is not None or config.budget_right is not None:
        raise ValueError(
            "the hero strategy covers flavor D, width 2, no budgets/cap/demi only")


def new_session(ruleset: GeographyRuleset, config: GameConfig,
                first_player: Player = Player.LEFT) -> HeroSession:
    """Set up a session; the hero is whichever side wins classically."""
    _check_config(config)
    if ruleset.directed:
        raise ValueError("the hero strategy is for undirected geography")
    if ruleset.start_visited != 1 << ruleset.start:
        raise ValueError("the hero strategy requires a classical (fresh) start")
    outcome = classical_ug_outcome(ruleset, ruleset.start)
    hero = first_player if outcome is OutcomeClass.N else first_player.opponent
    state = initial_state(ruleset, config, to_move=first_player)
    contraction = ContractionGraph.fresh(len(ruleset.names), ruleset.adjacency)
    return HeroSession(ruleset=ruleset, hero=hero, state=state,
                       contraction=contraction, last_landing=ruleset.start)


def _depart(session: HeroSession, vertex: int):
    if session.contraction.has_vertex(vertex):
        session.contraction.remove_class(session.contraction.class_of(vertex))


def _matched_reply_classes(session: HeroSession, cid: int) -> list[int]:
    """Classes Y adjacent to cid in G' with (cid, Y) in some maximum matching,
    canonical order."""
    order, masks, index = session.contraction.overlay()
    out = []
    i = index[cid]
    for j, other in enumerate(order):
        if (masks[i] >> j) & 1 and edge_in_some_max_matching(len(order), masks, i, j):
            out.append(other)
    return out


def _concrete(session: HeroSession, cid: int) -> list[int]:
    return sorted(session.contraction.classes[cid])


def hero_first_move(session: HeroSession) -> int:
    """Open with the matched partner of the start vertex.

    Any x with (start, x) in some maximum matching works; canonical smallest.
    """
    ruleset = session.ruleset
    if session.hero is not session.state.to_move:
        raise NotWinnableError("the hero opens only from classically-won positions")
    start = ruleset.start
    n = len(ruleset.names)
    if classical_ug_outcome(ruleset, start) is not OutcomeClass.N:
        raise NotWinnableError("start position is a second-player win")
    choice = None
    for x in range(n):
        if (ruleset.adjacency[start] >> x) & 1 \
                and edge_in_some_max_matching(n, ruleset.adjacency, start, x):
            choice = x
            break
    if choice is None:
        raise InvariantBrokenError("an N-position start has a matched edge")
    _depart(session, start)
    session.state = apply_move(session.state, choice)
    session.transcript.append(MoveTaken(session.hero, choice))
    session.last_landing = choice
    session.assert_invariant(choice)
    return choice


@dataclass(frozen=True)
class MoveTaken:
    player: Player
    move: Union[int, QuantumMove]


def hero_respond(session: HeroSession, villain_move: Move) -> int:
    """Observe the villain's move and return the hero's classical reply.

    Villain classical to v (or quantum within one class): answer into the
    class matched to c(v).  Villain quantum <a|b> across classes: prefer a
    collapsing reply (matched to one branch, non-adjacent to the other);
    otherwise answer into the class matched to c(a) and contract c(a)|c(b).
    """
    ruleset = session.ruleset
    state = session.state
    if state.to_move is session.hero:
        raise IllegalVillainMoveError("it is the hero's turn")
    if isinstance(villain_move, QuantumMove):
        if villain_move.width != 2:
            raise IllegalVillainMoveError("the strategy handles width-2 quantum moves")
        legal = {m.key for m in legal_quantum_moves(state)}
        if villain_move.key not in legal:
            raise IllegalVillainMoveError(f"quantum move {villain_move!r} is not legal")
    else:
        legal_cls = {ruleset.encode_move(m) for m in legal_classical_moves(state)}
        if ruleset.encode_move(villain_move) not in legal_cls:
            raise IllegalVillainMoveError(f"move {villain_move!r} is not legal")

    _depart(session, session.last_landing)
    session.state = apply_move(state, villain_move)
    session.transcript.append(MoveTaken(session.hero.opponent, villain_move))

    cg = session.contraction
    if isinstance(villain_move, QuantumMove):
        a, b = villain_move.components
        ca, cb = cg.class_of(a), cg.class_of(b)
        if ca == cb:
            reply = _reply_into_match(session, ca, anchor=a)
            cg.remove_class(ca)
        else:
            reply = _collapsing_reply(session, a, b)
            if reply is not None:
                winner_branch = a if (ruleset.adjacency[a] >> reply) & 1 \
                    and not (ruleset.adjacency[b] >> reply) & 1 else b
                cg.remove_class(cg.class_of(winner_branch))
            else:
                reply = _reply_into_match(session, ca, anchor=a)
                cg.contract(ca, cb)
    else:
        v = villain_move
        cv = cg.class_of(v)
        reply = _reply_into_match(session, cv, anchor=v)
        cg.remove_class(cv)

    session.state = apply_move(session.state, reply)
    session.transcript.append(MoveTaken(session.hero, reply))
    session.last_landing = reply
    session.assert_invariant(reply)
    return reply


def _reply_into_match(session: HeroSession, cid: int, anchor: int) -> int:
    """A concrete x in a class matched to cid with (anchor, x) a base edge.

    Overlay adjacency makes every member of a matched class base-adjacent to
    the anchor, so the first concrete vertex of the first matched class wins.
    """
    for other in _matched_reply_classes(session, cid):
        for x in _concrete(session, other):
            return x
    raise InvariantBrokenError(
        f"class of vertex {anchor} is unmatched in every maximum matching of G'")


def _collapsing_reply(session: HeroSession, a: int, b: int) -> Optional[int]:
    """x matched to c(a) with (a,x) an edge but (b,x) not, or symmetric."""
    adj = session.ruleset.adjacency
    candidates = []
    for p, q in ((a, b), (b, a)):
        cid = session.contraction.class_of(p)
        for other in _matched_reply_classes(session, cid):
            for x in _concrete(session, other):
                if not (adj[q] >> x) & 1:
                    candidates.append(x)
    return min(candidates) if candidates else None


def play_out(ruleset: GeographyRuleset, config: GameConfig,
             villain_strategy, first_player: Player = Player.LEFT) -> Player:
    """Run a full game, the hero against a villain callback; returns the winner.

    villain_strategy(state) -> Move picks the villain's move from the legal
    ones.  Used by the adversary harness; raises if the hero ever gets stuck.
    """
    session = new_session(ruleset, config, first_player)
    from .core import is_terminal  # local import to avoid a cycle at module load

    if session.hero is first_player:
        hero_first_move(session)
    while True:
        state = session.state
        if is_terminal(state):
            return state.to_move.opponent
        if state.to_move is session.hero:
            raise InvariantBrokenError("hero to move outside the respond cycle")
        villain_move = villain_strategy(state)
        hero_respond(session, villain_move)
