"""The matching-based hero strategy for quantum undirected geography."""

import itertools
import random

import pytest

from qcgt.core import (
    Flavor,
    GameConfig,
    OutcomeClass,
    Player,
    initial_state,
    legal_classical_moves,
    legal_quantum_moves,
)
from qcgt.geography_strategy import (
    ContractionGraph,
    IllegalVillainMoveError,
    NotWinnableError,
    classical_ug_outcome,
    hero_first_move,
    hero_respond,
    new_session,
)
from qcgt.matching import edge_in_some_max_matching, max_matching
from qcgt.rulesets import GeographyRuleset
from qcgt.solver import classical_solve, solve
from qcgt.verify import hero_never_loses

from conftest import D2


def ug(n, edges, start=0):
    return GeographyRuleset([chr(97 + i) for i in range(n)], edges, start,
                            directed=False)


def connected(n, edges):
    if n <= 1:
        return True
    adj = {i: set() for i in range(n)}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    seen, stack = {0}, [0]
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return len(seen) == n


class TestClassicalOutcome:
    def test_rows(self):
        assert classical_ug_outcome(ug(2, [(0, 1)]), 0) is OutcomeClass.N
        p3 = [(0, 1), (1, 2)]
        assert classical_ug_outcome(ug(3, p3, 1), 1) is OutcomeClass.N
        assert classical_ug_outcome(ug(3, p3, 0), 0) is OutcomeClass.P
        c4 = [(0, 1), (1, 2), (2, 3), (3, 0)]
        for s in range(4):
            assert classical_ug_outcome(ug(4, c4, s), s) is OutcomeClass.N

    def test_matches_exhaustive_solver(self):
        rng = random.Random(2)
        for _ in range(60):
            n = rng.randint(2, 5)
            edges = [(u, v) for u in range(n) for v in range(u + 1, n)
                     if rng.random() < 0.5]
            start = rng.randrange(n)
            inst = ug(n, edges, start)
            assert classical_ug_outcome(inst, start) is \
                classical_solve(inst, inst.initial_position())

    def test_rejects_directed(self):
        geo = GeographyRuleset(["a", "b"], [(0, 1)], 0, directed=True)
        with pytest.raises(ValueError):
            classical_ug_outcome(geo, 0)


class TestFirstMove:
    def test_single_edge(self):
        session = new_session(ug(2, [(0, 1)]), D2)
        assert hero_first_move(session) == 1

    def test_path_center_canonical(self):
        session = new_session(ug(3, [(0, 1), (1, 2)], start=1), D2)
        assert hero_first_move(session) == 0  # smallest matched partner

    def test_star_center(self):
        star = ug(4, [(0, 1), (0, 2), (0, 3)])
        session = new_session(star, D2)
        assert hero_first_move(session) in (1, 2, 3)

    def test_not_winnable(self):
        session = new_session(ug(3, [(0, 1), (1, 2)], start=0), D2)
        # hero is the second player here; opening is the villain's
        with pytest.raises(NotWinnableError):
            hero_first_move(session)

    def test_config_rejected(self):
        with pytest.raises(ValueError):
            new_session(ug(2, [(0, 1)]), GameConfig(flavor=Flavor.C, width=2))
        with pytest.raises(ValueError):
            new_session(ug(2, [(0, 1)]), GameConfig(flavor=Flavor.D, width=3))


class TestRespond:
    def test_villain_illegal_move(self):
        session = new_session(ug(3, [(0, 1), (1, 2)], start=1), D2)
        hero_first_move(session)
        with pytest.raises(IllegalVillainMoveError):
            hero_respond(session, 0)  # visited vertex

    def test_collapsing_reply_exists(self):
        # path a-b-c-d from b: hero plays a; villain's quantum reply from a
        # cannot exist (a has one unvisited neighbor), so drive a 4-cycle
        c4 = ug(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
        session = new_session(c4, D2)
        first = hero_first_move(session)
        state = session.state
        villain_moves = list(legal_quantum_moves(state))
        if villain_moves:
            reply = hero_respond(session, villain_moves[0])
            assert isinstance(reply, int)

    def test_exhaustive_small_adversary(self):
        for n in range(2, 5):
            for edges in itertools.chain.from_iterable(
                    itertools.combinations(
                        [(u, v) for u in range(n) for v in range(u + 1, n)], r)
                    for r in range(1, n * (n - 1) // 2 + 1)):
                if not connected(n, list(edges)):
                    continue
                for start in range(n):
                    err = hero_never_loses(ug(n, list(edges), start))
                    assert err is None, (n, edges, start, err)


class TestContractionGraph:
    def test_overlay_definition(self):
        # path a-b-c: classes {a}, {b}, {c}; contract {a,c}: not all-pairs
        # adjacent to {b}? a-b and c-b are edges, so ({a,c},{b}) stays in E'
        adj = (0b010, 0b101, 0b010)
        cg = ContractionGraph.fresh(3, adj)
        cg.contract(0, 2)
        order, masks, index = cg.overlay()
        merged = cg.class_of(0)
        assert cg.classes[merged] == frozenset({0, 2})
        assert (masks[index[merged]] >> index[1]) & 1

    def test_overlay_requires_all_pairs(self):
        # triangle minus edge a-c: contracting {a,c} must NOT keep an edge
        # to a class containing a non-neighbor of one member
        adj = (0b010, 0b101, 0b010)
        cg = ContractionGraph.fresh(3, adj)
        # add a 4th vertex adjacent only to a
        adj4 = (0b1010, 0b0101, 0b0010, 0b0001)
        cg = ContractionGraph.fresh(4, adj4)
        cg.contract(0, 2)
        order, masks, index = cg.overlay()
        merged = cg.class_of(0)
        assert not (masks[index[merged]] >> index[3]) & 1  # d-c missing


def test_matching_to_matching_lemma():
    """A matched pair of overlay classes yields, in every live realization
    with both concrete vertices unvisited, an edge of some maximum matching
    of that realization's unvisited graph."""
    rng = random.Random(13)
    checked = 0
    for _ in range(600):
        n = rng.randint(3, 6)
        edges = [(u, v) for u in range(n) for v in range(u + 1, n)
                 if rng.random() < 0.6]
        if not connected(n, edges):
            continue
        ruleset = ug(n, edges)
        session = new_session(ruleset, D2)
        if session.hero is Player.LEFT:
            hero_first_move(session)
        for _ in range(3):
            state = session.state
            moves = list(legal_quantum_moves(state)) or \
                list(legal_classical_moves(state))
            if not moves:
                break
            try:
                hero_respond(session, rng.choice(moves))
            except Exception:
                break
            cg = session.contraction
            order, masks, index = cg.overlay()
            matching = max_matching(len(order), masks)
            for i, j in matching.pairs:
                class_a, class_b = cg.classes[order[i]], cg.classes[order[j]]
                for realization in session.state.board.realizations:
                    unvisited = ~realization.visited
                    alive = unvisited & ((1 << n) - 1) | (1 << realization.token)
                    for a in class_a:
                        for b in class_b:
                            if (unvisited >> a) & 1 and (unvisited >> b) & 1:
                                checked += 1
                                assert (ruleset.adjacency[a] >> b) & 1
                                assert edge_in_some_max_matching(
                                    n, ruleset.adjacency, a, b,
                                    alive & ~(1 << realization.token))
    assert checked > 50


def test_quantum_outcome_equals_classical_samples():
    rng = random.Random(21)
    for _ in range(40):
        n = rng.randint(2, 5)
        edges = [(u, v) for u in range(n) for v in range(u + 1, n)
                 if rng.random() < 0.6]
        if not connected(n, edges):
            continue
        start = rng.randrange(n)
        inst = ug(n, edges, start)
        assert solve(initial_state(inst, D2)).outcome is \
            classical_ug_outcome(inst, start)
