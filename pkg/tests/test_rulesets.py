"""Concrete rulesets: move functions, enumeration consistency, codecs,
and the JSON instance schemas."""

import random

import pytest

from qcgt.core import Player
from qcgt.rulesets import (
    AvoidTrueRuleset,
    GeographyRuleset,
    NimMove,
    NimRuleset,
    NodeKaylesRuleset,
    QbfRuleset,
    instance_from_json,
    InvalidInstanceError,
)
from qcgt.rulesets.node_kayles import BIGRAPH, BLUE, RED, SNORT, SnortPosition
from qcgt.rulesets.qbf import (
    CLAUSE_SELECTOR,
    FAMILY_QBF,
    FAMILY_QSAT,
    HAYMAKER,
    KO,
    LITERAL_SELECTOR,
    PHANTOM,
    TKO,
    Assign,
    Blow,
    Phantom,
    SelectClause,
    SelectLiteral,
)

L, R = Player.LEFT, Player.RIGHT


class TestNim:
    def test_apply_rows(self):
        nim = NimRuleset((2, 2))
        assert nim.apply((2, 2), NimMove(0, 1), L) == (1, 2)
        assert nim.apply((1, 0), NimMove(1, 1), L) is None
        assert NimRuleset((3, 2)).apply((3, 2), NimMove(0, 3), L) == (0, 2)

    def test_moves_enumeration(self):
        nim = NimRuleset((2, 2))
        assert list(nim.moves((2, 1), L)) == [
            NimMove(0, 1), NimMove(0, 2), NimMove(1, 1)]

    def test_impartial(self):
        assert NimRuleset((1,)).impartial

    def test_json(self):
        inst = instance_from_json({"ruleset": "nim", "piles": [2, 2]})
        assert isinstance(inst, NimRuleset) and inst.piles == (2, 2)
        assert inst.to_json() == {"ruleset": "nim", "piles": [2, 2]}


class TestGeography:
    def path3(self, directed=False):
        return GeographyRuleset(["a", "b", "c"], [(0, 1), (1, 2)], 0, directed)

    def test_apply(self):
        geo = self.path3()
        pos = geo.initial_position()
        nxt = geo.apply(pos, 1, L)
        assert nxt.token == 1 and nxt.visited == 0b011
        assert geo.apply(pos, 2, L) is None  # no edge a-c

    def test_no_revisit(self):
        geo = self.path3()
        pos = geo.apply(geo.initial_position(), 1, L)
        assert geo.apply(pos, 0, L) is None

    def test_gadget_path_walk(self):
        # the subdivided arc walks a -> ab1 -> ab2 -> b
        geo = GeographyRuleset(["a", "ab1", "ab2", "b"],
                               [(0, 1), (1, 2), (2, 3)], 0, directed=True)
        pos = geo.initial_position()
        for step in (1, 2, 3):
            pos = geo.apply(pos, step, L)
            assert pos is not None
        assert pos.token == 3

    def test_visited_grows_by_one(self):
        geo = self.path3()
        pos = geo.initial_position()
        count = bin(pos.visited).count("1")
        for move in geo.moves(pos, L):
            nxt = geo.apply(pos, move, L)
            assert bin(nxt.visited).count("1") == count + 1

    def test_json_round_trip(self):
        data = {"ruleset": "geography", "directed": True,
                "vertices": ["a", "b"], "edges": [["a", "b"]],
                "start": "a", "visited": ["a"]}
        geo = instance_from_json(data)
        assert geo.to_json() == data
        pos = geo.initial_position()
        assert geo.position_from_json(geo.position_to_json(pos)) == pos

    def test_unknown_vertex_rejected(self):
        with pytest.raises(ValueError):
            instance_from_json({"ruleset": "geography", "vertices": ["a"],
                                "edges": [["a", "zz"]], "start": "a"})


class TestNodeKayles:
    def test_triangle_adjacency(self):
        nk = NodeKaylesRuleset(["x", "y", "z"], [(0, 1), (1, 2), (0, 2)])
        pos = nk.apply(0b000, 0, L)
        assert pos == 0b001
        assert nk.apply(pos, 1, L) is None

    def test_bigraph_color_rule(self):
        nk = NodeKaylesRuleset(["x", "y"], [], variant=BIGRAPH,
                               colors={0: BLUE, 1: RED})
        assert nk.apply(0, 0, R) is None  # Red on a Blue vertex
        assert nk.apply(0, 1, R) == 0b10
        assert not nk.impartial

    def test_snort_color_rule(self):
        nk = NodeKaylesRuleset(["x", "y"], [(0, 1)], variant=SNORT)
        pos = nk.apply(SnortPosition(0, 0), 0, R)  # Red takes x
        assert pos == SnortPosition(0, 0b01)
        assert nk.apply(pos, 1, L) is None  # Blue adjacent to a Red token
        assert nk.apply(pos, 1, R) == SnortPosition(0, 0b11)  # own color is fine

    def test_json_round_trip(self):
        nk = NodeKaylesRuleset(["x", "y"], [(0, 1)], variant=BIGRAPH,
                               colors={0: BLUE, 1: RED})
        again = instance_from_json(nk.to_json())
        assert again.to_json() == nk.to_json()


class TestAvoidTrue:
    def test_single_clause_blocks_all(self):
        at = AvoidTrueRuleset(["x1", "x2"], [0b11])
        assert at.apply(0b11, 0, L) is None
        assert list(at.moves(0b11, L)) == []

    def test_second_clause_keeps_alive(self):
        at = AvoidTrueRuleset(["x1", "x2", "x3"], [0b011, 0b100])
        assert at.apply(0b111, 0, L) == 0b110

    def test_outside_clause_keeps_active(self):
        at = AvoidTrueRuleset([f"x{i}" for i in range(1, 6)], [0b00111])
        assert at.apply(0b11111, 3, L) == 0b10111
        assert at.apply(0b11111, 0, L) is None

    def test_json(self):
        at = instance_from_json({"ruleset": "avoid_true",
                                 "variables": ["x1", "x2"],
                                 "clauses": [["x1", "x2"]]})
        assert at.clauses == (0b11,)


class TestQbf:
    def small(self, variant, family=FAMILY_QSAT, merged=False,
              true_vars=("t0",), false_vars=("f0",)):
        # clause (t0 v ~f0)
        return QbfRuleset(list(true_vars), list(false_vars),
                          [((0, False), (len(true_vars), True))],
                          family=family, variant=variant, merged_phantom=merged)

    def test_qsat_free_order(self):
        inst = self.small(PHANTOM, true_vars=("t0", "t1"), false_vars=("f0", "f1"))
        pos = inst.initial_position()
        moves = list(inst.moves(pos, L))
        assert {m.var for m in moves} == {0, 1}
        assert all(isinstance(m, Assign) for m in moves)

    def test_qbf_prescribed_order(self):
        inst = self.small(PHANTOM, family=FAMILY_QBF,
                          true_vars=("t0", "t1"), false_vars=("f0", "f1"))
        pos = inst.initial_position()
        assert {m.var for m in inst.moves(pos, L)} == {0}
        assert list(inst.moves(pos, R)) == []

    def test_phantom_standalone(self):
        inst = self.small(PHANTOM)
        pos = inst.initial_position()
        pos = inst.apply(pos, Assign(0, True), L)   # t0 := true, formula true
        pos = inst.apply(pos, Assign(1, True), R)
        assert inst.condition_holds(pos, L)
        assert list(inst.moves(pos, L)) == [Phantom()]
        done = inst.apply(pos, Phantom(), L)
        assert list(inst.moves(done, R)) == []

    def test_phantom_denied_when_losing(self):
        inst = self.small(PHANTOM)
        pos = inst.initial_position()
        pos = inst.apply(pos, Assign(0, False), L)  # t0 := false
        pos = inst.apply(pos, Assign(1, True), R)   # ~f0 false too: formula false
        assert list(inst.moves(pos, L)) == []

    def test_merged_phantom_final_gate(self):
        inst = self.small(PHANTOM, merged=True)
        pos = inst.apply(inst.initial_position(), Assign(0, False), L)
        # False's final assignment must reach False's own win condition
        assert inst.apply(pos, Assign(1, False), R) is None  # ~f0 true: satisfied
        assert inst.apply(pos, Assign(1, True), R) is not None

    def test_clause_selector(self):
        inst = self.small(CLAUSE_SELECTOR)
        pos = inst.initial_position()
        pos = inst.apply(pos, Assign(0, False), L)
        pos = inst.apply(pos, Assign(1, True), R)  # clause all-false
        assert list(inst.moves(pos, L)) == []
        assert list(inst.moves(pos, R)) == [SelectClause(0)]
        done = inst.apply(pos, SelectClause(0), R)
        assert list(inst.moves(done, L)) == []

    def test_clause_selector_unavailable_when_satisfied(self):
        inst = self.small(CLAUSE_SELECTOR)
        pos = inst.initial_position()
        pos = inst.apply(pos, Assign(0, True), L)
        pos = inst.apply(pos, Assign(1, True), R)
        assert list(inst.moves(pos, R)) == []

    def test_literal_selector(self):
        inst = self.small(LITERAL_SELECTOR)
        pos = inst.initial_position()
        pos = inst.apply(pos, Assign(0, True), L)
        pos = inst.apply(pos, Assign(1, False), R)
        assert list(inst.moves(pos, R)) == [SelectClause(0)]
        pos = inst.apply(pos, SelectClause(0), R)
        replies = list(inst.moves(pos, L))
        assert SelectLiteral(0, False) in replies  # t0 is true
        assert SelectLiteral(1, True) in replies   # ~f0 is true
        done = inst.apply(pos, SelectLiteral(0, False), L)
        assert list(inst.moves(done, R)) == []

    def test_literal_selector_no_true_literal(self):
        inst = self.small(LITERAL_SELECTOR)
        pos = inst.initial_position()
        pos = inst.apply(pos, Assign(0, False), L)
        pos = inst.apply(pos, Assign(1, True), R)
        pos = inst.apply(pos, SelectClause(0), R)
        assert list(inst.moves(pos, L)) == []

    def test_tko_blocks_the_loser(self):
        inst = self.small(TKO, true_vars=("t0", "t1"), false_vars=("f0",))
        pos = inst.apply(inst.initial_position(), Assign(0, True), L)
        assert inst.condition_holds(pos, L)  # every clause satisfied already
        assert list(inst.moves(pos, R)) == []           # the non-winner is stuck
        assert list(inst.moves(pos, L)) != []           # the winner may still move

    def test_ko_declare(self):
        inst = self.small(KO)
        pos = inst.initial_position()
        declared = inst.apply(pos, Assign(0, True, declare=True), L)
        assert declared is not None and declared.ended
        assert list(inst.moves(declared, R)) == []
        assert inst.apply(pos, Assign(0, False, declare=True), L) is None

    def test_haymaker_blow(self):
        inst = self.small(HAYMAKER)
        pos = inst.apply(inst.initial_position(), Assign(0, True), L)
        pos = inst.apply(pos, Assign(1, True), R)
        assert Blow() in list(inst.moves(pos, L))
        done = inst.apply(pos, Blow(), L)
        assert done.ended and list(inst.moves(done, R)) == []

    def test_haymaker_blow_needs_condition(self):
        inst = self.small(HAYMAKER)
        pos = inst.apply(inst.initial_position(), Assign(0, False), L)
        assert inst.apply(pos, Blow(), L) is None

    def test_partizan(self):
        assert not self.small(PHANTOM).impartial

    def test_json_round_trip(self):
        inst = self.small(KO, family=FAMILY_QBF)
        again = instance_from_json(inst.to_json())
        assert again.to_json() == inst.to_json()
        pos = inst.apply(inst.initial_position(), Assign(0, True), L)
        assert inst.position_from_json(inst.position_to_json(pos)) == pos


def _move_universe(inst):
    """Every candidate move label for the exhaustive feasibility scan."""
    if isinstance(inst, NimRuleset):
        top = max(inst.piles) + 1
        return [NimMove(p, t) for p in range(len(inst.piles))
                for t in range(1, top + 1)]
    if isinstance(inst, (GeographyRuleset, NodeKaylesRuleset)):
        return list(range(len(inst.names)))
    if isinstance(inst, AvoidTrueRuleset):
        return list(range(len(inst.names)))
    if isinstance(inst, QbfRuleset):
        universe = [Assign(v, val, dec) for v in range(len(inst.names))
                    for val in (False, True) for dec in (False, True)]
        universe += [Phantom(), Blow()]
        universe += [SelectClause(c) for c in range(len(inst.clauses))]
        universe += [SelectLiteral(v, neg) for c in inst.clauses for v, neg in c]
        return universe
    raise AssertionError(inst)


@pytest.mark.parametrize("maker", [
    lambda: NimRuleset((2, 2)),
    lambda: GeographyRuleset(["a", "b", "c"], [(0, 1), (1, 2), (0, 2)], 0, False),
    lambda: GeographyRuleset(["a", "b", "c"], [(0, 1), (1, 2)], 0, True),
    lambda: NodeKaylesRuleset(["a", "b", "c"], [(0, 1), (1, 2)]),
    lambda: NodeKaylesRuleset(["a", "b"], [(0, 1)], variant=BIGRAPH,
                              colors={0: BLUE, 1: RED}),
    lambda: NodeKaylesRuleset(["a", "b", "c"], [(0, 1)], variant=SNORT),
    lambda: AvoidTrueRuleset(["x", "y", "z"], [0b011, 0b100]),
    lambda: QbfRuleset(["t0"], ["f0"], [((0, False), (1, True))],
                       family=FAMILY_QSAT, variant=PHANTOM),
    lambda: QbfRuleset(["t0", "t1"], ["f0"], [((0, False), (2, True))],
                       family=FAMILY_QBF, variant=KO),
    lambda: QbfRuleset(["t0"], ["f0"], [((0, True),)],
                       family=FAMILY_QSAT, variant=LITERAL_SELECTOR),
])
def test_moves_match_exhaustive_scan(maker):
    """apply returns None exactly on infeasible pairs; moves() yields exactly
    the feasible labels."""
    inst = maker()
    universe = _move_universe(inst)
    rng = random.Random(11)
    frontier = [inst.initial_position()]
    seen = set()
    while frontier:
        pos = frontier.pop()
        if pos in seen or len(seen) > 4000:
            continue
        seen.add(pos)
        for player in (L, R):
            enumerated = list(inst.moves(pos, player))
            assert len({inst.encode_move(m) for m in enumerated}) == len(enumerated)
            feasible = [m for m in universe if inst.apply(pos, m, player) is not None]
            assert {inst.encode_move(m) for m in enumerated} == \
                {inst.encode_move(m) for m in feasible}
            if inst.impartial:
                other = list(inst.moves(pos, player.opponent))
                assert [inst.encode_move(m) for m in other] == \
                    [inst.encode_move(m) for m in enumerated]
            for move in enumerated:
                frontier.append(inst.apply(pos, move, player))


def test_unknown_ruleset_rejected():
    with pytest.raises(InvalidInstanceError):
        instance_from_json({"ruleset": "chess"})
