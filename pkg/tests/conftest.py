import random

import pytest

from qcgt.core import (
    Flavor,
    GameConfig,
    apply_move,
    initial_state,
    legal_classical_moves,
    legal_quantum_moves,
)
from qcgt.rulesets import NimRuleset


D2 = GameConfig(flavor=Flavor.D, width=2)


@pytest.fixture
def d2():
    return D2


def brute_mover_wins(state) -> bool:
    """Independent naive game-tree oracle: public legality, no memo, no cutoffs."""
    for move in legal_classical_moves(state):
        if not brute_mover_wins(apply_move(state, move)):
            return True
    for move in legal_quantum_moves(state):
        if not brute_mover_wins(apply_move(state, move)):
            return True
    return False


def random_nim_state(rng: random.Random, max_piles=3, max_size=3, plies=3):
    piles = tuple(rng.randint(0, max_size) for _ in range(rng.randint(1, max_piles)))
    inst = NimRuleset(piles)
    flavor = rng.choice([Flavor.A, Flavor.B, Flavor.C, Flavor.C_PRIME, Flavor.D])
    cfg = GameConfig(flavor=flavor, width=rng.choice((2, 3)))
    state = initial_state(inst, cfg)
    for _ in range(rng.randint(0, plies)):
        moves = list(legal_classical_moves(state)) + list(legal_quantum_moves(state))
        if not moves:
            break
        state = apply_move(state, rng.choice(moves))
    return inst, state
