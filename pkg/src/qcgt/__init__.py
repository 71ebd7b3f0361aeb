"""qcgt: engine, solvers, and play service for quantum-lifted combinatorial
games — superpositions of classical positions driven by quantum moves under
the five classical-move flavors A, B, C, C', and D."""

from .core import (
    Flavor,
    GameConfig,
    GameState,
    IllegalMoveError,
    MoveRecord,
    OutcomeClass,
    Player,
    QuantumMove,
    Superposition,
    apply_classical,
    apply_move,
    apply_quantum,
    bft,
    canonical_key,
    filter_positions,
    initial_state,
    is_terminal,
    legal_classical_moves,
    legal_moves,
    legal_quantum_moves,
)
from .solver import (
    OutcomeClass,
    Quantumness,
    ResourceExceededError,
    SolveLimits,
    SolveResult,
    classical_solve,
    classify_quantumness,
    nim_xor_outcome,
    solve,
    solve_polyspace,
)

__version__ = "0.1.0"
