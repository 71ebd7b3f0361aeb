"""Named verification suites: figure regressions, strategy soundness,
polyspace equivalence, reduction equivalences, and property sweeps.

Each suite returns a SuiteResult with per-case rows, so the CLI can render
the same data as a JSON report, a CSV table, and summary figures, and the
acceptance tests can assert on `passed` directly.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

from .core import (
    Flavor,
    GameConfig,
    OutcomeClass,
    Player,
    QuantumMove,
    apply_move,
    bft,
    canonical_key,
    filter_positions,
    initial_state,
    legal_classical_moves,
    legal_moves,
    legal_quantum_moves,
)
from .geography_strategy import (
    IllegalVillainMoveError,
    InvariantBrokenError,
    classical_ug_outcome,
    hero_first_move,
    hero_respond,
    new_session,
)
from .matching import brute_force_max_matchings, vertex_in_all_max_matchings
from .reductions import (
    avoid_true_to_nim,
    bigraph_to_snort,
    directed_to_undirected_polywide,
    geography_edge_subdivision,
    qbf_to_node_kayles,
    schaefer_lift,
    verify_reduction,
)
from .rulesets import (
    AvoidTrueRuleset,
    GeographyRuleset,
    NimMove,
    NimRuleset,
    NodeKaylesRuleset,
    QbfRuleset,
)
from .rulesets.node_kayles import BIGRAPH, BLUE, RED
from .rulesets.qbf import FAMILY_QBF, FAMILY_QSAT, CLAUSE_SELECTOR, PHANTOM, Assign, Phantom
from .solver import (
    Quantumness,
    SolveLimits,
    classical_solve,
    classify_quantumness,
    nim_xor_outcome,
    solve,
    solve_polyspace,
)

D2 = GameConfig(flavor=Flavor.D, width=2)


@dataclass
class SuiteResult:
    name: str
    seed: int
    cases: int = 0
    failures: list = field(default_factory=list)
    rows: list = field(default_factory=list)  # (case label, status, detail)
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures

    def record(self, label: str, ok: bool, detail: str = ""):
        self.cases += 1
        self.rows.append((label, "pass" if ok else "FAIL", detail))
        if not ok:
            self.failures.append((label, detail))

    def to_json(self) -> dict:
        return {
            "suite": self.name,
            "seed": self.seed,
            "cases": self.cases,
            "failures": [list(f) for f in self.failures],
            "passed": self.passed,
            "elapsed_seconds": round(self.elapsed, 3),
        }


def _timed(fn: Callable[[SuiteResult], None], name: str, seed: int) -> SuiteResult:
    result = SuiteResult(name=name, seed=seed)
    start = time.monotonic()
    fn(result)
    result.elapsed = time.monotonic() - start
    return result


# -- figure regressions --------------------------------------------------------

def suite_figures(seed: int = 0) -> SuiteResult:
    """The worked Nim examples: (2,2), (1,2), (3,2), (4,2)."""

    def run(res: SuiteResult):
        nim22 = NimRuleset((2, 2))
        r = solve(initial_state(nim22, D2))
        res.record("nim(2,2) quantum N", r.outcome is OutcomeClass.N, r.outcome.value)
        want = QuantumMove.of(nim22, [NimMove(0, 1), NimMove(1, 1)])
        res.record("nim(2,2) best move <(-1,0)|(0,-1)>", r.best_move == want,
                   repr(r.best_move))
        reply = apply_move(initial_state(nim22, D2), want)
        res.record("nim<(1,2)|(2,1)> quantum P",
                   solve(reply).outcome is OutcomeClass.P, "")
        res.record("nim(2,2) classical P",
                   classical_solve(nim22, (2, 2)) is OutcomeClass.P, "")

        nim12 = NimRuleset((1, 2))
        res.record("nim(1,2) classical N",
                   classical_solve(nim12, (1, 2)) is OutcomeClass.N, "")
        res.record("nim(1,2) quantum N",
                   solve(initial_state(nim12, D2)).outcome is OutcomeClass.N, "")
        res.record("classify nim(1,2) = None",
                   classify_quantumness(nim12, (1, 2), D2) is Quantumness.NONE, "")

        nim32 = NimRuleset((3, 2))
        res.record("nim(3,2) quantum P",
                   solve(initial_state(nim32, D2)).outcome is OutcomeClass.P, "")
        nim42 = NimRuleset((4, 2))
        r42 = solve(initial_state(nim42, D2))
        res.record("nim(4,2) quantum N", r42.outcome is OutcomeClass.N, "")
        take2 = apply_move(initial_state(nim42, D2), NimMove(0, 2))
        res.record("nim(4,2) move (-2,0) not winning",
                   solve(take2).outcome is OutcomeClass.N, "leads to (2,2)")
        take1 = apply_move(initial_state(nim42, D2), NimMove(0, 1))
        res.record("nim(4,2) move (-1,0) winning",
                   solve(take1).outcome is OutcomeClass.P, "leads to (3,2)")
        res.record("classify nim(4,2) = Weak",
                   classify_quantumness(nim42, (4, 2), D2) is Quantumness.WEAK, "")
        res.record("classify nim(2,2) = Strong",
                   classify_quantumness(nim22, (2, 2), D2) is Quantumness.STRONG, "")

    return _timed(run, "figures", seed)


# -- geography: exhaustive outcomes plus the never-losing hero ------------------

def _random_connected_graph(rng: random.Random, max_n: int = 6):
    while True:
        n = rng.randint(2, max_n)
        p = rng.uniform(0.3, 0.9)
        edges = [(u, v) for u in range(n) for v in range(u + 1, n)
                 if rng.random() < p]
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
        if len(seen) == n:
            return n, edges


def hero_never_loses(ruleset: GeographyRuleset) -> Optional[str]:
    """DFS over every villain line (all classical and width-2 quantum moves);
    the hero's replies are deterministic.  None, or a failure description."""
    root = new_session(ruleset, D2)
    if root.hero is Player.LEFT:
        hero_first_move(root)
    stack = [root]
    while stack:
        sess = stack.pop()
        state = sess.state
        moves = list(legal_classical_moves(state)) + list(legal_quantum_moves(state))
        if not moves:
            if state.to_move is sess.hero:
                return "hero stuck with no legal move"
            continue  # villain is stuck: hero won this line
        for mv in moves:
            child = sess.clone()
            try:
                hero_respond(child, mv)
            except (InvariantBrokenError, IllegalVillainMoveError, Exception) as exc:
                return f"{type(exc).__name__}: {exc}"
            stack.append(child)
    return None


def suite_geography(count: int = 200, seed: int = 7) -> SuiteResult:
    """Quantum outcome equals the matching criterion, and the hero survives an
    exhaustive adversary, over random connected graphs with every start."""

    def run(res: SuiteResult):
        rng = random.Random(seed)
        for idx in range(count):
            n, edges = _random_connected_graph(rng)
            names = [chr(97 + i) for i in range(n)]
            for start in range(n):
                ruleset = GeographyRuleset(names, edges, start, directed=False)
                label = f"G{idx}(n={n},start={names[start]})"
                oc_matching = classical_ug_outcome(ruleset, start)
                oc_quantum = solve(initial_state(ruleset, D2)).outcome
                res.record(f"{label} outcome", oc_matching is oc_quantum,
                           f"matching={oc_matching.value} quantum={oc_quantum.value}")
                err = hero_never_loses(ruleset)
                res.record(f"{label} hero", err is None, err or "")

    return _timed(run, "geography", seed)


# -- polyspace equivalence -------------------------------------------------------

FLAVORS = (Flavor.D, Flavor.C, Flavor.C_PRIME, Flavor.B, Flavor.A)


def suite_polyspace(count: int = 100, seed: int = 11) -> SuiteResult:
    """solve_polyspace agrees with solve on random Node Kayles and Geography
    classical starts across all five flavors."""

    def run(res: SuiteResult):
        rng = random.Random(seed)
        for idx in range(count):
            flavor = FLAVORS[idx % len(FLAVORS)]
            cfg = GameConfig(flavor=flavor, width=2)
            if idx % 2 == 0:
                n = rng.randint(2, 6)
                names = [chr(97 + i) for i in range(n)]
                edges = [(u, v) for u in range(n) for v in range(u + 1, n)
                         if rng.random() < 0.5]
                inst = NodeKaylesRuleset(names, edges)
            else:
                n = rng.randint(2, 5)
                names = [chr(97 + i) for i in range(n)]
                edges = [(u, v) for u in range(n) for v in range(u + 1, n)
                         if rng.random() < 0.6]
                inst = GeographyRuleset(names, edges, 0, directed=False)
            full = solve(initial_state(inst, cfg)).outcome
            small = solve_polyspace(inst, inst.initial_position(), [], cfg, n)
            res.record(f"{inst.kind}#{idx} flavor {flavor.display()}",
                       full is small, f"solve={full.value} polyspace={small.value}")

    return _timed(run, "polyspace", seed)


# -- reductions -------------------------------------------------------------------

def _random_positive_cnf(rng: random.Random, max_vars: int = 4, max_clauses: int = 3):
    nv = rng.randint(1, max_vars)
    names = [f"x{i + 1}" for i in range(nv)]
    clauses = []
    for _ in range(rng.randint(1, max_clauses)):
        size = rng.randint(1, nv)
        mask = 0
        for v in rng.sample(range(nv), size):
            mask |= 1 << v
        clauses.append(mask)
    return AvoidTrueRuleset(names, clauses)


def _random_digraph(rng: random.Random, max_n: int, max_arcs: int) -> GeographyRuleset:
    n = rng.randint(1, max_n)
    names = [chr(97 + i) for i in range(n)]
    arcs = [(u, v) for u in range(n) for v in range(n) if u != v]
    rng.shuffle(arcs)
    arcs = sorted(arcs[:rng.randint(0, min(max_arcs, len(arcs)))])
    return GeographyRuleset(names, arcs, 0, directed=True)


def _all_small_qbf_formulas(nvars: int):
    literals = [(v, neg) for v in range(nvars) for neg in (False, True)]
    clauses = []
    for r in (1, 2):
        clauses.extend(itertools.combinations(literals, r))
    for r in (1, 2):
        yield from (list(c) for c in itertools.combinations(clauses, r))


def _random_schaefer_source(rng: random.Random, per_player: int) -> QbfRuleset:
    """Phantom QSAT sources for the lift; the 2-vars-per-player targets are
    16-variable quantum games, so their clauses each touch a True variable to
    keep the exhaustive solves at desk scale."""
    nvar = 2 * per_player
    clauses = []
    for _ in range(rng.randint(1, 2)):
        size = rng.randint(1, 2)
        if per_player >= 2:
            vars_ = [rng.randrange(per_player)]  # a True-player variable
            if size > 1:
                others = [v for v in range(nvar) if v != vars_[0]]
                vars_.append(rng.choice(others))
        else:
            vars_ = rng.sample(range(nvar), min(size, nvar))
        clauses.append(tuple((v, rng.random() < 0.5) for v in vars_))
    return QbfRuleset([f"t{i}" for i in range(per_player)],
                      [f"f{i}" for i in range(per_player)],
                      clauses, family=FAMILY_QSAT, variant=PHANTOM,
                      merged_phantom=True)


def suite_reductions(seed: int = 13, limits: Optional[SolveLimits] = None) -> SuiteResult:
    def run(res: SuiteResult):
        rng = random.Random(seed)
        lim = limits or SolveLimits(max_seconds=300)

        for i in range(50):
            src = _random_positive_cnf(rng)
            rep = verify_reduction(avoid_true_to_nim(src), D2, lim)
            res.record(f"avoid_true_to_nim#{i}", rep.agree,
                       f"{rep.source_outcome} vs {rep.target_outcome}")

        for i in range(50):
            src = _random_digraph(rng, 4, 4)
            rep = verify_reduction(geography_edge_subdivision(src), D2, lim)
            res.record(f"edge_subdivision#{i}", rep.agree,
                       f"{rep.source_outcome} vs {rep.target_outcome}")

        for i in range(30):
            src = _random_digraph(rng, 3, 3)
            rep = verify_reduction(directed_to_undirected_polywide(src), D2, lim)
            res.record(f"polywide#{i}", rep.agree,
                       f"{rep.source_outcome} vs {rep.target_outcome}")

        for i in range(20):
            src = _random_schaefer_source(rng, 1 if i < 15 else 2)
            rep = verify_reduction(schaefer_lift(src), D2, lim)
            res.record(f"schaefer_lift#{i}", rep.agree,
                       f"{rep.source_outcome} vs {rep.target_outcome}")

        count = 0
        for formula in _all_small_qbf_formulas(1):
            src = QbfRuleset(["x1"], [], formula,
                             family=FAMILY_QBF, variant=CLAUSE_SELECTOR)
            rep = verify_reduction(qbf_to_node_kayles(src), D2, lim)
            res.record(f"qbf_to_nk(1var)#{count}", rep.agree,
                       f"{rep.source_outcome} vs {rep.target_outcome}")
            count += 1
        for formula in _all_small_qbf_formulas(2):
            src = QbfRuleset(["x1"], ["x2"], formula,
                             family=FAMILY_QBF, variant=CLAUSE_SELECTOR)
            rep = verify_reduction(qbf_to_node_kayles(src), D2, lim)
            res.record(f"qbf_to_nk(2var)#{count}", rep.agree,
                       f"{rep.source_outcome} vs {rep.target_outcome}")
            count += 1

        for i in range(30):
            n = rng.randint(1, 5)
            names = [chr(97 + j) for j in range(n)]
            edges = [(u, v) for u in range(n) for v in range(u + 1, n)
                     if rng.random() < 0.5]
            colors = {j: (BLUE if rng.random() < 0.5 else RED) for j in range(n)}
            src = NodeKaylesRuleset(names, edges, variant=BIGRAPH, colors=colors)
            flavor = Flavor.D if i % 2 == 0 else Flavor.C_PRIME
            rep = verify_reduction(bigraph_to_snort(src),
                                   GameConfig(flavor=flavor, width=2), lim)
            res.record(f"bigraph_to_snort#{i} ({flavor.display()})", rep.agree,
                       f"{rep.source_outcome} vs {rep.target_outcome}")

    return _timed(run, "reductions", seed)


# -- Phantom-Move QSAT strategy observations -------------------------------------

def false_all_quantum_wins(state, inst: QbfRuleset) -> bool:
    """False plays <v:=true | v:=false> on every own free variable (any choice
    must win), then the phantom; True's counter-moves range over everything."""
    if state.to_move is Player.RIGHT:
        own_free = set()
        for r in state.board.realizations:
            free = inst.owner_mask[Player.RIGHT] & ~r.assigned
            v = 0
            while free:
                if free & 1:
                    own_free.add(v)
                free >>= 1
                v += 1
        if own_free:
            legal = {m for m in legal_quantum_moves(state)}
            picks = [QuantumMove.of(inst, [Assign(v, False), Assign(v, True)])
                     for v in sorted(own_free)]
            if any(p not in legal for p in picks):
                return False
            return all(false_all_quantum_wins(apply_move(state, p), inst)
                       for p in picks)
        phantom_legal = any(isinstance(m, Phantom)
                            for m in legal_classical_moves(state))
        if not phantom_legal:
            return False
        return false_all_quantum_wins(apply_move(state, Phantom()), inst)
    counter = list(legal_moves(state))
    if not counter:
        return True  # True is stuck
    return all(false_all_quantum_wins(apply_move(state, m), inst) for m in counter)


def true_oblivious_wins(state, inst: QbfRuleset, values: int) -> bool:
    """True classically assigns their lowest free variable per the fixed
    assignment `values`, whatever False does."""
    if state.to_move is Player.LEFT:
        chosen = None
        for v in range(inst.n_true):
            if any(((inst.owner_mask[Player.LEFT] & ~r.assigned) >> v) & 1
                   for r in state.board.realizations):
                chosen = v
                break
        if chosen is None:
            return False  # out of variables on True's turn: the strategy failed
        move = Assign(chosen, bool((values >> chosen) & 1))
        if all(inst.apply(r, move, Player.LEFT) is None
               for r in state.board.realizations):
            return False
        return true_oblivious_wins(apply_move(state, move), inst, values)
    counter = list(legal_moves(state))
    if not counter:
        return True  # False is stuck
    return all(true_oblivious_wins(apply_move(state, m), inst, values)
               for m in counter)


def _all_phantom_qsat_instances():
    """Every Case-Odd Phantom-Move QSAT instance with <= 2 True variables over
    clauses of width <= 2, at most 2 clauses (desk-scale bound)."""
    for n_true, n_false in ((1, 0), (2, 1)):
        nvar = n_true + n_false
        for formula in _all_small_qbf_formulas(nvar):
            yield QbfRuleset([f"t{i}" for i in range(n_true)],
                             [f"f{i}" for i in range(n_false)],
                             formula, family=FAMILY_QSAT, variant=PHANTOM)


def suite_qbf_observations(seed: int = 17) -> SuiteResult:
    """Where False wins, the all-quantum strategy wins against everything;
    where True wins, some oblivious classical assignment does."""

    def run(res: SuiteResult):
        for idx, inst in enumerate(_all_phantom_qsat_instances()):
            state = initial_state(inst, D2, to_move=Player.LEFT)
            outcome = solve(state, SolveLimits(max_seconds=120)).outcome
            true_wins = outcome in (OutcomeClass.N, OutcomeClass.L)
            if true_wins:
                ok = any(true_oblivious_wins(state, inst, values)
                         for values in range(1 << inst.n_true))
                res.record(f"qsat#{idx} True oblivious", ok, "")
            else:
                ok = false_all_quantum_wins(state, inst)
                res.record(f"qsat#{idx} False all-quantum", ok, "")

    return _timed(run, "qbf", seed)


# -- DAG geography ----------------------------------------------------------------

def suite_dag(count: int = 50, seed: int = 19) -> SuiteResult:
    def run(res: SuiteResult):
        rng = random.Random(seed)
        for idx in range(count):
            n = rng.randint(2, 7)
            names = [chr(97 + i) for i in range(n)]
            arcs = [(u, v) for u in range(n) for v in range(u + 1, n)
                    if rng.random() < 0.4]
            inst = GeographyRuleset(names, arcs, 0, directed=True)
            oc_c = classical_solve(inst, inst.initial_position())
            oc_q = solve(initial_state(inst, D2)).outcome
            res.record(f"dag#{idx}(n={n})", oc_c is oc_q,
                       f"classical={oc_c.value} quantum={oc_q.value}")

    return _timed(run, "dag", seed)


# -- core property sweep ------------------------------------------------------------

def _random_nim_state(rng: random.Random):
    piles = tuple(rng.randint(0, 3) for _ in range(rng.randint(1, 3)))
    inst = NimRuleset(piles)
    cfg = GameConfig(flavor=rng.choice(FLAVORS), width=rng.choice((2, 3)))
    state = initial_state(inst, cfg)
    for _ in range(rng.randint(0, 3)):
        moves = list(legal_moves(state))
        if not moves:
            break
        state = apply_move(state, rng.choice(moves))
    return inst, state


def suite_properties(cases: int = 1000, seed: int = 23) -> SuiteResult:
    def run(res: SuiteResult):
        rng = random.Random(seed)

        filter_ok = containment_ok = width_ok = relabel_ok = replay_ok = impartial_ok = 0
        for i in range(cases):
            inst, state = _random_nim_state(rng)
            # filter idempotence
            sp = state.board
            again = filter_positions(inst, list(sp.realizations) + [None])
            if again == sp:
                filter_ok += 1
            # flavor containment at this board
            sets = {}
            for fl in (Flavor.A, Flavor.C, Flavor.C_PRIME, Flavor.D):
                probe = GameConfig(flavor=fl, width=state.config.width)
                st = initial_state(inst, probe, sp, state.to_move)
                sets[fl] = {inst.encode_move(m) for m in legal_classical_moves(st)}
            if sets[Flavor.A] <= sets[Flavor.C] <= sets[Flavor.C_PRIME] <= sets[Flavor.D]:
                containment_ok += 1
            # realization width bound after a quantum move
            st = initial_state(inst, GameConfig(flavor=Flavor.D,
                                                width=state.config.width),
                               sp, state.to_move)
            qm = next(iter(legal_quantum_moves(st)), None)
            if qm is None or apply_move(st, qm).board.width <= sp.width * qm.width:
                width_ok += 1
            # relabeling symmetry: permute pile indices consistently
            perm = list(range(len(inst.piles)))
            rng.shuffle(perm)
            perm_inst = NimRuleset(tuple(inst.piles[p] for p in perm))
            mapped = filter_positions(
                perm_inst, [tuple(r[p] for p in perm) for r in sp.realizations])
            st_p = initial_state(perm_inst, state.config, mapped, state.to_move)
            direct = {tuple(r[p] for p in perm)
                      for m in legal_classical_moves(state)
                      for r in apply_move(state, m).board.realizations}
            relabeled = {r for m in legal_classical_moves(st_p)
                         for r in apply_move(st_p, m).board.realizations}
            if direct == relabeled:
                relabel_ok += 1
            # replay determinism over a random legal sequence
            st0 = initial_state(inst, state.config)
            moves = []
            cur = st0
            for _ in range(3):
                opts = list(legal_moves(cur))
                if not opts:
                    break
                mv = rng.choice(opts)
                moves.append(mv)
                cur = apply_move(cur, mv)
            replay = bft(st0.board, moves, st0.config, inst, st0.to_move)
            if canonical_key(replay) == canonical_key(cur):
                replay_ok += 1
            # impartial outcomes stay in {N, P}
            oc = solve(initial_state(inst, D2)).outcome
            if oc in (OutcomeClass.N, OutcomeClass.P):
                impartial_ok += 1

        res.record("filter idempotence", filter_ok == cases, f"{filter_ok}/{cases}")
        res.record("flavor containment A<=C<=C'<=D",
                   containment_ok == cases, f"{containment_ok}/{cases}")
        res.record("width bound s*w^T", width_ok == cases, f"{width_ok}/{cases}")
        res.record("relabeling symmetry", relabel_ok == cases, f"{relabel_ok}/{cases}")
        res.record("replay determinism", replay_ok == cases, f"{replay_ok}/{cases}")
        res.record("impartial outcomes in {N,P}",
                   impartial_ok == cases, f"{impartial_ok}/{cases}")

    return _timed(run, "properties", seed)


# -- oracle suite -----------------------------------------------------------------

def suite_oracles(samples: int = 500, seed: int = 29) -> SuiteResult:
    def run(res: SuiteResult):
        bad = []
        total = 0
        for piles in itertools.product(range(5), repeat=3):
            total += 1
            inst = NimRuleset(piles)
            if classical_solve(inst, piles) is not nim_xor_outcome(piles):
                bad.append(piles)
        res.record("nim xor oracle (all <=3 piles of <=4)", not bad,
                   f"{total - len(bad)}/{total}")

        rng = random.Random(seed)
        bad_count = 0
        for _ in range(samples):
            n = rng.randint(1, 7)
            adj = [0] * n
            for u in range(n):
                for v in range(u + 1, n):
                    if rng.random() < 0.5:
                        adj[u] |= 1 << v
                        adj[v] |= 1 << u
            adj = tuple(adj)
            all_max = brute_force_max_matchings(n, adj)
            for v in range(n):
                expected = all(any(v in e for e in m) for m in all_max)
                if vertex_in_all_max_matchings(n, adj, v) != expected:
                    bad_count += 1
        res.record("vertex_in_all_max_matchings vs enumeration",
                   bad_count == 0, f"{samples} graphs, {bad_count} bad")

    return _timed(run, "oracles", seed)


SUITES: dict[str, Callable[..., SuiteResult]] = {
    "figures": suite_figures,
    "geography": suite_geography,
    "polyspace": suite_polyspace,
    "reductions": suite_reductions,
    "qbf": suite_qbf_observations,
    "dag": suite_dag,
    "properties": suite_properties,
    "oracles": suite_oracles,
}


def run_suite(name: str, seed: Optional[int] = None,
              count: Optional[int] = None) -> SuiteResult:
    fn = SUITES[name]
    kwargs = {}
    if seed is not None:
        kwargs["seed"] = seed
    if count is not None:
        if name in ("geography", "dag"):
            kwargs["count"] = count
        elif name == "polyspace":
            kwargs["count"] = count
        elif name == "properties":
            kwargs["cases"] = count
        elif name == "oracles":
            kwargs["samples"] = count
    return fn(**kwargs)
