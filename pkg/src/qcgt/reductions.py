"""Constructive game transformations, each paired with a desk-scale
equivalence check (verify_reduction).

Every builder returns a ReductionOutput holding the target instance, the
target state, a provenance map from source entities to target entities, and
the source it was built from, so the equivalence harness is self-contained.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Optional, Sequence, Union

from .core import GameConfig, OutcomeClass, Superposition, initial_state
from .rulesets.avoid_true import AvoidTrueRuleset
from .rulesets.geography import GeographyPosition, GeographyRuleset, adjacency_from_edges
from .rulesets.nim import NimRuleset
from .rulesets.node_kayles import BIGRAPH, PLAIN, SNORT, NodeKaylesRuleset
from .rulesets.qbf import FAMILY_QBF, FAMILY_QSAT, PHANTOM, QbfRuleset, TRUE_PLAYER
from .solver import SolveLimits, classical_solve, solve


class UnsupportedShapeError(ValueError):
    """The source instance's shape is outside the construction's hypothesis."""


@dataclass
class ReductionOutput:
    kind: str
    instance: Any
    state: Union[Superposition, Any]
    provenance: dict
    source_instance: Any
    source_state: Any


# -- Avoid True -> Boolean Nim ------------------------------------------------

def avoid_true_to_nim(src: AvoidTrueRuleset,
                      state: Optional[Union[Superposition, int]] = None) -> ReductionOutput:
    """One Boolean-Nim realization per active clause per source realization:
    pile i is 0 when variable i is in the clause or not free, else 1."""
    if state is None:
        state = src.initial_position()
    frees = state.realizations if isinstance(state, Superposition) else (state,)
    n = len(src.names)
    target = NimRuleset(tuple([1] * n))
    realizations = []
    provenance: dict[str, list[int]] = {}
    for r_idx, free in enumerate(frees):
        for c_idx, clause in enumerate(src.clauses):
            if clause & ~free:
                continue  # clause not active in this realization
            piles = tuple(0 if ((clause >> i) & 1 or not (free >> i) & 1) else 1
                          for i in range(n))
            realizations.append(piles)
            provenance[f"realization{r_idx}/clause{c_idx}"] = list(piles)
    board = Superposition.of(target, realizations)
    assert board.width <= len(frees) * len(src.clauses)
    return ReductionOutput("avoid_true_to_nim", target, board, provenance,
                           src, state)


# -- Geography edge subdivision ----------------------------------------------

def _subdivide(names: list[str], arcs: Sequence[tuple[int, int]]):
    new_names = list(names)
    new_edges = []
    gadgets = {}
    for u, v in arcs:
        label = f"{names[u]}->{names[v]}"
        m1, m2 = f"{label}#1", f"{label}#2"
        i1 = len(new_names)
        new_names.append(m1)
        i2 = len(new_names)
        new_names.append(m2)
        new_edges.extend([(u, i1), (i1, i2), (i2, v)])
        gadgets[label] = (i1, i2)
    return new_names, new_edges, gadgets


def geography_edge_subdivision(src: GeographyRuleset) -> ReductionOutput:
    """Replace each arc (a,b) by the 3-arc path a -> ab1 -> ab2 -> b."""
    if not src.directed:
        raise UnsupportedShapeError("edge subdivision starts from a directed instance")
    names, edges, gadgets = _subdivide(src.names, src.edges)
    target = GeographyRuleset(names, edges, src.start, directed=True)
    provenance = {label: [names[i1], names[i2]] for label, (i1, i2) in gadgets.items()}
    return ReductionOutput("geography_edge_subdivision", target,
                           target.initial_position(), provenance,
                           src, src.initial_position())


# -- Directed -> undirected with a poly-wide superposition ---------------------

def directed_to_undirected_polywide(src: GeographyRuleset) -> ReductionOutput:
    """Main-board of undirected 3-edge paths plus one (a,b)-board per arc in
    which (ab1, ab2) is replaced by (STOP_ab, ab2); m+1 entangled realizations
    sharing token = start, visited = {start}."""
    if not src.directed:
        raise UnsupportedShapeError("the poly-wide builder starts from a directed instance")
    names = list(src.names)
    main_edges = []
    per_arc = []
    for u, v in src.edges:
        label = f"{names[u]}->{names[v]}"
        i1, i2, stop = len(names), len(names) + 1, len(names) + 2
        names.extend([f"{label}#1", f"{label}#2", f"stop:{label}"])
        main_edges.extend([(u, i1), (i1, i2), (i2, v)])
        per_arc.append((label, u, v, i1, i2, stop))
    target = GeographyRuleset(names, main_edges, src.start, directed=False)
    n = len(names)
    realizations = [GeographyPosition(adjacency_from_edges(n, main_edges, False),
                                      src.start, 1 << src.start)]
    provenance: dict[str, Any] = {"main-board": 0}
    for idx, (label, u, v, i1, i2, stop) in enumerate(per_arc):
        edges = [e for e in main_edges if e != (i1, i2)] + [(stop, i2)]
        realizations.append(GeographyPosition(adjacency_from_edges(n, edges, False),
                                              src.start, 1 << src.start))
        provenance[label] = {"board": idx + 1, "stop": names[stop],
                             "path": [names[i1], names[i2]]}
    board = Superposition.of(target, realizations)
    assert board.width == len(src.edges) + 1
    return ReductionOutput("directed_to_undirected_polywide", target, board,
                           provenance, src, src.initial_position())


# -- Schaefer lift: Phantom-Move QSAT -> Avoid True ---------------------------

def schaefer_lift(src: QbfRuleset, triplicate: bool = False) -> ReductionOutput:
    """Per True variable: T1,T2 and clause (T1 v T2); per False variable:
    F1,F2,FG and clause (F1 v F2 v FG); each source clause rewritten with
    literal substitution and duplicate padding.  Case Even only.

    The equivalence tracks the merged-phantom formulation, where the final
    variable assignment carries the mover's win condition (the standalone
    phantom gives the extra move to the *other* player in Case Even, and the
    two games can genuinely differ under quantum play)."""
    if src.variant != PHANTOM or src.family != FAMILY_QSAT:
        raise UnsupportedShapeError("the lift starts from Phantom-Move QSAT")
    if not src.merged_phantom:
        raise UnsupportedShapeError(
            "the lift needs the merged-phantom formulation (merged_phantom=true)")
    n_false = len(src.names) - src.n_true
    if src.n_true != n_false:
        raise UnsupportedShapeError(
            "Case Odd input: the construction needs equal variable counts")

    names: list[str] = []
    ids: dict[str, int] = {}

    def var(name: str) -> int:
        if name not in ids:
            ids[name] = len(names)
            names.append(name)
        return ids[name]

    clauses: list[int] = []
    classes: list[str] = []
    # positive / negated substitutes and their duplicate-padding partners
    pos_sub, neg_sub, pos_dup, neg_dup = {}, {}, {}, {}
    for i in range(src.n_true):
        base = src.names[i]
        t1, t2 = var(f"{base}:1"), var(f"{base}:2")
        var(f"{base}:1'")
        var(f"{base}:2'")
        clauses.append((1 << t1) | (1 << t2))
        classes.append("TV")
        pos_sub[i], neg_sub[i] = t1, t2
        pos_dup[i], neg_dup[i] = ids[f"{base}:1'"], ids[f"{base}:2'"]
    for i in range(src.n_true, len(src.names)):
        base = src.names[i]
        f1, f2, fg = var(f"{base}:1"), var(f"{base}:2"), var(f"{base}:G")
        var(f"{base}:2'")
        clauses.append((1 << f1) | (1 << f2) | (1 << fg))
        classes.append("FV")
        pos_sub[i], neg_sub[i] = f1, f2
        pos_dup[i], neg_dup[i] = fg, ids[f"{base}:2'"]
    extra = {}

    def extra_dup(target_var: int, tag: int) -> int:
        key = (target_var, tag)
        if key not in extra:
            extra[key] = var(f"{names[target_var]}*{tag}")
        return extra[key]

    for clause in src.clauses:
        mask = 0
        for v, neg in clause:
            sub = neg_sub[v] if neg else pos_sub[v]
            dup = neg_dup[v] if neg else pos_dup[v]
            mask |= (1 << sub) | (1 << dup)
            if triplicate:
                mask |= 1 << extra_dup(sub, 2)
        clauses.append(mask)
        classes.append("QBF")
    target = AvoidTrueRuleset(names, clauses)
    provenance = {
        "clause_classes": classes,
        "variables": {src.names[i]: {"pos": names[pos_sub[i]], "neg": names[neg_sub[i]]}
                      for i in range(len(src.names))},
    }
    assert len(names) >= 2 * src.n_true + 3 * n_false
    return ReductionOutput("schaefer_lift", target, target.initial_position(),
                           provenance, src, src.initial_position())


# -- QBF -> Node Kayles --------------------------------------------------------

def qbf_truth(clauses: Sequence[Sequence[tuple[int, bool]]], n_total: int) -> bool:
    """Evaluate exists x1 forall x2 exists x3 ... f over level-indexed
    literals; even (0-based) levels are existential."""

    def rec(level: int, values: int) -> bool:
        if level == n_total:
            return all(any(((values >> v) & 1) != neg for v, neg in clause)
                       for clause in clauses)
        branches = (rec(level + 1, values | (b << level)) for b in (0, 1))
        if level % 2 == 0:  # True's level
            return any(branches)
        return all(branches)

    return rec(0, 0)


def qbf_to_node_kayles(src: QbfRuleset) -> ReductionOutput:
    """The eight-step graph of the QBF -> Node Kayles hardness construction.

    Needs True to assign both the first and last variable; other inputs are
    padded with a fresh True variable and the tautological clause over it.
    Variables are relabeled by level: odd levels belong to True.
    """
    if src.family != FAMILY_QBF:
        raise UnsupportedShapeError("the construction starts from an ordered QBF instance")
    order = list(src.order)
    level_names = [src.names[v] for v in order]
    # clause literals in terms of levels
    level_of = {v: i for i, v in enumerate(order)}
    clauses = [[(level_of[v], neg) for v, neg in clause] for clause in src.clauses]
    padded = False
    if len(order) % 2 == 0:  # ends on a False variable: pad
        pad_level = len(level_names)
        level_names.append(f"{level_names[0]}~pad")
        clauses = clauses + [[(pad_level, False), (pad_level, True)]]
        padded = True
    n = len(level_names)

    names: list[str] = []
    ids: dict[str, int] = {}

    def vertex(name: str) -> int:
        ids[name] = len(names)
        names.append(name)
        return ids[name]

    levels: list[list[int]] = []
    pos_group: list[list[int]] = []  # unnegated vertices per level
    neg_group: list[list[int]] = []
    x1 = vertex("x1")
    x1n = vertex("~x1")
    levels.append([x1, x1n])
    pos_group.append([x1])
    neg_group.append([x1n])
    for i in range(2, n + 1):
        vt = vertex(f"x{i}:T")
        vf = vertex(f"x{i}:F")
        nt = vertex(f"~x{i}:T")
        nf = vertex(f"~x{i}:F")
        levels.append([vt, vf, nt, nf])
        pos_group.append([vt, vf])
        neg_group.append([nt, nf])
    guards: dict[tuple[int, int], int] = {}
    for i in range(1, n + 1):
        for j in range(i + 1, n + 2):
            guards[(i, j)] = vertex(f"y{i},{j}")
            levels[i - 1].append(guards[(i, j)])
    clause_vertices = [vertex(f"C{k + 1}") for k in range(len(clauses))]
    levels.append(list(clause_vertices))

    edges: set[tuple[int, int]] = set()

    def connect(u: int, v: int):
        if u != v:
            edges.add((min(u, v), max(u, v)))

    for members in levels:  # steps 4 and 5: every level is a clique
        for a_i, a in enumerate(members):
            for b in members[a_i + 1:]:
                connect(a, b)
    for i in range(n - 1):  # step 6: truth-assignment edges
        for u in pos_group[i]:
            for v in (ids[f"x{i + 2}:T"], ids[f"~x{i + 2}:T"]):
                connect(u, v)
        for u in neg_group[i]:
            for v in (ids[f"x{i + 2}:F"], ids[f"~x{i + 2}:F"]):
                connect(u, v)
    for k, clause in enumerate(clauses):  # step 7: clause-literal edges
        for level, neg in clause:
            for u in (neg_group[level] if neg else pos_group[level]):
                connect(u, clause_vertices[k])
    level_index = {}
    for idx, members in enumerate(levels):
        for u in members:
            level_index[u] = idx
    # step 8 per the worked figure: the guard y_ij must survive clean play of
    # the levels before i, so it spans levels i..n+1 except its target level j
    for (i, j), y in guards.items():
        for u in range(len(names)):
            if u != y and i - 1 <= level_index[u] != j - 1:
                connect(u, y)

    target = NodeKaylesRuleset(names, sorted(edges), variant=PLAIN)
    provenance: dict[str, Any] = {
        "levels": {f"level{i + 1}": [names[u] for u in members]
                   for i, members in enumerate(levels)},
        "padded": padded,
        "source_order": level_names,
    }
    return ReductionOutput("qbf_to_node_kayles", target, target.initial_position(),
                           provenance, src, src.initial_position())


# -- Bigraph Node Kayles -> Snort ----------------------------------------------

def bigraph_to_snort(src: NodeKaylesRuleset) -> ReductionOutput:
    """Two pre-filled anchors: the red anchor adjacent to every red vertex and
    the blue anchor to every blue vertex; playable vertices lose their colors."""
    if src.variant != BIGRAPH:
        raise UnsupportedShapeError("the anchor construction starts from Bigraph Node Kayles")
    names = list(src.names) + ["anchor:blue", "anchor:red"]
    blue_anchor, red_anchor = len(src.names), len(src.names) + 1
    edges = list(src.edges)
    for v in range(len(src.names)):
        if (src.blue_mask >> v) & 1:
            edges.append((v, blue_anchor))
        else:
            edges.append((v, red_anchor))
    target = NodeKaylesRuleset(names, edges, variant=SNORT,
                               snort_blue=1 << blue_anchor,
                               snort_red=1 << red_anchor)
    provenance = {"anchor:blue": names[blue_anchor], "anchor:red": names[red_anchor]}
    return ReductionOutput("bigraph_to_snort", target, target.initial_position(),
                           provenance, src, src.initial_position())


# -- Equivalence harness ---------------------------------------------------------

@dataclass
class ReductionReport:
    kind: str
    source_outcome: str
    target_outcome: str
    agree: bool
    source_nodes: int
    target_nodes: int


def verify_reduction(output: ReductionOutput, config: GameConfig,
                     limits: Optional[SolveLimits] = None) -> ReductionReport:
    """Solve both sides at desk scale and compare under the reduction's
    outcome mapping."""
    limits = limits or SolveLimits()
    kind = output.kind
    src_nodes = tgt_nodes = 0

    def quantum_outcome(instance, state):
        res = solve(initial_state(instance, config, state), limits)
        return res.outcome, res.nodes

    if kind == "avoid_true_to_nim":
        src_oc, src_nodes = quantum_outcome(output.source_instance, output.source_state)
        tgt_oc, tgt_nodes = quantum_outcome(output.instance, output.state)
        agree = src_oc is tgt_oc
        return ReductionReport(kind, src_oc.value, tgt_oc.value, agree,
                               src_nodes, tgt_nodes)
    if kind == "geography_edge_subdivision":
        src_oc = classical_solve(output.source_instance, output.source_state, limits)
        tgt_oc, tgt_nodes = quantum_outcome(output.instance, output.state)
        agree = src_oc is tgt_oc
        return ReductionReport(kind, src_oc.value, tgt_oc.value, agree, 0, tgt_nodes)
    if kind == "directed_to_undirected_polywide":
        src_oc, src_nodes = quantum_outcome(output.source_instance, output.source_state)
        tgt_oc, tgt_nodes = quantum_outcome(output.instance, output.state)
        agree = src_oc is tgt_oc
        return ReductionReport(kind, src_oc.value, tgt_oc.value, agree,
                               src_nodes, tgt_nodes)
    if kind == "schaefer_lift":
        src_res = solve(initial_state(output.source_instance, config,
                                      output.source_state, to_move=TRUE_PLAYER), limits)
        true_wins_src = src_res.outcome in (OutcomeClass.N, OutcomeClass.L)
        tgt_oc, tgt_nodes = quantum_outcome(output.instance, output.state)
        true_wins_tgt = tgt_oc is OutcomeClass.N  # first player in the lift is True
        agree = true_wins_src == true_wins_tgt
        return ReductionReport(kind, "True" if true_wins_src else "False",
                               "True" if true_wins_tgt else "False", agree,
                               src_res.nodes, tgt_nodes)
    if kind == "qbf_to_node_kayles":
        src = output.source_instance
        truth = qbf_truth([[(src.order.index(v), neg) for v, neg in clause]
                           for clause in src.clauses],
                          len(src.names))
        tgt_oc, tgt_nodes = quantum_outcome(output.instance, output.state)
        first_player_wins = tgt_oc is OutcomeClass.N
        agree = truth == first_player_wins
        return ReductionReport(kind, "True" if truth else "False",
                               "True" if first_player_wins else "False", agree,
                               0, tgt_nodes)
    if kind == "bigraph_to_snort":
        src_oc, src_nodes = quantum_outcome(output.source_instance, output.source_state)
        tgt_oc, tgt_nodes = quantum_outcome(output.instance, output.state)
        agree = src_oc is tgt_oc
        return ReductionReport(kind, src_oc.value, tgt_oc.value, agree,
                               src_nodes, tgt_nodes)
    if kind == "identity":
        src_oc, src_nodes = quantum_outcome(output.source_instance, output.source_state)
        tgt_oc, tgt_nodes = quantum_outcome(output.instance, output.state)
        return ReductionReport(kind, src_oc.value, tgt_oc.value, src_oc is tgt_oc,
                               src_nodes, tgt_nodes)
    raise ValueError(f"unknown reduction kind {kind!r}")


BUILDERS = {
    "avoid-true-to-nim": avoid_true_to_nim,
    "edge-subdivide": geography_edge_subdivision,
    "directed-to-undirected": directed_to_undirected_polywide,
    "schaefer-lift": schaefer_lift,
    "qbf-to-node-kayles": qbf_to_node_kayles,
    "bigraph-to-snort": bigraph_to_snort,
}
