"""End-to-end generation: State Table in, verified vectors and coverage out."""

from __future__ import annotations

from dataclasses import dataclass

from .dcpw import PostmanWalk, dcpw
from .sicstg import STRICT, SccReport, SicGraph, build_graph, prune_and_check
from .state_table import StateTable, expand
from .vectors import (CoverageReport, ReplayReport, TestVectorSequence, coverage, replay,
                      walk_to_vectors)


@dataclass
class Generation:
    table: StateTable  # expanded
    full_graph: SicGraph
    graph: SicGraph  # after pruning / component selection
    scc: SccReport
    walk: PostmanWalk
    vectors: TestVectorSequence
    replay: ReplayReport
    coverage: CoverageReport


def expansion_notes(given: StateTable, expanded: StateTable) -> list[str]:
    added = expanded.added_keys
    notes = [f"state table: {len(given.rows)} rows given, {len(added)} rows added by expansion, "
             f"{len(expanded.rows)} total"]
    if added and given.n_edge == 0:
        notes.append(f"hold expansion applied to {len(added)} missing keys although the cell has no edge inputs")
    return notes


def generate(st: StateTable, policy: str = STRICT) -> Generation:
    full = expand(st)
    g0 = build_graph(full)
    g, rep = prune_and_check(g0, policy)
    walk = dcpw(g)
    seq = walk_to_vectors(walk, g, full)
    rr = replay(full, seq)
    cov = coverage(walk, g, rep, notes=expansion_notes(st, full))
    return Generation(full, g0, g, rep, walk, seq, rr, cov)
