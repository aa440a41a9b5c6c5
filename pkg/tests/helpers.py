"""Fixtures and independent oracles shared by the test modules.

The oracles here deliberately avoid the package's own algorithms: edges are
re-derived pairwise from the three SIC conditions, postman optima come from
an ILP and from exhaustive enumeration of duplication vectors.
"""

import itertools
import random
from pathlib import Path

import numpy as np

from sicvectors.state_table import EDGE, LEVEL, STATE, PinDeclaration, StateTable, StateTableRow

ACCEPTANCE_LINES: list[str] = []

DATA = Path(__file__).resolve().parent.parent / "cells"
DFF_TEXT = (DATA / "dff.st").read_text()

# (D, CLK_prev, CLK_cur, Q_prev, Q_next), the published given and added rows
DFF_GIVEN = [
    (0, 0, 1, 0, 0), (0, 0, 1, 1, 0), (1, 0, 1, 0, 1), (1, 0, 1, 1, 1),
    (0, 1, 0, 0, 0), (0, 1, 0, 1, 1), (1, 1, 0, 0, 0), (1, 1, 0, 1, 1),
]
DFF_ADDED = [
    (1, 1, 1, 0, 0), (0, 1, 1, 0, 0), (0, 1, 1, 1, 1), (1, 1, 1, 1, 1),
    (1, 0, 0, 0, 0), (1, 0, 0, 1, 1), (0, 0, 0, 0, 0), (0, 0, 0, 1, 1),
]


def row_tuple(row):
    (d,), ((cp, cc),), (qp,), (qn,) = row.level_inputs, row.edge_inputs, row.prev_states, row.next_states
    return (d, cp, cc, qp, qn)


def random_cell(rng: random.Random, max_width=8, fill=None) -> StateTable:
    """Random deterministic cell with N+2M+K <= max_width, K >= 1, N+M >= 1."""
    while True:
        n = rng.randint(0, 3)
        m = rng.randint(0, 2)
        k = rng.randint(1, 3)
        if n + m >= 1 and n + 2 * m + k <= max_width:
            break
    decls = ([PinDeclaration(f"L{i}", LEVEL) for i in range(n)]
             + [PinDeclaration(f"E{i}", EDGE) for i in range(m)]
             + [PinDeclaration(f"S{i}", STATE) for i in range(k)])
    p = rng.uniform(0.2, 1.0) if fill is None else fill
    rows = []
    for bits in itertools.product((0, 1), repeat=n + 2 * m + k):
        if rng.random() < p:
            level = bits[:n]
            edges = tuple((bits[n + 2 * j], bits[n + 2 * j + 1]) for j in range(m))
            prev = bits[n + 2 * m:]
            nxt = tuple(rng.randint(0, 1) for _ in range(k))
            rows.append(StateTableRow(level, edges, prev, nxt))
    if not rows:
        rows.append(StateTableRow((0,) * n, ((0, 1),) * m, (0,) * k, (1,) * k))
    return StateTable(f"rand{rng.randrange(10**6)}", tuple(decls), tuple(rows))


def pairwise_edges(vertices):
    """O(V^2) check of the three edge conditions on raw label fields."""
    out = set()
    for i, u in enumerate(vertices):
        for j, v in enumerate(vertices):
            cond1 = [p for p, _ in v.states] == [c for _, c in u.states]
            cond2 = [p for p, _ in v.edges] == [c for _, c in u.edges]
            u_in = list(u.level) + [c for _, c in u.edges]
            v_in = list(v.level) + [c for _, c in v.edges]
            cond3 = sum(a != b for a, b in zip(u_in, v_in)) == 1
            if cond1 and cond2 and cond3:
                out.add((i, j))
    return out


def random_strong_digraph(rng: random.Random, max_vertices=8, max_edges=20):
    """Random simple strongly connected digraph: a Hamiltonian cycle plus chords."""
    n = rng.randint(2, max_vertices)
    order = list(range(n))
    rng.shuffle(order)
    edges = {(order[i], order[(i + 1) % n]) for i in range(n)}
    cap = min(max_edges, n * (n - 1))
    target = rng.randint(len(edges), cap)
    candidates = [(a, b) for a in range(n) for b in range(n) if a != b and (a, b) not in edges]
    rng.shuffle(candidates)
    edges.update(candidates[:target - len(edges)])
    return n, sorted(edges)


def ilp_min_duplications(n, edges):
    """Minimum total extra traversals that balance in/out degrees, via scipy's MILP."""
    from scipy.optimize import LinearConstraint, milp

    e = len(edges)
    a = np.zeros((n, e))
    b = np.zeros(n)
    for idx, (s, d) in enumerate(edges):
        a[s, idx] -= 1
        a[d, idx] += 1
        b[s] += 1
        b[d] -= 1
    # for each vertex: (in + extra_in) - (out + extra_out) = 0  ->  A x = out - in
    res = milp(c=np.ones(e), constraints=LinearConstraint(a, b, b), integrality=np.ones(e))
    assert res.success
    return int(round(res.fun))


def exhaustive_min_duplications(n, edges, limit):
    """Smallest T <= limit such that some multiset of T duplicated edges balances the graph, else None."""
    bal = [0] * n
    for s, d in edges:
        bal[d] += 1
        bal[s] -= 1
    for total in range(limit + 1):
        for combo in itertools.combinations_with_replacement(range(len(edges)), total):
            b = list(bal)
            for idx in combo:
                s, d = edges[idx]
                b[d] += 1
                b[s] -= 1
            if not any(b):
                return total
    return None


def has_path(g, u, v):
    seen = {u}
    frontier = [u]
    while frontier:
        x = frontier.pop()
        if x == v:
            return True
        for y in g.successors(x):
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    return False
