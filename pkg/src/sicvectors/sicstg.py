"""Single Input Change State Transition Graph construction and connectivity."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .state_table import Bits, Pairs, StateTable, StateTableError, validate_complete

STRICT = "strict"
LARGEST = "largest-component"
POLICIES = (STRICT, LARGEST)


class ConnectivityError(Exception):
    """The graph cannot be made a single strongly connected component."""

    def __init__(self, message: str, components: Sequence[Sequence[str]] = ()):
        super().__init__(message)
        self.components = [list(c) for c in components]


@dataclass(frozen=True, order=True)
class Configuration:
    """One cell configuration: level values, edge (prev, cur) pairs, state (prev, cur) pairs."""

    level: Bits
    edges: Pairs
    states: Pairs

    @property
    def bits(self) -> Bits:
        out = list(self.level)
        for pair in self.edges:
            out.extend(pair)
        for pair in self.states:
            out.extend(pair)
        return tuple(out)

    @property
    def label(self) -> str:
        return ",".join(map(str, self.bits))

    @property
    def current_inputs(self) -> Bits:
        return self.level + tuple(c for _, c in self.edges)

    @property
    def current_states(self) -> Bits:
        return tuple(c for _, c in self.states)

    @property
    def prev_states(self) -> Bits:
        return tuple(p for p, _ in self.states)

    @property
    def current_edges(self) -> Bits:
        return tuple(c for _, c in self.edges)

    @property
    def prev_edges(self) -> Bits:
        return tuple(p for p, _ in self.edges)

    @property
    def key(self):
        return (self.level, self.edges, self.prev_states)

    @classmethod
    def from_label(cls, label: str, n_level: int, n_edge: int, n_state: int) -> "Configuration":
        bits = tuple(int(b) for b in label.split(","))
        if len(bits) != n_level + 2 * n_edge + 2 * n_state or set(bits) - {0, 1}:
            raise ValueError(f"malformed configuration label {label!r}")
        level = bits[:n_level]
        rest = bits[n_level:]
        edges = tuple((rest[2 * j], rest[2 * j + 1]) for j in range(n_edge))
        rest = rest[2 * n_edge:]
        states = tuple((rest[2 * j], rest[2 * j + 1]) for j in range(n_state))
        return cls(level, edges, states)


class Digraph:
    """Simple directed graph over vertices 0..n-1; edge ids index the sorted edge list."""

    def __init__(self, n: int, edges: Sequence[tuple[int, int]]):
        self.n = n
        self.edges: tuple[tuple[int, int], ...] = tuple(sorted(set(edges)))
        if len(self.edges) != len(edges):
            raise ValueError("parallel edges are not allowed")
        out_edges: list[list[int]] = [[] for _ in range(n)]
        in_edges: list[list[int]] = [[] for _ in range(n)]
        for eid, (s, d) in enumerate(self.edges):
            if s == d:
                raise ValueError(f"self-loop at vertex {s}")
            if not (0 <= s < n and 0 <= d < n):
                raise ValueError(f"edge {(s, d)} out of range")
            out_edges[s].append(eid)
            in_edges[d].append(eid)
        self.out_edges = tuple(tuple(x) for x in out_edges)
        self.in_edges = tuple(tuple(x) for x in in_edges)

    def __len__(self):
        return self.n

    def successors(self, v: int) -> list[int]:
        return [self.edges[e][1] for e in self.out_edges[v]]

    def vertex_name(self, v: int) -> str:
        return str(v)


class SicGraph(Digraph):
    """Digraph whose vertices are Configurations sorted by label."""

    def __init__(self, vertices: Sequence[Configuration], edges: Sequence[tuple[int, int]]):
        self.vertices = tuple(vertices)
        super().__init__(len(self.vertices), edges)

    def vertex_name(self, v: int) -> str:
        return self.vertices[v].label

    def index(self) -> dict[Configuration, int]:
        return {c: i for i, c in enumerate(self.vertices)}

    def subgraph(self, keep: Sequence[int]) -> "SicGraph":
        keep = sorted(keep)
        remap = {old: new for new, old in enumerate(keep)}
        edges = [(remap[s], remap[d]) for s, d in self.edges if s in remap and d in remap]
        return SicGraph([self.vertices[v] for v in keep], edges)


@dataclass
class SccReport:
    component_count: int
    component_of: list[int]
    pruned: list[str] = field(default_factory=list)
    policy: str = STRICT
    dropped_edges: list[tuple[str, str]] = field(default_factory=list)
    components: list[list[int]] = field(default_factory=list)

    @property
    def dropped_edge_count(self) -> int:
        return len(self.dropped_edges)


def build_vertices(st: StateTable) -> list[Configuration]:
    report = validate_complete(st)
    if not report.complete:
        raise StateTableError(
            f"State Table is incomplete: {len(report.missing_keys)} keys missing; expand it first")
    verts = [
        Configuration(row.level_inputs, row.edge_inputs, tuple(zip(row.prev_states, row.next_states)))
        for row in st.rows
    ]
    verts.sort()
    return verts


def build_edges(vertices: Sequence[Configuration]) -> SicGraph:
    """Connect each vertex to the configuration reached by flipping one input pin.

    Conditions per edge (u, v): v's previous state and previous edge-input
    values equal u's current ones, and u, v differ in exactly one current
    input value.  Because at most one configuration exists per ST key, each
    flipped pin has at most one successor.
    """
    index = {c.key: i for i, c in enumerate(vertices)}
    if len(index) != len(vertices):
        raise ValueError("vertices are not pairwise distinct")
    edges = []
    for u, cfg in enumerate(vertices):
        n = len(cfg.level)
        cur_edges = cfg.current_edges
        prev_states = cfg.current_states
        for pin in range(n + len(cur_edges)):
            level = cfg.level
            new_edges = cur_edges
            if pin < n:
                level = level[:pin] + (1 - level[pin],) + level[pin + 1:]
            else:
                j = pin - n
                new_edges = cur_edges[:j] + (1 - cur_edges[j],) + cur_edges[j + 1:]
            key = (level, tuple(zip(cur_edges, new_edges)), prev_states)
            v = index.get(key)
            if v is not None:
                edges.append((u, v))
    return SicGraph(vertices, edges)


def build_graph(st: StateTable) -> SicGraph:
    return build_edges(build_vertices(st))


def scc(g: Digraph) -> SccReport:
    """Tarjan's algorithm, iterative; components numbered by their smallest vertex."""
    index = [-1] * g.n
    low = [0] * g.n
    on_stack = [False] * g.n
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for root in range(g.n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, i = work[-1]
            out = g.out_edges[v]
            if i < len(out):
                work[-1] = (v, i + 1)
                w = g.edges[out[i]][1]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(sorted(comp))
    comps.sort(key=lambda c: c[0])
    component_of = [0] * g.n
    for cid, comp in enumerate(comps):
        for v in comp:
            component_of[v] = cid
    return SccReport(len(comps), component_of, components=comps)


def prune_zero_degree(g: SicGraph) -> tuple[SicGraph, list[str]]:
    """Delete vertices with in- or out-degree 0, repeating until none remain."""
    alive = [True] * g.n
    indeg = [len(x) for x in g.in_edges]
    outdeg = [len(x) for x in g.out_edges]
    queue = [v for v in range(g.n) if indeg[v] == 0 or outdeg[v] == 0]
    while queue:
        v = queue.pop()
        if not alive[v]:
            continue
        alive[v] = False
        for e in g.out_edges[v]:
            w = g.edges[e][1]
            if alive[w]:
                indeg[w] -= 1
                if indeg[w] == 0:
                    queue.append(w)
        for e in g.in_edges[v]:
            w = g.edges[e][0]
            if alive[w]:
                outdeg[w] -= 1
                if outdeg[w] == 0:
                    queue.append(w)
    pruned = [g.vertex_name(v) for v in range(g.n) if not alive[v]]
    return g.subgraph([v for v in range(g.n) if alive[v]]), pruned


def prune_and_check(g: SicGraph, policy: str = STRICT) -> tuple[SicGraph, SccReport]:
    if policy not in POLICIES:
        raise ValueError(f"unknown policy {policy!r}")
    pruned_g, pruned = prune_zero_degree(g)
    gone = set(pruned)
    dropped = [(g.vertex_name(s), g.vertex_name(d)) for s, d in g.edges
               if g.vertex_name(s) in gone or g.vertex_name(d) in gone]
    if pruned_g.n == 0:
        raise ConnectivityError("graph is empty after removing zero in/out-degree vertices")
    rep = scc(pruned_g)
    named = [[pruned_g.vertex_name(v) for v in c] for c in rep.components]
    if rep.component_count == 1:
        rep.pruned = pruned
        rep.policy = policy
        rep.dropped_edges = dropped
        return pruned_g, rep
    if policy == STRICT:
        raise ConnectivityError(
            f"graph is not strongly connected: {rep.component_count} components", named)

    internal = [0] * rep.component_count
    for s, d in pruned_g.edges:
        if rep.component_of[s] == rep.component_of[d]:
            internal[rep.component_of[s]] += 1
    # components are already ordered by smallest label, so max() keeps the first on ties
    best = max(range(rep.component_count), key=lambda c: (internal[c], -c))
    if internal[best] == 0:
        raise ConnectivityError("no strongly connected component contains an edge", named)
    keep = rep.components[best]
    keep_set = set(keep)
    kept_g = pruned_g.subgraph(keep)
    dropped += [(pruned_g.vertex_name(s), pruned_g.vertex_name(d)) for s, d in pruned_g.edges
                if s not in keep_set or d not in keep_set]
    pruned += [pruned_g.vertex_name(v) for v in range(pruned_g.n) if v not in keep_set]
    final = scc(kept_g)
    final.pruned = pruned
    final.policy = policy
    final.dropped_edges = dropped
    return kept_g, final


def format_edge_list(g: Digraph) -> str:
    return "".join(f"{g.vertex_name(s)} -> {g.vertex_name(d)}\n" for s, d in g.edges)


def format_dot(g: Digraph, name: str = "sicstg") -> str:
    lines = [f"digraph {name} {{"]
    for v in range(g.n):
        lines.append(f'  v{v} [label="{g.vertex_name(v)}"];')
    for s, d in g.edges:
        lines.append(f"  v{s} -> v{d};")
    lines.append("}")
    return "\n".join(lines) + "\n"
