"""Directed Chinese Postman Walk over a strongly connected digraph.

The walk is built in three stages: degree imbalances, a min-cost flow from
surplus to deficit vertices that decides which edges to traverse again,
and Hierholzer's circuit extraction on the resulting balanced multigraph.
All edges cost 1.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass
from typing import Sequence

from .sicstg import Digraph, scc

UNREACHABLE = -1


class WalkError(Exception):
    pass


@dataclass(frozen=True)
class ImbalanceTable:
    indegree: tuple[int, ...]
    outdegree: tuple[int, ...]

    @property
    def imbalance(self) -> tuple[int, ...]:
        return tuple(i - o for i, o in zip(self.indegree, self.outdegree))

    def surplus(self) -> list[int]:
        """Vertices entered more often than left; they need extra departures."""
        return [v for v, b in enumerate(self.imbalance) if b > 0]

    def deficit(self) -> list[int]:
        return [v for v, b in enumerate(self.imbalance) if b < 0]


@dataclass(frozen=True)
class ShortestPaths:
    """BFS distances (edge count) and the predecessor edge of each vertex, per source."""

    dist: dict[int, tuple[int, ...]]
    pred_edge: dict[int, tuple[int, ...]]

    def path(self, g: Digraph, src: int, dst: int) -> list[int]:
        """Edge ids of the tree path src -> dst."""
        pred = self.pred_edge[src]
        out = []
        v = dst
        while v != src:
            e = pred[v]
            out.append(e)
            v = g.edges[e][0]
        out.reverse()
        return out


@dataclass(frozen=True)
class Augmentation:
    duplicates: tuple[int, ...]  # extra traversals per edge id
    flow: tuple[tuple[int, int, int], ...] = ()  # (surplus vertex, deficit vertex, units)

    @property
    def total(self) -> int:
        return sum(self.duplicates)


@dataclass(frozen=True)
class PostmanWalk:
    start: int
    edges: tuple[int, ...]
    repetitions: int

    def __len__(self):
        return len(self.edges)

    def vertices(self, g: Digraph) -> list[int]:
        return [self.start] + [g.edges[e][1] for e in self.edges]

    def histogram(self, n_edges: int) -> list[int]:
        counts = [0] * n_edges
        for e in self.edges:
            counts[e] += 1
        return counts


def imbalances(g: Digraph) -> ImbalanceTable:
    if g.n == 0:
        raise WalkError("empty graph")
    return ImbalanceTable(tuple(len(x) for x in g.in_edges), tuple(len(x) for x in g.out_edges))


def bfs(g: Digraph, src: int) -> tuple[list[int], list[int]]:
    dist = [UNREACHABLE] * g.n
    pred = [-1] * g.n
    dist[src] = 0
    queue = deque([src])
    while queue:
        v = queue.popleft()
        for e in g.out_edges[v]:
            w = g.edges[e][1]
            if dist[w] == UNREACHABLE:
                dist[w] = dist[v] + 1
                pred[w] = e
                queue.append(w)
    return dist, pred


def all_pairs_shortest(g: Digraph, sources: Sequence[int] | None = None) -> ShortestPaths:
    """Shortest edge counts from each source (default: every vertex).

    Raises WalkError if some vertex is unreachable, since the caller relies
    on strong connectivity.
    """
    if sources is None:
        sources = range(g.n)
    dist, pred = {}, {}
    for s in sources:
        d, p = bfs(g, s)
        if UNREACHABLE in d:
            bad = d.index(UNREACHABLE)
            raise WalkError(
                f"vertex {g.vertex_name(bad)} unreachable from {g.vertex_name(s)}: graph is not strongly connected")
        dist[s] = tuple(d)
        pred[s] = tuple(p)
    return ShortestPaths(dist, pred)


def _min_cost_flow(n: int, arcs: Sequence[tuple[int, int, int]], supply: Sequence[int]) -> list[int]:
    """Uncapacitated min-cost flow meeting every node's supply (+) or demand (-).

    Successive shortest paths, primal-dual style: each round runs Dijkstra
    with Johnson potentials on the residual graph, then saturates every
    shortest augmenting path at once with a blocking flow over the
    zero-reduced-cost arcs.  Arcs are scanned in the order given and heap
    ties break by node id, so the result is deterministic.  Returns the flow
    on each input arc.
    """
    src, sink = n, n + 1
    nodes = n + 2
    # arc arrays: to, cap, cost; arc i ^ 1 is the reverse of arc i
    to: list[int] = []
    cap: list[int] = []
    arc_cost: list[int] = []
    adj: list[list[int]] = [[] for _ in range(nodes)]

    def add(u, v, c, w):
        adj[u].append(len(to))
        to.append(v); cap.append(c); arc_cost.append(w)
        adj[v].append(len(to))
        to.append(u); cap.append(0); arc_cost.append(-w)

    total = sum(b for b in supply if b > 0)
    if total != -sum(b for b in supply if b < 0):
        raise WalkError("supplies and demands do not balance")
    for u, v, w in arcs:
        add(u, v, total, w)
    for v, b in enumerate(supply):
        if b > 0:
            add(src, v, b, 0)
        elif b < 0:
            add(v, sink, -b, 0)

    inf = float("inf")
    potential = [0] * nodes
    shipped = 0
    while shipped < total:
        dist = [inf] * nodes
        dist[src] = 0
        heap = [(0, src)]
        while heap:
            d, u = heapq.heappop(heap)
            if d > dist[u]:
                continue
            pu = potential[u]
            for a in adj[u]:
                if cap[a] > 0:
                    v = to[a]
                    nd = d + arc_cost[a] + pu - potential[v]
                    if nd < dist[v]:
                        dist[v] = nd
                        heapq.heappush(heap, (nd, v))
        if dist[sink] == inf:
            raise WalkError("min-cost flow is infeasible")
        ds = dist[sink]
        for v in range(nodes):
            potential[v] += min(dist[v], ds)
        shipped += _blocking_flow(src, sink, adj, to, cap, arc_cost, potential)

    return [total - cap[2 * i] for i in range(len(arcs))]


def _blocking_flow(src, sink, adj, to, cap, arc_cost, potential) -> int:
    """Dinic phases restricted to residual arcs of zero reduced cost."""
    pushed = 0
    while True:
        level = {src: 0}
        queue = deque([src])
        while queue:
            u = queue.popleft()
            pu = potential[u]
            for a in adj[u]:
                v = to[a]
                if v not in level and cap[a] > 0 and arc_cost[a] + pu == potential[v]:
                    level[v] = level[u] + 1
                    queue.append(v)
        if sink not in level:
            return pushed
        it = dict.fromkeys(level, 0)
        while True:
            # iterative DFS for one augmenting path in the level graph
            path: list[int] = []
            u = src
            while u != sink:
                arcs = adj[u]
                i = it[u]
                want = level[u] + 1
                pu = potential[u]
                while i < len(arcs):
                    a = arcs[i]
                    v = to[a]
                    if level.get(v) == want and cap[a] > 0 and arc_cost[a] + pu == potential[v]:
                        break
                    i += 1
                it[u] = i
                if i == len(arcs):
                    if u == src:
                        break
                    del level[u]  # dead end
                    u = to[path.pop() ^ 1]
                    continue
                path.append(arcs[i])
                u = to[arcs[i]]
            if u != sink:
                break
            push = min(cap[a] for a in path)
            for a in path:
                cap[a] -= push
                cap[a ^ 1] += push
            pushed += push


def transport(supply: Sequence[int], demand: Sequence[int], cost: Sequence[Sequence[int]]) -> list[list[int]]:
    """Min-cost transportation plan: units shipped from each supply row to each demand column."""
    ns, nd = len(supply), len(demand)
    arcs = [(i, ns + j, cost[i][j]) for i in range(ns) for j in range(nd)]
    flow = _min_cost_flow(ns + nd, arcs, list(supply) + [-d for d in demand])
    return [flow[i * nd:(i + 1) * nd] for i in range(ns)]


def min_cost_augmentation(g: Digraph, imb: ImbalanceTable, paths: ShortestPaths | None = None,
                          method: str = "network") -> Augmentation:
    """Cheapest set of extra edge traversals that balances every vertex.

    ``network`` solves the flow directly on g (unit edge costs), which keeps
    the network at |E| arcs.  ``transport`` solves the surplus x deficit
    transportation problem over shortest-path distances and duplicates the
    BFS tree path of each shipment; it needs ``paths`` from every surplus
    vertex and grows quadratically.  Both are exact.
    """
    bal = imb.imbalance
    if sum(bal) != 0:
        raise WalkError("imbalances do not sum to zero")
    sup, dem = imb.surplus(), imb.deficit()
    dup = [0] * len(g.edges)
    if not sup:
        return Augmentation(tuple(dup))
    if method == "network":
        # surplus vertices send flow along graph edges to deficit vertices
        flow = _min_cost_flow(g.n, [(s, d, 1) for s, d in g.edges], bal)
        return Augmentation(tuple(flow))
    if method != "transport":
        raise ValueError(f"unknown method {method!r}")
    if paths is None:
        paths = all_pairs_shortest(g, sup)
    cost = [[paths.dist[s][d] for d in dem] for s in sup]
    plan = transport([bal[s] for s in sup], [-bal[d] for d in dem], cost)
    shipments = []
    for i, s in enumerate(sup):
        for j, d in enumerate(dem):
            units = plan[i][j]
            if units:
                shipments.append((s, d, units))
                for e in paths.path(g, s, d):
                    dup[e] += units
    return Augmentation(tuple(dup), tuple(shipments))


def eulerian_circuit(g: Digraph, aug: Augmentation, start: int) -> PostmanWalk:
    """Hierholzer's algorithm on g plus duplicated edges, iterative."""
    mult = [1 + k for k in aug.duplicates]
    out_count = [0] * g.n
    in_count = [0] * g.n
    for e, (s, d) in enumerate(g.edges):
        out_count[s] += mult[e]
        in_count[d] += mult[e]
    if out_count != in_count:
        bad = next(v for v in range(g.n) if out_count[v] != in_count[v])
        raise WalkError(f"multigraph is unbalanced at vertex {g.vertex_name(bad)}")
    if out_count[start] == 0:
        raise WalkError(f"start vertex {g.vertex_name(start)} has no outgoing edges")

    # per-vertex cursor over (edge id, remaining copies) in ascending edge id order
    remaining = list(mult)
    cursor = [0] * g.n
    stack: list[tuple[int, int]] = [(start, -1)]
    circuit: list[int] = []
    while stack:
        v, via = stack[-1]
        out = g.out_edges[v]
        while cursor[v] < len(out) and remaining[out[cursor[v]]] == 0:
            cursor[v] += 1
        if cursor[v] < len(out):
            e = out[cursor[v]]
            remaining[e] -= 1
            stack.append((g.edges[e][1], e))
        else:
            stack.pop()
            if via >= 0:
                circuit.append(via)
    circuit.reverse()
    if len(circuit) != sum(mult):
        raise WalkError("multigraph edges are not all reachable from the start vertex")
    return PostmanWalk(start, tuple(circuit), aug.total)


def dcpw(g: Digraph, method: str = "network") -> PostmanWalk:
    """Shortest closed walk covering every edge at least once."""
    imb = imbalances(g)
    start = next((v for v in range(g.n) if g.out_edges[v]), None)
    if start is None:
        raise WalkError("graph has no edges")
    if scc(g).component_count != 1:
        raise WalkError("graph is not strongly connected")
    aug = min_cost_augmentation(g, imb, method=method)
    return eulerian_circuit(g, aug, start)


def check_walk(g: Digraph, walk: PostmanWalk) -> None:
    """Raise WalkError unless the walk is closed, incident and covers every edge."""
    if not walk.edges:
        raise WalkError("empty walk")
    v = walk.start
    for i, e in enumerate(walk.edges):
        s, d = g.edges[e]
        if s != v:
            raise WalkError(f"step {i}: edge {e} does not leave vertex {g.vertex_name(v)}")
        v = d
    if v != walk.start:
        raise WalkError("walk is not closed")
    missing = [e for e, c in enumerate(walk.histogram(len(g.edges))) if c == 0]
    if missing:
        raise WalkError(f"{len(missing)} edges not covered")


def format_walk(g: Digraph, walk: PostmanWalk) -> str:
    lines = [str(e) for e in walk.edges]
    lines.append(f"# length {len(walk)} edges {len(g.edges)} repetitions {walk.repetitions}")
    return "\n".join(lines) + "\n"
