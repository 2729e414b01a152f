"""Finite simple graphs with checkable chordality certificates.

Chordality is decided by maximum cardinality search (MCS).  A chordal graph
gets a perfect elimination ordering (PEO); a non-chordal one gets an induced
(chordless) cycle of length >= 4.  Both kinds of certificate can be checked
independently with :func:`verify_certificate`.
"""
from __future__ import annotations

import heapq
import math
from collections import deque
from collections.abc import Iterable
from dataclasses import dataclass

DEFAULT_CLIQUE_CAP = 10_000


class CliqueCapExceeded(RuntimeError):
    pass


class Graph:
    """Undirected graph on vertices ``0..n-1`` without self-loops."""

    __slots__ = ("n", "adj")

    def __init__(self, n: int, edges: Iterable = (), adj=None):
        self.n = int(n)
        if adj is not None:
            self.adj = [frozenset(a) for a in adj]
            return
        sets = [set() for _ in range(self.n)]
        for i, j in edges:
            i, j = int(i), int(j)
            if i == j:
                raise ValueError(f"self-loop at {i}")
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise ValueError(f"edge ({i}, {j}) out of range")
            sets[i].add(j)
            sets[j].add(i)
        self.adj = [frozenset(s) for s in sets]

    def has_edge(self, i: int, j: int) -> bool:
        return j in self.adj[i]

    def edges(self) -> list:
        return [(i, j) for i in range(self.n) for j in sorted(self.adj[i]) if i < j]

    @property
    def num_edges(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def induced(self, vertices) -> "Graph":
        """Induced subgraph, relabelled in the order given."""
        vertices = list(vertices)
        pos = {v: k for k, v in enumerate(vertices)}
        adj = [{pos[u] for u in self.adj[v] if u in pos} for v in vertices]
        return Graph(len(vertices), adj=adj)

    def __eq__(self, other):
        return isinstance(other, Graph) and self.n == other.n and self.adj == other.adj

    def __repr__(self):
        return f"Graph(n={self.n}, edges={self.num_edges})"

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.edges()]}

    @classmethod
    def from_json(cls, obj: dict) -> "Graph":
        return cls(obj["n"], [tuple(e) for e in obj["edges"]])


def complete_graph(n: int) -> Graph:
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def cycle_graph(n: int) -> Graph:
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


# -- certificates --------------------------------------------------------------

@dataclass(frozen=True)
class PEO:
    order: tuple

    kind = "peo"

    @property
    def chordal(self) -> bool:
        return True

    def to_json(self) -> dict:
        return {"kind": self.kind, "order": list(self.order)}


@dataclass(frozen=True)
class ChordlessCycle:
    cycle: tuple

    kind = "chordless_cycle"

    @property
    def chordal(self) -> bool:
        return False

    def to_json(self) -> dict:
        return {"kind": self.kind, "cycle": list(self.cycle)}


def certificate_from_json(obj: dict):
    if obj["kind"] == PEO.kind:
        return PEO(tuple(obj["order"]))
    if obj["kind"] == ChordlessCycle.kind:
        return ChordlessCycle(tuple(obj["cycle"]))
    raise ValueError(f"unknown certificate kind {obj['kind']!r}")


def verify_certificate(g: Graph, c) -> bool:
    if isinstance(c, PEO):
        order = list(c.order)
        if sorted(order) != list(range(g.n)):
            return False
        pos = {v: k for k, v in enumerate(order)}
        for v in order:
            later = [u for u in g.adj[v] if pos[u] > pos[v]]
            for a in range(len(later)):
                adj_a = g.adj[later[a]]
                for b in range(a + 1, len(later)):
                    if later[b] not in adj_a:
                        return False
        return True
    if isinstance(c, ChordlessCycle):
        cyc = list(c.cycle)
        k = len(cyc)
        if k < 4 or len(set(cyc)) != k or any(not 0 <= v < g.n for v in cyc):
            return False
        for a in range(k):
            for b in range(a + 1, k):
                consecutive = b == a + 1 or (a == 0 and b == k - 1)
                if g.has_edge(cyc[a], cyc[b]) != consecutive:
                    return False
        return True
    return False


# -- maximum cardinality search ---------------------------------------------------

def mcs(g: Graph) -> tuple:
    """Maximum cardinality search.

    Returns ``(visit_order, labels)`` where ``labels[k]`` is the number of
    already visited neighbours of ``visit_order[k]`` at the time it was
    visited.  Ties go to the lowest vertex index.  The reversed visit order is
    a PEO exactly when ``g`` is chordal.
    """
    n = g.n
    weight = [0] * n
    visited = [False] * n
    heap = [(0, v) for v in range(n)]
    heapq.heapify(heap)
    order, labels = [], []
    while heap:
        w, v = heapq.heappop(heap)
        if visited[v] or -w != weight[v]:
            continue
        visited[v] = True
        order.append(v)
        labels.append(weight[v])
        for u in g.adj[v]:
            if not visited[u]:
                weight[u] += 1
                heapq.heappush(heap, (-weight[u], u))
    return tuple(order), tuple(labels)


def _find_peo_violation(g: Graph, visit: tuple):
    """Parent test on the reversed MCS order.

    Returns ``None`` if reversed(visit) is a PEO, else ``(v, x, y)`` with x, y
    non-adjacent neighbours of v that both come later than v in the PEO.
    """
    vidx = [0] * g.n
    for k, v in enumerate(visit):
        vidx[v] = k
    for v in reversed(visit):
        later = [u for u in g.adj[v] if vidx[u] < vidx[v]]
        if len(later) < 2:
            continue
        parent = max(later, key=lambda u: vidx[u])
        adj_p = g.adj[parent]
        for u in later:
            if u != parent and u not in adj_p:
                return v, parent, u
    return None


def _shortest_path_avoiding(g: Graph, src: int, dst: int, blocked) -> list | None:
    prev = {src: None}
    queue = deque([src])
    while queue:
        u = queue.popleft()
        if u == dst:
            path = []
            while u is not None:
                path.append(u)
                u = prev[u]
            return path[::-1]
        for w in g.adj[u]:
            if w not in prev and w not in blocked:
                prev[w] = u
                queue.append(w)
    return None


def _cycle_through(g: Graph, v: int, x: int, y: int) -> tuple | None:
    blocked = (set(g.adj[v]) | {v}) - {x, y}
    path = _shortest_path_avoiding(g, x, y, blocked)
    if path is None:
        return None
    return (v, *path)


def _search_chordless_cycle(g: Graph) -> tuple | None:
    # Every chordless cycle C, any v on C: the rest of C is an x-y path
    # avoiding N[v] minus {x, y}; so scanning all (v, x, y) is complete.
    for v in range(g.n):
        nbrs = sorted(g.adj[v])
        closed = set(nbrs) | {v}
        comp = {}
        for s in range(g.n):
            if s in closed or s in comp:
                continue
            comp[s] = s
            queue = deque([s])
            while queue:
                u = queue.popleft()
                for w in g.adj[u]:
                    if w not in closed and w not in comp:
                        comp[w] = s
                        queue.append(w)
        touching: dict[int, list] = {}
        for x in nbrs:
            roots = {comp[w] for w in g.adj[x] if w in comp}
            for r in roots:
                touching.setdefault(r, []).append(x)
        for r in sorted(touching):
            xs = touching[r]
            for a in range(len(xs)):
                for b in range(a + 1, len(xs)):
                    if xs[b] not in g.adj[xs[a]]:
                        cyc = _cycle_through(g, v, xs[a], xs[b])
                        if cyc is not None:
                            return cyc
    return None


def canonical_cycle(cycle) -> tuple:
    """Rotate to start at the smallest vertex, heading to its smaller neighbour."""
    cyc = list(cycle)
    k = cyc.index(min(cyc))
    cyc = cyc[k:] + cyc[:k]
    if len(cyc) > 2 and cyc[-1] < cyc[1]:
        cyc = [cyc[0]] + cyc[1:][::-1]
    return tuple(cyc)


def is_chordal(g: Graph):
    """Return a PEO certificate if ``g`` is chordal, else a chordless cycle."""
    visit, _ = mcs(g)
    bad = _find_peo_violation(g, visit)
    if bad is None:
        return PEO(tuple(reversed(visit)))
    v, x, y = bad
    cyc = _cycle_through(g, v, x, y)
    if cyc is None or not verify_certificate(g, ChordlessCycle(cyc)):
        cyc = _search_chordless_cycle(g)
    cert = ChordlessCycle(canonical_cycle(cyc))
    if not verify_certificate(g, cert):
        raise AssertionError("chordless cycle extraction produced an invalid witness")
    return cert


# -- distances, powers, trees ------------------------------------------------------

def bfs_distances(g: Graph, source: int, limit: int | None = None) -> dict:
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        if limit is not None and dist[u] >= limit:
            continue
        for w in g.adj[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def distance(g: Graph, v: int, w: int):
    """Shortest-path length, ``math.inf`` when v and w are disconnected."""
    if not (0 <= v < g.n and 0 <= w < g.n):
        raise IndexError("vertex out of range")
    return bfs_distances(g, v).get(w, math.inf)


def graph_power(g: Graph, n: int) -> Graph:
    """Graph on the same vertices with an edge wherever 1 <= d(v, w) <= n."""
    if n < 1:
        raise ValueError("power must be positive")
    adj = []
    for v in range(g.n):
        d = bfs_distances(g, v, limit=n)
        adj.append({w for w in d if w != v})
    return Graph(g.n, adj=adj)


def connected_components(g: Graph) -> list:
    seen = [False] * g.n
    comps = []
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = True
        comp = [s]
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in g.adj[u]:
                if not seen[w]:
                    seen[w] = True
                    comp.append(w)
                    queue.append(w)
        comps.append(sorted(comp))
    return comps


def is_tree(g: Graph) -> bool:
    if g.n == 0:
        return False
    return g.num_edges == g.n - 1 and len(bfs_distances(g, 0)) == g.n


# -- cliques ---------------------------------------------------------------------

def _chordal_cliques(g: Graph, visit: tuple, labels: tuple) -> list:
    # For an MCS order, a new maximal clique starts exactly when the label
    # fails to increase (Blair & Peyton).
    vidx = {v: k for k, v in enumerate(visit)}
    cliques = []
    current: list = []
    prev_label = -1
    for v, lab in zip(visit, labels):
        if lab <= prev_label:
            cliques.append(current)
            current = [u for u in g.adj[v] if vidx[u] < vidx[v]]
        current.append(v)
        prev_label = lab
    if current:
        cliques.append(current)
    return cliques


def _bron_kerbosch(g: Graph, cap: int) -> list:
    out = []
    stack = [(set(), set(range(g.n)), set())]
    while stack:
        r, p, x = stack.pop()
        if not p and not x:
            out.append(sorted(r))
            if len(out) > cap:
                raise CliqueCapExceeded(f"more than {cap} maximal cliques")
            continue
        if not p:
            continue
        pivot = max(p | x, key=lambda u: len(g.adj[u] & p))
        for v in sorted(p - g.adj[pivot]):
            stack.append((r | {v}, p & g.adj[v], x & g.adj[v]))
            p = p - {v}
            x = x | {v}
    return out


def maximal_cliques(g: Graph, cap: int = DEFAULT_CLIQUE_CAP) -> list:
    """All maximal cliques as sorted tuples, in sorted order.

    Chordal graphs are handled from the MCS order (at most n cliques);
    otherwise Bron-Kerbosch with pivoting, raising CliqueCapExceeded past
    ``cap`` cliques.
    """
    if g.n == 0:
        return []
    visit, labels = mcs(g)
    if _find_peo_violation(g, visit) is None:
        cliques = _chordal_cliques(g, visit, labels)
    else:
        cliques = _bron_kerbosch(g, cap)
    if len(cliques) > cap:
        raise CliqueCapExceeded(f"more than {cap} maximal cliques")
    return sorted(tuple(sorted(c)) for c in cliques)
