"""Finite windows of Cayley graphs, Folner sets and the Z^2 polygon cycles."""
from __future__ import annotations

import itertools
import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import groups as G
from .graphs import ChordlessCycle, Graph, verify_certificate


class WindowError(ValueError):
    pass


class PolygonHasChord(ValueError):
    def __init__(self, N, chord):
        super().__init__(f"polygon with N={N} has the chord {chord}; use a larger N")
        self.N, self.chord = N, chord


@dataclass(frozen=True)
class Window:
    """Finite list of distinct group elements; index <-> element bijection."""

    elements: tuple
    radius: int | None = None
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        elements = tuple(self.elements)
        object.__setattr__(self, "elements", elements)
        index = {x: k for k, x in enumerate(elements)}
        if len(index) != len(elements):
            raise WindowError("window elements must be distinct")
        object.__setattr__(self, "_index", index)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x):
        return x in self._index

    def index(self, x) -> int:
        try:
            return self._index[x]
        except KeyError:
            raise WindowError(f"{x!r} is not in the window") from None

    def to_json(self, spec: G.GroupSpec) -> list:
        return [G.element_to_json(spec, x) for x in self.elements]


def ball(spec: G.GroupSpec, radius: int, cap: int = G.DEFAULT_RADIUS_CAP) -> Window:
    """All elements of word length <= radius, in BFS (then canonical) order."""
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    if radius > cap:
        raise G.RadiusCapExceeded(f"radius {radius} exceeds cap {cap}")
    layers = G.ball_layers(spec, radius)
    return Window(tuple(x for layer in layers for x in layer), radius=radius)


def box(spec: G.GroupSpec, r: int) -> Window:
    """The cube [-r, r]^d in Z^d, lexicographic order."""
    if spec.kind != G.INT_LATTICE:
        raise G.IncompatibleKind("box windows are only defined for Z^d")
    pts = itertools.product(range(-r, r + 1), repeat=spec.d)
    return Window(tuple(pts))


def window_from(spec: G.GroupSpec, elements) -> Window:
    """Canonically sorted window on the given elements (duplicates dropped)."""
    elems = {G.check_element(spec, x) for x in elements}
    return Window(tuple(sorted(elems, key=lambda z: G.sort_key(spec, z))))


def cayley_graph(spec: G.GroupSpec, S: G.SymmetricSet, w: Window) -> Graph:
    """Induced subgraph of Gamma(G, S) on the window: i ~ j iff x_i^-1 x_j in S."""
    S.check(spec)
    n = len(w)
    elems = w.elements
    if spec.kind in (G.INT_LATTICE, G.HEISENBERG) and n > 64:
        arr = G.elements_to_array(spec, elems)
        probe = S.contains_array(spec, arr[:1])
        if probe is not None:
            adj = []
            for i, x in enumerate(elems):
                mask = S.contains_array(spec, G.quotients_array(spec, x, arr))
                mask[i] = False
                adj.append(np.flatnonzero(mask).tolist())
            return Graph(n, adj=adj)
    cache: dict = {}
    inv = [G.inverse(spec, x) for x in elems]
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            q = G.multiply(spec, inv[i], elems[j])
            hit = cache.get(q)
            if hit is None:
                hit = cache[q] = S.contains(spec, q)
            if hit:
                edges.append((i, j))
    return Graph(n, edges)


def _neighbour_fn(spec, S, w):
    """Row-wise adjacency oracle i -> boolean mask over the window, or None."""
    if spec.kind not in (G.INT_LATTICE, G.HEISENBERG) or len(w) == 0:
        return None
    arr = G.elements_to_array(spec, w.elements)
    if S.contains_array(spec, arr[:1]) is None:
        return None

    def row(i):
        mask = S.contains_array(spec, G.quotients_array(spec, w.elements[i], arr))
        mask[i] = False
        return mask

    return row


def cayley_components(spec: G.GroupSpec, S: G.SymmetricSet, w: Window) -> list:
    """Connected components of the window's Cayley graph as ``(indices, complete)``.

    For integer-encoded groups this never materialises the edge set, which
    matters for thick sets such as Heisenberg strips whose components are
    large cliques.
    """
    S.check(spec)
    row = _neighbour_fn(spec, S, w)
    if row is None:
        from .graphs import connected_components
        g = cayley_graph(spec, S, w)
        return [(comp, all(len(g.adj[v]) == len(comp) - 1 for v in comp))
                for comp in connected_components(g)]
    n = len(w)
    unseen = np.ones(n, dtype=bool)
    out = []
    for s in range(n):
        if not unseen[s]:
            continue
        unseen[s] = False
        members, frontier, degrees = [s], [s], {}
        while frontier:
            v = frontier.pop()
            mask = row(v)
            degrees[v] = int(mask.sum())
            nb = np.flatnonzero(mask & unseen)
            unseen[nb] = False
            members.extend(nb.tolist())
            frontier.extend(nb.tolist())
        members.sort()
        # a component's degrees are inside it, so complete iff all equal size - 1
        out.append((members, all(degrees[v] == len(members) - 1 for v in members)))
    return out


# -- cycle <-> product view -------------------------------------------------------

def cycle_labels(spec: G.GroupSpec, cycle: Sequence) -> list:
    """Edge labels xi_k = g_k^-1 g_{k+1} (cyclically) of a closed walk."""
    k = len(cycle)
    return [G.quotient(spec, cycle[i], cycle[(i + 1) % k]) for i in range(k)]


def product_cycle_check(spec: G.GroupSpec, S: G.SymmetricSet, xi: Sequence) -> bool:
    """True iff some cyclically consecutive product xi_i xi_{i+1} lies in S.

    With xi_k = g_k^-1 g_{k+1}, the product xi_k xi_{k+1} is the label of the
    pair {g_k, g_{k+2}}, so a True answer means the cycle has a chord joining
    two vertices at distance two along it.
    """
    S.check(spec)
    xi = [G.check_element(spec, x) for x in xi]
    if len(xi) < 4:
        raise ValueError("need at least 4 labels")
    for x in xi:
        if not S.contains(spec, x):
            raise ValueError(f"label {x!r} is not in S")
    if G.product(spec, xi) != G.identity(spec):
        raise ValueError("labels do not multiply to the identity")
    n = len(xi)
    return any(S.contains(spec, G.multiply(spec, xi[i], xi[(i + 1) % n])) for i in range(n))


def remark23_check(spec: G.GroupSpec, Lambda: Sequence, length_cap: int = 8) -> bool:
    """Sufficient condition for chordality of Gamma(G, Lambda Lambda^-1).

    Checks (a) that no product of at most ``length_cap`` non-identity elements
    of Lambda equals e, and (b) that Lambda Lambda^-1 = Lambda u Lambda^-1.
    Condition (a) is only tested up to ``length_cap``, so a True answer is a
    bounded semi-decision.
    """
    lam = {G.check_element(spec, x) for x in Lambda}
    e = G.identity(spec)
    if e not in lam:
        raise ValueError("Lambda must contain the identity")
    nonid = sorted(lam - {e}, key=lambda z: G.sort_key(spec, z))
    level = set(nonid)
    for _ in range(length_cap):
        if e in level:
            return False
        level = {G.multiply(spec, p, x) for p in level for x in nonid}
    inv = {G.inverse(spec, x) for x in lam}
    quotients = {G.multiply(spec, x, G.inverse(spec, y)) for x in lam for y in lam}
    return quotients == lam | inv


# -- Folner sets --------------------------------------------------------------------

@dataclass(frozen=True)
class FolnerSet:
    N: int
    elements: tuple

    def __len__(self):
        return len(self.elements)

    def to_json(self, spec: G.GroupSpec) -> dict:
        return {"N": self.N, "elements": [G.element_to_json(spec, x) for x in self.elements]}


def folner_set(spec: G.GroupSpec, N: int) -> FolnerSet:
    """Standard Folner sets.

    Z^d: the box [0, N)^d.  Infinite dihedral: reduced words of length < N.
    Heisenberg: 0 <= m, n < N and 0 <= p < N^2.
    """
    if N < 1:
        raise ValueError("N must be positive")
    if spec.kind == G.FREE_GROUP:
        raise ValueError("free groups are not amenable; no Folner sets")
    if spec.kind == G.INT_LATTICE:
        elems = tuple(itertools.product(range(N), repeat=spec.d))
    elif spec.kind == G.HEISENBERG:
        elems = tuple((m, n, p) for m in range(N) for n in range(N) for p in range(N * N))
    else:
        words = [""]
        for length in range(1, N):
            for start in "ab":
                other = "b" if start == "a" else "a"
                words.append("".join(start if k % 2 == 0 else other for k in range(length)))
        elems = tuple(words)
    return FolnerSet(N, elems)


def folner_ratio(spec: G.GroupSpec, F: Sequence, K) -> float:
    """card(K symmetric-difference FK) / card(K) with FK = {f k}."""
    k_elems = K.elements if isinstance(K, FolnerSet) else tuple(K)
    if not F or not k_elems:
        raise ValueError("F and K must be nonempty")
    kset = set(k_elems)
    fk = {G.multiply(spec, f, k) for f in F for k in k_elems}
    return len(kset ^ fk) / len(kset)


def sphere_profile(spec: G.GroupSpec, rmax: int, cap: int = G.DEFAULT_RADIUS_CAP) -> list:
    if rmax > cap:
        raise G.RadiusCapExceeded(f"radius {rmax} exceeds cap {cap}")
    return [len(layer) for layer in G.ball_layers(spec, rmax)]


# -- polygon cycles in Z^2 -------------------------------------------------------------

class LuluCycle(NamedTuple):
    points: tuple
    N: int
    directions: tuple


def direction_representatives(S: Sequence) -> list:
    """Longest element of S on each ray from the origin, sorted by argument."""
    best: dict = {}
    for s in S:
        a, b = s
        if a == 0 and b == 0:
            continue
        g = math.gcd(abs(a), abs(b))
        ray = (a // g, b // g)
        if ray not in best or g > best[ray]:
            best[ray] = g
    reps = [(r[0] * g, r[1] * g) for r, g in best.items()]
    reps.sort(key=lambda v: math.atan2(v[1], v[0]) % (2 * math.pi))
    return reps


def _polygon(reps: list, N: int) -> tuple:
    pts = [(0, 0)]
    x, y = 0, 0
    for s in reps:
        for _ in range(N):
            x, y = x + s[0], y + s[1]
            pts.append((x, y))
    if pts[-1] != (0, 0):
        raise AssertionError("polygon does not close")
    return tuple(pts[:-1])


def _polygon_graph(points: tuple, Sset: frozenset) -> Graph:
    k = len(points)
    return Graph(k, [(i, j) for i in range(k) for j in range(i + 1, k)
                     if (points[j][0] - points[i][0], points[j][1] - points[i][1]) in Sset])


def _chordless_in_z2(points: tuple, Sset: frozenset) -> bool:
    return verify_certificate(_polygon_graph(points, Sset), ChordlessCycle(tuple(range(len(points)))))


def lulu_cycle(S: Sequence, N: int | str = "auto", max_N: int = 2 ** 10) -> LuluCycle:
    """Chordless polygon cycle in Gamma(Z^2, S) for a finite symmetric spanning S.

    Walk N steps along each longest direction representative, in order of
    argument.  With ``N="auto"`` the walk length starts at 2 and doubles until
    the cycle verifies chordless.
    """
    pts = {G.check_element(G.int_lattice(2), s) for s in S}
    if (0, 0) not in pts:
        raise ValueError("S must contain 0")
    if any((-a, -b) not in pts for a, b in pts):
        raise ValueError("S must be symmetric")
    nonzero = [p for p in pts if p != (0, 0)]
    if np.linalg.matrix_rank(np.array(nonzero or [(0, 0)], dtype=float)) < 2:
        raise ValueError("S does not span Z^2")
    reps = direction_representatives(sorted(pts))
    Sset = frozenset(pts)
    if N != "auto":
        N = int(N)
        if N < 1:
            raise ValueError("N must be positive")
        cyc = _polygon(reps, N)
        if not _chordless_in_z2(cyc, Sset):
            k = len(cyc)
            chord = next((i, j) for i, j in _polygon_graph(cyc, Sset).edges()
                         if (j - i) % k not in (1, k - 1))
            raise PolygonHasChord(N, (cyc[chord[0]], cyc[chord[1]]))
        return LuluCycle(cyc, N, tuple(reps))
    N = 2
    while N <= max_N:
        cyc = _polygon(reps, N)
        if _chordless_in_z2(cyc, Sset):
            return LuluCycle(cyc, N, tuple(reps))
        N *= 2
    raise RuntimeError(f"no chordless polygon found up to N={max_N} for directions {reps}")
