"""Cayley windows, the product view of cycles, Folner sets and polygon cycles."""
import itertools
import random

import pytest

from chordal_extend import cayley as CY
from chordal_extend import groups as G
from chordal_extend.graphs import ChordlessCycle, Graph, is_chordal, verify_certificate

Z1, Z2 = G.int_lattice(1), G.int_lattice(2)
Z2_MINUS = G.ExcludedPairs(G.WholeGroup(), [(1, 1)])
KNOWN_CYCLE = [(0, 0), (0, 1), (1, 1), (-1, 0)]


def chordless_4cycles(g):
    """All chordless 4-cycles of g, as vertex 4-tuples, by enumeration."""
    found = set()
    for quad in itertools.combinations(range(g.n), 4):
        for a, b, c, d in itertools.permutations(quad):
            if a != min(quad) or b > d:
                continue
            if (g.has_edge(a, b) and g.has_edge(b, c) and g.has_edge(c, d) and g.has_edge(d, a)
                    and not g.has_edge(a, c) and not g.has_edge(b, d)):
                found.add((a, b, c, d))
    return found


# -- windows ---------------------------------------------------------------------

def test_ball_examples():
    assert set(CY.ball(Z1, 2)) == {(-2,), (-1,), (0,), (1,), (2,)}
    assert set(CY.ball(G.infinite_dihedral(), 2)) == {"", "a", "b", "ab", "ba"}
    assert set(CY.ball(G.free_group(2), 1)) == {"", "x", "X", "y", "Y"}
    assert CY.ball(Z2, 3).elements[0] == (0, 0)


def test_ball_cap():
    with pytest.raises(G.RadiusCapExceeded):
        CY.ball(Z2, 10, cap=5)


def test_window_index():
    w = CY.ball(Z2, 1)
    for k, x in enumerate(w):
        assert w.index(x) == k
    with pytest.raises(CY.WindowError):
        w.index((5, 5))
    with pytest.raises(CY.WindowError):
        CY.Window(((0, 0), (0, 0)))


@pytest.mark.parametrize("spec", [Z2, G.heisenberg(), G.infinite_dihedral(), G.free_group(2)],
                         ids=lambda s: s.kind)
def test_balls_closed_under_inverse(spec):
    w = CY.ball(spec, 3)
    assert G.identity(spec) in w
    assert all(G.inverse(spec, x) in w for x in w)


# -- Cayley graphs --------------------------------------------------------------------

def test_z_band():
    S = G.Strip(G.Morphism((1,)), 2)
    w = CY.box(Z1, 3)
    g = CY.cayley_graph(Z1, S, w)
    assert sorted(g.edges()) == [(i, i + 1) for i in range(6)]


def test_known_cycle_in_z2_minus():
    w = CY.box(Z2, 1)
    g = CY.cayley_graph(Z2, Z2_MINUS, w)
    cert = is_chordal(g)
    assert not cert.chordal and verify_certificate(g, cert)
    idx = tuple(w.index(p) for p in KNOWN_CYCLE)
    assert verify_certificate(g, ChordlessCycle(idx))
    canon = (idx[0], idx[1], idx[2], idx[3])
    rotations = {canon[k:] + canon[:k] for k in range(4)}
    rotations |= {tuple(reversed(r)) for r in rotations}
    assert rotations & chordless_4cycles(g)


def test_cross_window_not_chordal():
    w = CY.box(Z2, 2)
    g = CY.cayley_graph(Z2, G.Cross(2, 2), w)
    cert = is_chordal(g)
    assert not cert.chordal and verify_certificate(g, cert)


@pytest.mark.parametrize("spec,S", [
    (Z2, Z2_MINUS), (Z2, G.Cross(2, 1)), (Z2, G.LengthBall(2)),
    (G.heisenberg(), G.Strip(G.Morphism((1, 1)), 2)),
    (G.infinite_dihedral(), G.LengthBall(2)), (G.free_group(2), G.LengthBall(2)),
])
def test_nested_windows_induce(spec, S):
    small, big = CY.ball(spec, 2), CY.ball(spec, 3)
    g_small = CY.cayley_graph(spec, S, small)
    g_big = CY.cayley_graph(spec, S, big)
    assert g_small == g_big.induced([big.index(x) for x in small])
    for i, j in g_big.edges():
        assert g_big.has_edge(j, i)


def test_vectorised_path_matches_loop():
    # radius 4 is large enough for the numpy path
    spec, S = G.heisenberg(), G.Strip(G.Morphism((1, -1)), 2)
    w = CY.ball(spec, 4)
    assert len(w) > 64
    g = CY.cayley_graph(spec, S, w)
    for i, j in itertools.combinations(range(len(w)), 2):
        assert g.has_edge(i, j) == S.contains(spec, G.quotient(spec, w.elements[i], w.elements[j]))


@pytest.mark.parametrize("a", [2, 3, 5])
def test_z_strips_chordal(a):
    S = G.Strip(G.Morphism((1,)), a)
    for r in (1, 5, 10, 20):
        assert is_chordal(CY.cayley_graph(Z1, S, CY.ball(Z1, r))).chordal


@pytest.mark.parametrize("coeffs,bound", [((1, 0), 1), ((1, 1), 2)])
def test_heisenberg_strips_chordal(coeffs, bound):
    spec, S = G.heisenberg(), G.Strip(G.Morphism(coeffs), bound)
    for r in (2, 3, 4):
        cert = is_chordal(CY.cayley_graph(spec, S, CY.ball(spec, r)))
        assert cert.chordal


def test_components_flags():
    spec, S = G.heisenberg(), G.Strip(G.Morphism((1, 0)), 1)
    w = CY.ball(spec, 3)
    comps = CY.cayley_components(spec, S, w)
    assert sorted(v for c, _ in comps for v in c) == list(range(len(w)))
    for comp, complete in comps:
        assert complete
        assert len({w.elements[i][0] for i in comp}) == 1
    comps = CY.cayley_components(Z1, G.Strip(G.Morphism((1,)), 2), CY.ball(Z1, 5))
    assert comps == [(list(range(11)), False)]


# -- product view --------------------------------------------------------------------

def test_product_cycle_examples():
    xi = [(0, 1), (1, 0), (0, -1), (-1, 0)]
    assert CY.product_cycle_check(Z2, Z2_MINUS, xi)
    s = (1, 0)
    assert CY.product_cycle_check(Z2, Z2_MINUS, [s, (-1, 0), s, (-1, 0)])
    assert not CY.product_cycle_check(Z2, G.Cross(2, 2), [(1, 0), (0, 1), (-1, 0), (0, -1)])


def test_product_cycle_preconditions():
    with pytest.raises(ValueError):
        CY.product_cycle_check(Z2, Z2_MINUS, [(1, 0), (0, 1), (-1, 0)])
    with pytest.raises(ValueError):
        CY.product_cycle_check(Z2, Z2_MINUS, [(1, 0), (0, 1), (-1, 0), (0, 1)])
    with pytest.raises(ValueError):
        CY.product_cycle_check(Z2, G.Cross(1, 1), [(1, 1), (-1, 0), (0, -1), (0, 0)])


def test_cycle_labels_close():
    labels = CY.cycle_labels(Z2, KNOWN_CYCLE)
    assert G.product(Z2, labels) == (0, 0)
    assert all(Z2_MINUS.contains(Z2, x) for x in labels)


@pytest.mark.parametrize("spec,S,r", [
    (Z2, Z2_MINUS, 1), (Z2, G.Cross(2, 2), 2), (Z2, G.Cross(1, 2), 2),
    (G.heisenberg(), G.LengthBall(1), 1),
])
def test_product_view_matches_chordless_4cycles(spec, S, r):
    w = CY.box(spec, r) if spec.kind == G.INT_LATTICE else CY.ball(spec, 2)
    g = CY.cayley_graph(spec, S, w)
    chordless = chordless_4cycles(g)
    # every 4-cycle: chordless iff no consecutive label product lies in S
    for quad in itertools.combinations(range(g.n), 4):
        for a, b, c, d in itertools.permutations(quad):
            if a != min(quad) or b > d:
                continue
            if not (g.has_edge(a, b) and g.has_edge(b, c) and g.has_edge(c, d) and g.has_edge(d, a)):
                continue
            xi = CY.cycle_labels(spec, [w.elements[v] for v in (a, b, c, d)])
            assert (not CY.product_cycle_check(spec, S, xi)) == ((a, b, c, d) in chordless)
    cert = is_chordal(g)
    if not cert.chordal:
        xi = CY.cycle_labels(spec, [w.elements[v] for v in cert.cycle])
        assert not CY.product_cycle_check(spec, S, xi)


# -- Lambda criterion ------------------------------------------------------------------

def test_lambda_criterion_examples():
    assert CY.remark23_check(Z1, [(0,), (1,), (2,)])
    assert CY.remark23_check(Z1, [(0,), (2,)])
    assert not CY.remark23_check(Z2, [(0, 0), (1, 0), (0, 1)])
    assert not CY.remark23_check(G.infinite_dihedral(), ["", "a"])
    with pytest.raises(ValueError):
        CY.remark23_check(Z1, [(1,)])


def test_lambda_criterion_gives_chordal():
    rng = random.Random(4)
    hits = 0
    for _ in range(60):
        a = rng.randint(1, 4)
        lam = [(k,) for k in range(a)] + [(rng.randint(0, 6),)]
        if not CY.remark23_check(Z1, lam):
            continue
        hits += 1
        S = G.Explicit({G.quotient(Z1, y, x) for x in lam for y in lam})
        assert is_chordal(CY.cayley_graph(Z1, S, CY.ball(Z1, 12))).chordal
    assert hits > 5


# -- Folner sets -----------------------------------------------------------------------

def test_folner_examples():
    assert len(CY.folner_set(Z2, 3)) == 9
    assert len(CY.folner_set(G.heisenberg(), 2)) == 16
    assert set(CY.folner_set(G.infinite_dihedral(), 3).elements) == {"", "a", "b", "ab", "ba"}
    with pytest.raises(ValueError):
        CY.folner_set(G.free_group(2), 3)
    for spec in (Z2, G.heisenberg(), G.infinite_dihedral()):
        assert G.identity(spec) in CY.folner_set(spec, 4).elements


def test_folner_ratio_examples():
    assert CY.folner_ratio(Z2, Z2.generators, CY.folner_set(Z2, 10)) == pytest.approx(0.4)
    assert CY.folner_ratio(Z2, [(0, 0)], CY.folner_set(Z2, 7)) == 0.0
    fg = G.free_group(2)
    assert CY.folner_ratio(fg, fg.generators, CY.ball(fg, 5).elements) >= 1.0


@pytest.mark.parametrize("spec", [G.int_lattice(1), Z2, G.int_lattice(3), G.heisenberg()],
                         ids=lambda s: f"{s.kind}{s.d or ''}")
def test_folner_decay(spec):
    ratios = [CY.folner_ratio(spec, spec.generators, CY.folner_set(spec, N)) for N in (2, 4, 8, 16)]
    assert all(b < a for a, b in zip(ratios, ratios[1:]))
    assert ratios[-1] < 0.5


def test_free_group_ratios_stay_large():
    fg = G.free_group(2)
    for r in range(2, 7):
        assert CY.folner_ratio(fg, fg.generators, CY.ball(fg, r).elements) >= 1.0


def test_sphere_profiles():
    assert CY.sphere_profile(Z1, 5) == [1, 2, 2, 2, 2, 2]
    assert CY.sphere_profile(G.infinite_dihedral(), 5) == [1, 2, 2, 2, 2, 2]
    assert CY.sphere_profile(G.free_group(2), 4) == [1] + [4 * 3 ** (n - 1) for n in range(1, 5)]


# -- polygon cycles -----------------------------------------------------------------

def _cycle_graph_in_z2(points, S):
    Sset = set(S)
    k = len(points)
    return Graph(k, [(i, j) for i in range(k) for j in range(i + 1, k)
                     if (points[j][0] - points[i][0], points[j][1] - points[i][1]) in Sset])


def test_lulu_cross():
    S = G.Cross(1, 1).points()
    cyc = CY.lulu_cycle(S, N=2)
    assert len(cyc.points) == 8
    assert verify_certificate(_cycle_graph_in_z2(cyc.points, S), ChordlessCycle(tuple(range(8))))


def test_lulu_auto_with_diagonal():
    S = [(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (-1, -1)]
    cyc = CY.lulu_cycle(S)
    k = len(cyc.points)
    assert verify_certificate(_cycle_graph_in_z2(cyc.points, S), ChordlessCycle(tuple(range(k))))


def test_lulu_errors():
    with pytest.raises(ValueError, match="span"):
        CY.lulu_cycle([(0, 0), (2, 0), (-2, 0)])
    with pytest.raises(ValueError, match="symmetric"):
        CY.lulu_cycle([(0, 0), (1, 0), (0, 1), (0, -1)])
    with pytest.raises(ValueError, match="contain 0"):
        CY.lulu_cycle([(1, 0), (-1, 0), (0, 1), (0, -1)])


def random_spanning_set(rng, size):
    while True:
        pts = {(0, 0)}
        while len(pts) < size:
            v = (rng.randint(-3, 3), rng.randint(-3, 3))
            pts |= {v, (-v[0], -v[1])}
        pts = sorted(pts)
        vecs = [p for p in pts if p != (0, 0)]
        if any(a[0] * b[1] - a[1] * b[0] for a in vecs for b in vecs) and len(pts) <= 11:
            return pts


def test_lulu_random_sets():
    # auto mode starts at N = 2; in practice that first polygon already verifies
    rng = random.Random(99)
    sets = [G.Cross(1, 1).points(), G.Cross(2, 2).points()]
    sets += [random_spanning_set(rng, rng.choice([5, 7, 9, 11])) for _ in range(18)]
    for S in sets:
        cyc = CY.lulu_cycle(S)
        k = len(cyc.points)
        assert k >= 4
        assert verify_certificate(_cycle_graph_in_z2(cyc.points, S), ChordlessCycle(tuple(range(k))))
