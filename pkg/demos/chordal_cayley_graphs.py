"""
Which Cayley graphs are chordal?
================================

Strips |g(x)| < r are chordal for integer morphisms g, and a symmetric set
spanning Z^2 always contains a long chordless cycle.
"""

from chordal_extend import cayley as CY
from chordal_extend import groups as G
from chordal_extend.graphs import is_chordal

Z2 = G.int_lattice(2)
H = G.heisenberg()
for spec, S in [(Z2, G.Strip(G.Morphism((1, 1)), 2)),
                (H, G.Strip(G.Morphism((1, 0)), 2)),
                (Z2, G.Cross(1, 1))]:
    w = CY.ball(spec, 3)
    cert = is_chordal(CY.cayley_graph(spec, S, w))
    print(spec.kind, type(S).__name__, "chordal" if cert.chordal else f"cycle {cert.cycle}")

# a polygon of steps in the directions of S
cyc = CY.lulu_cycle(G.Cross(1, 1).points())
print("polygon cycle of length", len(cyc.points), ":", cyc.points)

# Følner ratios shrink on amenable groups and stay large on F2
for N in (2, 4, 8, 16):
    print(N, round(CY.folner_ratio(Z2, Z2.generators, CY.folner_set(Z2, N)), 4))
F2 = G.free_group(2)
print("F2 ball ratio r=5:", CY.folner_ratio(F2, F2.generators, CY.ball(F2, 5).elements))
