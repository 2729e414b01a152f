"""
A partially positive definite function on Z^2 with no extension
================================================================

The data lives on Z^2 minus {(1,1), (-1,-1)}: phi(0,0) = I, phi(1,0) = E21,
phi(0,1) = E12 and zero elsewhere.  Three-point Gram matrices pin down
Phi(1,1) and then Phi(2,1), which clashes with the prescribed zero.
"""

import numpy as np

from chordal_extend import cayley as CY
from chordal_extend import extend as E
from chordal_extend.graphs import is_chordal

data = E.z2_counterexample_data()

# the Cayley graph already fails to be chordal on the box [-1,1]^2
w = CY.box(data.spec, 1)
cert = is_chordal(CY.cayley_graph(data.spec, data.S, w))
print("chordless cycle:", [w.elements[i] for i in cert.cycle])

# every clique Gram matrix on a radius-3 window is PSD, so phi is partially PD
cert = E.certify_z2_counterexample()
print("partially PD on", cert.pd_check.n_cliques, "cliques:", cert.pd_check.ok)

# two balls for Phi(1,1) meet in a single point
print("first ball radii:", np.round(np.diag(cert.ball_first.left_radius).real, 3),
      np.round(np.diag(cert.ball_first.right_radius).real, 3))
print("forced Phi(1,1) =\n", np.round(cert.forced_11.real, 12))

# and that value forces Phi(2,1)
print("forced Phi(2,1) =\n", np.round(cert.forced_21.real, 12))
print("contradiction with phi(2,1) = 0:", cert.contradiction)
