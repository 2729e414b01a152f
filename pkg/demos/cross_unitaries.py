"""
Unitary data on a cross
=======================

C_k0 = U1^k and C_0l = U2^l on a cross in Z^2.  Going around the unit
square in the two possible ways forces C_11 to equal both U1 U2 and U2 U1,
so an extension exists only when the unitaries commute.
"""

import numpy as np

from chordal_extend import extend as E

X = np.array([[0, 1], [1, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)

cert = E.certify_cross_counterexample(X, Z)
print("via (1,0):\n", cert.forced_via_10.real)
print("via (0,1):\n", cert.forced_via_01.real)
print("difference norm", cert.difference, "extendable:", cert.extendable)

# commuting unitaries: the product C_kl = U1^k U2^l is a witness
D1 = np.diag(np.exp(1j * np.array([0.3, 1.7])))
D2 = np.diag(np.exp(1j * np.array([2.2, -0.4])))
cert = E.certify_cross_counterexample(D1, D2)
print("commuting: difference", cert.difference, "witness min eigenvalue", cert.witness_min_eig)

# scalar data always extends, by multiplying the two atomic measures
h = [1.0, 0.5, 0.1]
v = [1.0, 0.3j, -0.2]
grid = E.cross_scalar_extend(h, v, window=(2, 2))
print("c_kl on [-2,2]^2:\n", np.round(grid, 3))
