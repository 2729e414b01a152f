"""
Atoms of a positive Toeplitz matrix
===================================

A PSD Toeplitz matrix is a positive combination of rank-one Toeplitz
matrices built from points on the unit circle.
"""

import numpy as np

from chordal_extend import extend as E

true_atoms = [(0.5, 0.4), (0.3, 2.1), (0.2, 5.0)]
c = E.atoms_moments(true_atoms, 4)
atoms, roots = E.cf_decompose(c, return_roots=True)
for w, a in atoms:
    print(f"weight {w:.6f} at angle {a:.6f}")
print("distance of roots from the circle:", np.max(np.abs(1 - np.abs(roots))))

# a full-rank example needs one extra moment on the boundary of its ball
c = [1.0, 0.2, -0.1]
atoms = E.cf_decompose(c)
print(len(atoms), "atoms; residual",
      np.max(np.abs(E.atoms_moments(atoms, 2) - np.asarray(c))))
