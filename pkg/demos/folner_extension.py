"""
Extending by completion and Følner averaging
============================================

On a window of the group the kernel (x, y) -> phi(x^-1 y) is only known on
the Cayley pattern.  When that pattern is chordal the central completion
fills it in; averaging the completed kernel over a Følner set gives a
candidate Phi_F that agrees with phi on S.
"""

from chordal_extend import extend as E
from chordal_extend import fixtures

# Z with phi(±1) = 0.5: the completion is the geometric sequence 0.5^|k|
data = fixtures.z_strip_data(0.5)
K = E.extend_on_window(data, 4)
print("K(0, k):", [round(float(K.entry((0,), (k,))[0, 0].real), 4) for k in range(5)])

# a report over Følner sizes on the infinite dihedral group
data = fixtures.dihedral_data()
rep = E.extension_report(data, radii=[1, 2], Ns=[2, 4, 8], test_set=["abab"])
for cell in rep.cells:
    print(f"radius {cell['radius']} N {cell['N']:>2}: window {cell['window_size']:>3}, "
          f"Gram min eig {cell['gram_min_eig']:.4f}, dev on S {cell['max_dev_on_S']:.1e}")
print("nondecreasing:", rep.trend_nondecreasing(1), rep.trend_nondecreasing(2))
