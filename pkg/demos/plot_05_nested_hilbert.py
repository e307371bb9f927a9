"""
Nested point configurations in the plane
========================================

With ``r = 1`` an enhanced datum is a nested pair ``Z1 in Z2`` of reduced
point sets.  Stability forces ``J = 0``.
"""

from adhm_lab import moduli_maps as mm
from adhm_lab.stability import is_stable

Z1 = mm.PointConfiguration.simple([(0, 0)])
Z2 = mm.PointConfiguration.simple([(0, 0), (1, 2), (-1j, 0.5)])
X = mm.nested_hilbert_datum(Z1, Z2)
print("type", X.dims.as_tuple(), "stable:", is_stable(X).verdict, "J =", X.J.ravel())
print("A diagonal:", X.A.diagonal())

W1, W2 = mm.nested_hilbert_points(X)
print("recovered Z1:", W1.sorted().coords())
print("recovered Z2:", W2.sorted().coords())
