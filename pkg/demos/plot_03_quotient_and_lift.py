"""
Forgetting the subsheaf and lifting back
========================================

``quotient_rep`` induces a plain datum on ``V / Im F``.  ``fiber_lift`` goes
the other way: it solves a linear system for the off-diagonal blocks of a
datum over a given base with prescribed ``(A', B')``.
"""

import numpy as np

from adhm_lab import moduli_maps as mm
from adhm_lab.generation import conjugate_adhm, random_stable_adhm

rng = np.random.default_rng(3)
X2 = conjugate_adhm(random_stable_adhm(2, 2, rng), rng)

alpha, beta = 0.4 + 0.1j, -0.3j
print("dim ker L =", mm.lift_kernel_dim(X2, [[alpha]], [[beta]]),
      "analytic", mm.lift_kernel_count((2, 2), 1))

X = mm.fiber_lift(X2, [[alpha]], [[beta]], seed=0)
print("lifted type", X.dims.as_tuple())

# the quotient of the lift agrees with the base up to gauge
Q = mm.quotient_rep(X)
print("fingerprint deviation", mm.fingerprint_distance(mm.adhm_fingerprint(Q), mm.adhm_fingerprint(X2)))
