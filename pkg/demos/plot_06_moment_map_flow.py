"""
Moment maps and the balancing flow
==================================

The complex moment map vanishes on every solution.  The real moment map is
driven to a prescribed level by a descent along the complexified gauge
orbit.  With ``G = 0`` the ``V'`` block has trace ``-|F|^2``, so the zero
level is only approached as ``F`` shrinks; a chamber level is reached.
"""

import numpy as np

from adhm_lab import DimVector, generate_stable
from adhm_lab import geometry as geo
from adhm_lab.datum import StabilityParameter

X = generate_stable(DimVector(1, 2, 1), seed=3)
print("|mu_C| =", geo.moment_map(X).complex_norm())

theta = StabilityParameter.default_chamber(X.dims)
res = geo.balance_flow(X, theta=theta)
print("chamber level:", res.converged, res.iterations, "steps, final %.1e" % res.final_norm)

res0 = geo.balance_flow(X, max_iters=20_000)
print("zero level: final %.1e after %d steps, |F| %.2e -> %.2e"
      % (res0.final_norm, res0.iterations, np.linalg.norm(X.F), np.linalg.norm(res0.datum.F)))

# tangent dimension of the ambient solution space, also at points with G != 0
for dims in [(1, 2, 1), (2, 2, 1)]:
    D = DimVector(*dims)
    print(dims, geo.ambient_tangent_dim(generate_stable(D, 0)).dimension,
          geo.ambient_tangent_dim(geo.ambient_point(D, np.random.default_rng(1))).dimension)
