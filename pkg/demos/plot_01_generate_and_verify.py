"""
Generating and checking stable data
===================================

Seeded generation of enhanced data, the nine residuals, the two stability
conditions and the gauge action.
"""

import numpy as np

from adhm_lab import DimVector, GaugeElement, act, generate_stable, residuals
from adhm_lab.stability import destabilizer_search, is_stable
from adhm_lab.datum import StabilityParameter

dims = DimVector(2, 3, 1)
X = generate_stable(dims, seed=0)

# every residual is a Frobenius norm; all nine sit at rounding level
for name, value in residuals(X).items():
    print(f"{name:>8}  {value:.2e}")

# F is injective and Im I generates V under A and B
print(is_stable(X))

# a random gauge element moves the matrices but not the equations
g = GaugeElement.random(dims, np.random.default_rng(1))
Y = act(g, X)
print("max residual after gauge:", max(residuals(Y).values()))

# kill F: the kernel of F is now a destabilizing subrepresentation
theta = StabilityParameter.default_chamber(dims)
bad = X.replace(F=np.zeros_like(X.F))
cert = destabilizer_search(bad, theta).certificate
print("certificate type", cert.type, "slope", cert.slope)
