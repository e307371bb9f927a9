"""
Where the two-form degenerates
==============================

On ``H^1`` at type ``(1, 2, 1)`` the two-form has full rank exactly when
``A`` and ``B`` are diagonalizable.  The scan samples each stratum and
histograms the numerical rank.
"""

from adhm_lab import DimVector, generate_stable
from adhm_lab import geometry as geo

D = DimVector(1, 2, 1)
rows, flagged = geo.degeneracy_scan(D, samples=10, seed=0)
print(geo.scan_csv(rows))

om = geo.omega_on_h1(generate_stable(D, 0, "jordan"))
print("jordan sample: rank", om.numerical_rank, "of", om.h1, "descent residual %.1e" % om.welldef_residual)

# one size up there is no stated expectation; report what we see
print("(1,3,1) diagonal rank:", geo.omega_on_h1(generate_stable(DimVector(1, 3, 1), 0, "diagonal")).numerical_rank)
