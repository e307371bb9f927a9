"""
Monad pencil and the support of the quotient sheaf
==================================================

For a stable datum the map ``beta(x, y, 1)`` is surjective everywhere.  The
support of ``F/E`` is the joint spectrum of ``(-A', -B')``; a brute-force
scan of the pencil ``[-B' - y, A' + x]`` finds the same points.
"""

import numpy as np

from adhm_lab import DimVector, generate_stable
from adhm_lab import moduli_maps as mm

X = generate_stable(DimVector(1, 3, 1), seed=2)
M = mm.MonadPencil(X.adhm_part())
rng = np.random.default_rng(0)
ranks = {mm.monad_ranks(M, (complex(*rng.standard_normal(2)), complex(*rng.standard_normal(2)), 1.0))[1]
         for _ in range(50)}
print("rank of beta over 50 random points:", ranks)

supp = mm.quotient_support(X)
scan = mm.pencil_scan_support(X.Aprime, X.Bprime)
print("support  ", supp.to_dict())
print("scan     ", scan.to_dict())
print("agree to 1e-6:", scan.matches(supp, 1e-6))
