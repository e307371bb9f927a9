"""
Tangent spaces from the deformation complex
===========================================

The cohomology of the four-term complex at a stable point is concentrated in
degree one, with dimension ``2rc - r + 1`` for ``c' = 1``.
"""

from adhm_lab import DimVector, generate_stable
from adhm_lab import deformation as dfm

for dims in [(1, 1, 1), (1, 2, 1), (2, 3, 1), (3, 2, 1)]:
    X = generate_stable(DimVector(*dims), seed=4)
    K = dfm.build_complex(X, "reduced")
    co = dfm.cohomology_dims(K)
    r, c, _ = dims
    print(dims, "terms", co.term_dims, "h", co.h, "expected h1", 2 * r * c - r + 1,
          "smallest gap %.1e" % min(co.gaps))

# the general complex keeps the End V' summand; its ends still vanish
X = generate_stable(DimVector(2, 3, 2), seed=0)
print("(2,3,2) general:", dfm.cohomology_dims(dfm.build_complex(X, "general")).h)

# stable points have no infinitesimal stabilizer
print("stabilizer dim:", dfm.stabilizer_dim(X))
