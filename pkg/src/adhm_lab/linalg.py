"""Numerical rank, kernels and subspace helpers shared by every module.

All rank decisions go through :func:`numerical_rank`, which cuts the
singular values at ``rtol * sigma_max * max(m, n)`` and reports the gap
ratio at the cut so callers can judge how trustworthy the decision is.
"""

from dataclasses import dataclass

import numpy as np

DEFAULT_RTOL = 1e-9
GAP_MIN = 1e3


@dataclass(frozen=True)
class RankInfo:
    """Outcome of a thresholded rank decision.

    ``gap`` is ``s[rank-1] / s[rank]`` (inf when nothing was cut or nothing
    was kept and the matrix is exactly zero).
    """

    rank: int
    gap: float
    threshold: float
    singular_values: tuple

    @property
    def reliable(self):
        return self.gap >= GAP_MIN


def singular_values(M):
    M = np.asarray(M)
    if M.size == 0:
        return np.zeros(0)
    return np.linalg.svd(M, compute_uv=False)


def _cut(s, shape, rtol):
    if s.size == 0:
        return 0, np.inf, 0.0
    smax = s[0]
    thresh = rtol * smax * max(shape)
    if smax == 0.0:
        return 0, np.inf, 0.0
    rank = int(np.sum(s > thresh))
    if rank == len(s):
        gap = np.inf
    elif rank == 0:
        gap = np.inf
    else:
        gap = s[rank - 1] / s[rank] if s[rank] > 0 else np.inf
    return rank, float(gap), float(thresh)


def numerical_rank(M, rtol=DEFAULT_RTOL):
    """Thresholded rank of ``M`` with the singular-value gap at the cut."""
    M = np.asarray(M)
    s = singular_values(M)
    rank, gap, thresh = _cut(s, M.shape, rtol)
    return RankInfo(rank, gap, thresh, tuple(float(x) for x in s))


def null_space(M, rtol=DEFAULT_RTOL):
    """Orthonormal basis (columns) of the numerical kernel of ``M``."""
    M = np.asarray(M, dtype=complex)
    m, n = M.shape
    if n == 0:
        return np.zeros((0, 0), dtype=complex)
    if m == 0:
        return np.eye(n, dtype=complex)
    _, s, vh = np.linalg.svd(M, full_matrices=True)
    rank, _, _ = _cut(s, M.shape, rtol)
    return vh[rank:].conj().T


def range_basis(M, rtol=DEFAULT_RTOL):
    """Orthonormal basis (columns) of the numerical column space of ``M``."""
    M = np.asarray(M, dtype=complex)
    m, n = M.shape
    if m == 0 or n == 0:
        return np.zeros((m, 0), dtype=complex)
    u, s, _ = np.linalg.svd(M, full_matrices=False)
    rank, _, _ = _cut(s, M.shape, rtol)
    return u[:, :rank]


def orth_complement(Q, n=None):
    """Orthonormal basis of the orthogonal complement of ``span(Q)``.

    ``Q`` must already have orthonormal columns.
    """
    Q = np.asarray(Q, dtype=complex)
    n = Q.shape[0] if n is None else n
    if Q.shape[1] == 0:
        return np.eye(n, dtype=complex)
    P = np.eye(n, dtype=complex) - Q @ Q.conj().T
    u, _, _ = np.linalg.svd(P)
    k = n - Q.shape[1]
    return u[:, :k]


def subspace_dim(vectors, rtol=DEFAULT_RTOL):
    return numerical_rank(vectors, rtol).rank if np.size(vectors) else 0


def fro(M):
    M = np.asarray(M)
    return float(np.linalg.norm(M)) if M.size else 0.0


def vec(M):
    """Column-major flattening, the canonical vectorization."""
    return np.asarray(M).reshape(-1, order="F")


def unvec(v, shape):
    return np.asarray(v).reshape(shape, order="F")


def random_complex(rng, shape, scale=1.0):
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def charpoly(M):
    """Characteristic polynomial coefficients (monic, highest degree first)."""
    M = np.asarray(M)
    if M.shape[0] == 0:
        return np.ones(1, dtype=complex)
    return np.poly(M).astype(complex)
