"""The deformation complex of an enhanced ADHM datum.

Term spaces (``W = C^r``, ``V = C^c``, ``V' = C^{c'}``)::

    C0 = End V + End V'
    C1 = End V^2 + Hom(W,V) + Hom(V,W) + End V'^2 + Hom(V',V)
    C2 = End V + Hom(V',V)^2 + Hom(V',W) [+ End V']
    C3 = Hom(V',V)

with

    d0(h,h')            = ([h,A], [h,B], hI, -Jh, [h',A'], [h',B'], hF - Fh')
    d1(a,b,i,j,a',b',f) = ([a,B]+[A,b]+Ij+iJ, Af+aF-Fa'-fA', Bf+bF-Fb'-fB',
                           jF+Jf, [a',B']+[A',b'])
    d2(c1,...,c5)       = c1F + Bc2 - c2B' + c3A' - Ac3 - Ic4 - Fc5

The ``reduced`` variant (``c' = 1`` only) drops the ``End V'`` summand of
``C2`` together with the last component of ``d1`` and the ``-Fc5`` term.

Matrices are vectorized column-major and the summands are stacked in the
order listed above, using ``vec(L X R) = (R^T kron L) vec(X)``.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np

from .datum import TOLERANCES, is_valid
from .errors import DomainError
from .linalg import numerical_rank, null_space, unvec, vec

VARIANTS = ("general", "reduced")


def _left(M, ncols):
    """Matrix of ``X -> M X`` for ``X`` with ``ncols`` columns."""
    return np.kron(np.eye(ncols), M)


def _right(M, nrows):
    """Matrix of ``X -> X M`` for ``X`` with ``nrows`` rows."""
    return np.kron(M.T, np.eye(nrows))


def term_dims(dims, variant="general"):
    r, c, cp = dims.as_tuple()
    C0 = c * c + cp * cp
    C1 = 2 * c * c + 2 * cp * cp + 2 * r * c + c * cp
    C2 = c * c + 2 * c * cp + r * cp + (cp * cp if variant == "general" else 0)
    C3 = c * cp
    return (C0, C1, C2, C3)


def c1_blocks(dims):
    """Names and shapes of the ``C1`` summands, in vectorization order."""
    r, c, cp = dims.as_tuple()
    return (
        ("a", (c, c)),
        ("b", (c, c)),
        ("i", (c, r)),
        ("j", (r, c)),
        ("aprime", (cp, cp)),
        ("bprime", (cp, cp)),
        ("f", (c, cp)),
    )


@dataclass(frozen=True)
class TangentVector:
    """A first-order deformation ``(a, b, i, j, a', b', f)``."""

    a: np.ndarray
    b: np.ndarray
    i: np.ndarray
    j: np.ndarray
    aprime: np.ndarray
    bprime: np.ndarray
    f: np.ndarray

    def __post_init__(self):
        for name in ("a", "b", "i", "j", "aprime", "bprime", "f"):
            object.__setattr__(self, name, np.atleast_2d(np.asarray(getattr(self, name), dtype=complex)))

    @classmethod
    def from_vector(cls, v, dims):
        blocks = c1_blocks(dims)
        total = sum(s[0] * s[1] for _, s in blocks)
        if len(v) != total:
            raise DomainError(f"vector of length {len(v)} does not match C1 of dims {dims.as_tuple()}")
        parts = {}
        pos = 0
        for name, shape in blocks:
            n = shape[0] * shape[1]
            parts[name] = unvec(v[pos : pos + n], shape)
            pos += n
        return cls(**parts)

    def to_vector(self):
        return np.concatenate([vec(getattr(self, name)) for name in ("a", "b", "i", "j", "aprime", "bprime", "f")])

    @property
    def dims(self):
        return (self.i.shape[1], self.a.shape[0], self.aprime.shape[0])


@dataclass(frozen=True)
class DeformationComplex:
    variant: str
    term_dims: tuple
    D0: np.ndarray = field(repr=False)
    D1: np.ndarray = field(repr=False)
    D2: np.ndarray = field(repr=False)

    def chain_defects(self):
        return (float(np.linalg.norm(self.D1 @ self.D0)), float(np.linalg.norm(self.D2 @ self.D1)))

    def euler_characteristic(self):
        C0, C1, C2, C3 = self.term_dims
        return -C0 + C1 - C2 + C3


def _d0(X):
    r, c, cp = X.dims.as_tuple()
    A, B, I, J, Ap, Bp, F = X.A, X.B, X.I, X.J, X.Aprime, X.Bprime, X.F
    def Zc(rows):
        return np.zeros((rows, c * c))

    def Zp(rows):
        return np.zeros((rows, cp * cp))

    # columns: h (c*c) | h' (cp*cp)
    rows = [
        np.hstack([_right(A, c) - _left(A, c), Zp(c * c)]),
        np.hstack([_right(B, c) - _left(B, c), Zp(c * c)]),
        np.hstack([_right(I, c), Zp(c * r)]),
        np.hstack([-_left(J, c), Zp(r * c)]),
        np.hstack([Zc(cp * cp), _right(Ap, cp) - _left(Ap, cp)]),
        np.hstack([Zc(cp * cp), _right(Bp, cp) - _left(Bp, cp)]),
        np.hstack([_right(F, c), -_left(F, cp)]),
    ]
    return np.vstack(rows).astype(complex)


def _d1(X, variant):
    r, c, cp = X.dims.as_tuple()
    A, B, I, J, Ap, Bp, F = X.A, X.B, X.I, X.J, X.Aprime, X.Bprime, X.F
    sizes = [c * c, c * c, c * r, r * c, cp * cp, cp * cp, c * cp]

    def row(nrows, **blocks):
        order = ("a", "b", "i", "j", "ap", "bp", "f")
        return np.hstack([blocks.get(k, np.zeros((nrows, n))) for k, n in zip(order, sizes)])

    rows = [
        row(
            c * c,
            a=_right(B, c) - _left(B, c),
            b=_left(A, c) - _right(A, c),
            i=_right(J, c),
            j=_left(I, c),
        ),
        row(c * cp, a=_right(F, c), ap=-_left(F, cp), f=_left(A, cp) - _right(Ap, c)),
        row(c * cp, b=_right(F, c), bp=-_left(F, cp), f=_left(B, cp) - _right(Bp, c)),
        row(r * cp, j=_right(F, r), f=_left(J, cp)),
    ]
    if variant == "general":
        rows.append(
            row(
                cp * cp,
                ap=_right(Bp, cp) - _left(Bp, cp),
                bp=_left(Ap, cp) - _right(Ap, cp),
            )
        )
    return np.vstack(rows).astype(complex)


def _d2(X, variant):
    r, c, cp = X.dims.as_tuple()
    A, B, I, Ap, Bp, F = X.A, X.B, X.I, X.Aprime, X.Bprime, X.F
    blocks = [
        _right(F, c),  # c1 F
        _left(B, cp) - _right(Bp, c),  # B c2 - c2 B'
        _right(Ap, c) - _left(A, cp),  # c3 A' - A c3
        -_left(I, cp),  # -I c4
    ]
    if variant == "general":
        blocks.append(-_left(F, cp))  # -F c5
    return np.hstack(blocks).astype(complex)


def build_complex(X, variant="general"):
    """Assemble ``D0, D1, D2`` for ``X``.

    Warns (but still builds) when ``X`` is not a valid datum.
    """
    if variant not in VARIANTS:
        raise DomainError(f"unknown variant {variant!r}; use one of {VARIANTS}")
    if variant == "reduced" and X.dims.cprime != 1:
        raise DomainError("the reduced complex needs c' = 1")
    if not is_valid(X):
        warnings.warn("building the deformation complex of a datum that violates the equations", stacklevel=2)
    D0, D1, D2 = _d0(X), _d1(X, variant), _d2(X, variant)
    return DeformationComplex(variant, term_dims(X.dims, variant), D0, D1, D2)


@dataclass(frozen=True)
class Cohomology:
    h: tuple
    ranks: tuple
    gaps: tuple
    term_dims: tuple
    flagged: bool

    def to_dict(self):
        return {
            "h": list(self.h),
            "ranks": list(self.ranks),
            "gaps": [g if np.isfinite(g) else None for g in self.gaps],
            "term_dims": list(self.term_dims),
            "flagged": self.flagged,
        }


def cohomology_dims(K, rtol=None, gap_min=1e3):
    """Dimensions ``(h0, h1, h2, h3)`` from thresholded ranks of the differentials.

    ``flagged`` is set when any rank cut has a singular-value gap below
    ``gap_min``.
    """
    rtol = TOLERANCES.rank_rtol if rtol is None else rtol
    C0, C1, C2, C3 = K.term_dims
    infos = [numerical_rank(D, rtol) for D in (K.D0, K.D1, K.D2)]
    r0, r1, r2 = (i.rank for i in infos)
    h = (C0 - r0, C1 - r1 - r0, C2 - r2 - r1, C3 - r2)
    gaps = tuple(i.gap for i in infos)
    flagged = any(g < gap_min for g in gaps)
    return Cohomology(h, (r0, r1, r2), gaps, K.term_dims, flagged)


@dataclass(frozen=True)
class TangentBasis:
    """Orthonormal bases of ``ker d1`` and of ``im d0`` inside it.

    ``gauge_generators[:, k]`` is a vector ``(h, h')`` in ``C0`` with
    ``D0 @ gauge_generators[:, k] == gauge[:, k]``.
    """

    kernel: np.ndarray = field(repr=False)
    gauge: np.ndarray = field(repr=False)
    gauge_generators: np.ndarray = field(repr=False)
    h1: int
    flagged: bool

    def kernel_vectors(self, dims):
        return [TangentVector.from_vector(self.kernel[:, k], dims) for k in range(self.kernel.shape[1])]

    def h1_representatives(self):
        """Orthonormal complement of ``im d0`` inside ``ker d1``."""
        N = self.kernel
        P = N - self.gauge @ (self.gauge.conj().T @ N)
        u, s, _ = np.linalg.svd(P, full_matrices=False)
        return u[:, : self.h1]


def tangent_basis(X, variant="reduced", rtol=None):
    rtol = TOLERANCES.rank_rtol if rtol is None else rtol
    K = build_complex(X, variant)
    coh = cohomology_dims(K, rtol)
    kernel = null_space(K.D1, rtol)
    u, s, vh = np.linalg.svd(K.D0, full_matrices=False)
    r0 = coh.ranks[0]
    gauge = u[:, :r0]
    generators = vh[:r0].conj().T / s[:r0]
    return TangentBasis(kernel, gauge, generators, coh.h[1], coh.flagged)


def stabilizer_dim(X, rtol=None):
    """Dimension of ``ker d0``: the Lie algebra of the stabilizer of ``X``."""
    rtol = TOLERANCES.rank_rtol if rtol is None else rtol
    D0 = _d0(X)
    return D0.shape[1] - numerical_rank(D0, rtol).rank
