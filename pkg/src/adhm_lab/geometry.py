"""Moment maps, the balancing flow and the pre-symplectic form.

The ambient space is cut out by

    [A,B] + IJ + FG = 0,    [A',B'] - GF = 0

and carries the real moment map (returned without scalar prefactors, so the
blocks are hermitian)

    mu_V  = [A,A*] + [B,B*] + II* - J*J + FF* - G*G
    mu_V' = [A',A'*] + [B',B'*] - F*F + GG*

On tangent vectors with ``c' = 1`` the two-form

    Omega(x1, x2) = tr(-a2 b1 + b2 a1 - i2 j1 + i1 j2 - a'2 b'1 + b'2 a'1)

is evaluated on orthogonal representatives of ``H^1``.
"""

import csv
import io
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .datum import TOLERANCES, DimVector, EnhancedDatum, StabilityParameter, generate_stable
from .deformation import TangentVector, _d0, tangent_basis
from .errors import DimensionError, DomainError, FlowError
from .linalg import charpoly, fro, numerical_rank, random_complex


def _comm(X, Y):
    return X @ Y - Y @ X


def _h(M):
    return M.conj().T


def ambient_residuals(X):
    """Frobenius norms of ``[A,B]+IJ+FG`` and ``[A',B']-GF``."""
    e1 = _comm(X.A, X.B) + X.I @ X.J + X.F @ X.G
    e2 = _comm(X.Aprime, X.Bprime) - X.G @ X.F
    return fro(e1), fro(e2)


@dataclass(frozen=True)
class MomentValue:
    """Real (hermitian) and complex moment map blocks on ``V`` and ``V'``."""

    muV: np.ndarray = field(repr=False)
    muVprime: np.ndarray = field(repr=False)
    muC_V: np.ndarray = field(repr=False)
    muC_Vprime: np.ndarray = field(repr=False)

    def real_norm(self):
        return float(np.hypot(fro(self.muV), fro(self.muVprime)))

    def complex_norm(self):
        return float(np.hypot(fro(self.muC_V), fro(self.muC_Vprime)))

    def hermitian_defect(self):
        return max(fro(self.muV - _h(self.muV)), fro(self.muVprime - _h(self.muVprime)))


def real_moment(X):
    return _mu_blocks(tuple(getattr(X, n) for n in _ORDER))


def moment_map(X):
    muV, muVp = real_moment(X)
    muC_V = -(_comm(X.A, X.B) + X.I @ X.J + X.F @ X.G)
    muC_Vp = -(_comm(X.Aprime, X.Bprime) - X.G @ X.F)
    return MomentValue(muV, muVp, muC_V, muC_Vp)


def moment_level(dims, theta=None):
    """Level ``(-theta Id_V, -theta' Id_V')``; zero when ``theta`` is None.

    Its total trace ``-c theta - c' theta'`` equals ``r theta_inf``, matching
    ``tr mu_V + tr mu_V' = |I|^2 - |J|^2``.
    """
    if theta is None:
        return np.zeros((dims.c, dims.c)), np.zeros((dims.cprime, dims.cprime))
    theta.check(dims)
    return -float(theta.theta) * np.eye(dims.c), -float(theta.thetaprime) * np.eye(dims.cprime)


# ---------------------------------------------------------------------------
# balancing flow


@dataclass(frozen=True)
class FlowResult:
    datum: EnhancedDatum
    converged: bool
    iterations: int
    initial_norm: float
    final_norm: float
    threshold: float
    spectral_drift: float
    history: tuple = field(default=(), repr=False)

    def to_dict(self):
        return {
            "converged": self.converged,
            "iterations": self.iterations,
            "initial_norm": self.initial_norm,
            "final_norm": self.final_norm,
            "threshold": self.threshold,
            "spectral_drift": self.spectral_drift,
        }


def _mu_blocks(mats):
    A, B, I, J, Ap, Bp, F, G = mats
    muV = _comm(A, _h(A)) + _comm(B, _h(B)) + I @ _h(I) - _h(J) @ J + F @ _h(F) - _h(G) @ G
    muVp = _comm(Ap, _h(Ap)) + _comm(Bp, _h(Bp)) - _h(F) @ F + G @ _h(G)
    return muV, muVp


def spectral_drift(X, Y):
    """Largest relative change of the characteristic polynomials of ``A, B, A', B'``."""
    worst = 0.0
    for name in ("A", "B", "Aprime", "Bprime"):
        p, q = charpoly(getattr(X, name)), charpoly(getattr(Y, name))
        scale = np.maximum(1.0, np.abs(p))
        worst = max(worst, float(np.max(np.abs(p - q) / scale)))
    return worst


_ORDER = ("A", "B", "I", "J", "Aprime", "Bprime", "F", "G")


def balance_flow(X, max_iters=100_000, tol=None, theta=None, strict=False, record=False):
    """Descend ``|mu_1 - level|^2`` along the complexified gauge orbit.

    Each step applies ``(exp(-eps H_V), exp(-eps H_V'))`` with
    ``H = mu_1 - level``; ``eps`` starts at ``1 / (1 + sigma_max(H)^2)`` and
    is halved until ``|H|^2`` strictly decreases.  Stops once
    ``|H| <= tol (1 + |X|^2)``.  Without ``theta`` the level is zero.
    """
    from ._flow_kernel import flow

    tol = TOLERANCES.flow_tol if tol is None else tol
    LV, LVp = moment_level(X.dims, theta)
    mats = [np.ascontiguousarray(getattr(X, n), dtype=complex) for n in _ORDER]
    out = flow(*mats, LV.astype(complex), LVp.astype(complex), int(max_iters), float(tol))
    Y = EnhancedDatum(X.dims, *out[:8])
    history = out[9]
    final = float(history[-1])
    threshold = tol * (1.0 + Y.norm() ** 2)
    converged = final <= threshold
    result = FlowResult(
        Y,
        converged,
        int(out[8]),
        float(history[0]),
        final,
        threshold,
        spectral_drift(X, Y),
        tuple(float(v) for v in history) if record else (),
    )
    if strict and not converged:
        raise FlowError(f"flow stopped at |mu_1 - level| = {final:.3e} after {out[8]} iterations", final)
    return result


# ---------------------------------------------------------------------------
# ambient tangent space


def _ambient_linearization(X):
    """Linearization of the ambient equations on ``(a,b,i,j,a',b',f,g)``."""
    r, c, cp = X.dims.as_tuple()
    A, B, I, J, Ap, Bp, F, G = X.A, X.B, X.I, X.J, X.Aprime, X.Bprime, X.F, X.G

    def L(M, n):
        return np.kron(np.eye(n), M)

    def R(M, n):
        return np.kron(M.T, np.eye(n))

    sizes = [c * c, c * c, c * r, r * c, cp * cp, cp * cp, c * cp, cp * c]
    order = ("a", "b", "i", "j", "ap", "bp", "f", "g")

    def row(nrows, **blocks):
        return np.hstack([blocks.get(k, np.zeros((nrows, n))) for k, n in zip(order, sizes)])

    e1 = row(
        c * c,
        a=R(B, c) - L(B, c),
        b=L(A, c) - R(A, c),
        i=R(J, c),
        j=L(I, c),
        f=R(G, c),
        g=L(F, c),
    )
    e2 = row(
        cp * cp,
        ap=R(Bp, cp) - L(Bp, cp),
        bp=L(Ap, cp) - R(Ap, cp),
        g=-R(F, cp),
        f=-L(G, cp),
    )
    return np.vstack([e1, e2]).astype(complex)


def _ambient_orbit(X):
    c, cp = X.dims.c, X.dims.cprime
    D0 = _d0(X)
    G = X.G
    # g-component of the infinitesimal action: h'G - Gh
    g_rows = np.hstack([-np.kron(np.eye(c), G), np.kron(G.T, np.eye(cp))])
    return np.vstack([D0, g_rows]).astype(complex)


@dataclass(frozen=True)
class AmbientDim:
    kernel_dim: int
    orbit_dim: int
    dimension: int
    expected: int
    gaps: tuple


def ambient_tangent_dim(X, rtol=None):
    """``dim ker(linearized ambient equations) - dim(gauge orbit)``."""
    rtol = TOLERANCES.rank_rtol if rtol is None else rtol
    E = _ambient_linearization(X)
    O = _ambient_orbit(X)
    ri, ro = numerical_rank(E, rtol), numerical_rank(O, rtol)
    kernel = E.shape[1] - ri.rank
    r, c, cp = X.dims.as_tuple()
    return AmbientDim(kernel, ro.rank, kernel - ro.rank, 2 * c * (r + cp), (ri.gap, ro.gap))


def ambient_point(dims, rng, g_scale=0.5):
    """A solution of the ambient equations with ``G != 0`` (``c' = 1``, ``c >= 2``).

    ``F = e_1``, ``G = g e_c^T`` so that ``GF = 0``, ``J = 0``, ``A`` diagonal and
    ``B`` diagonal plus ``x e_1 e_c^T`` with ``(a_1 - a_c) x = -g``.
    """
    r, c, cp = dims.as_tuple()
    if cp != 1 or c < 2:
        raise DomainError("ambient_point needs c' = 1 and c >= 2")
    from .generation import _framing, distinct_points

    xs, ys = distinct_points(rng, c)
    g = g_scale * (1.0 + random_complex(rng, ()))
    A = np.diag(xs)
    B = np.diag(ys).astype(complex)
    B[0, c - 1] = -g / (xs[0] - xs[c - 1])
    I, _ = _framing(rng, r, c)
    J = np.zeros((r, c), dtype=complex)
    F = np.eye(c, 1, dtype=complex)
    G = np.zeros((1, c), dtype=complex)
    G[0, c - 1] = g
    return EnhancedDatum(dims, A, B, I, J, [[xs[0]]], [[ys[0]]], F, G)


# ---------------------------------------------------------------------------
# the two-form


def omega_pair(u, v):
    """``tr(-a2 b1 + b2 a1 - i2 j1 + i1 j2 - a'2 b'1 + b'2 a'1)`` with ``u = x1``, ``v = x2``."""
    if u.dims != v.dims:
        raise DimensionError(f"tangent vectors of different types {u.dims} and {v.dims}")
    return complex(
        np.trace(-v.a @ u.b + v.b @ u.a)
        + np.trace(-v.i @ u.j + u.i @ v.j)
        + np.trace(-v.aprime @ u.bprime + v.bprime @ u.aprime)
    )


def omega_gram(vectors, dims):
    """Matrix ``M[k, l] = Omega(v_k, v_l)`` for vectorized tangent columns."""
    tv = [TangentVector.from_vector(vectors[:, k], dims) for k in range(vectors.shape[1])]
    n = len(tv)
    M = np.zeros((n, n), dtype=complex)
    for k in range(n):
        for l in range(k + 1, n):
            M[k, l] = omega_pair(tv[k], tv[l])
            M[l, k] = -M[k, l]
    return M


@dataclass(frozen=True)
class OmegaMatrix:
    basis: list = field(repr=False)
    M: np.ndarray = field(repr=False)
    numerical_rank: int
    gap: float
    welldef_residual: float
    welldef_ok: bool
    h1: int
    flagged: bool

    def to_dict(self):
        return {
            "rank": self.numerical_rank,
            "gap": self.gap if np.isfinite(self.gap) else None,
            "welldef_residual": self.welldef_residual,
            "welldef_ok": self.welldef_ok,
            "h1": self.h1,
            "flagged": self.flagged,
        }


def welldefinedness_residual(X, tb, pairs=100, seed=0):
    """Largest ``|Omega(d0 xi, v)| / (|d0 xi| |v|)`` over random ``xi`` and ``v`` in ``ker d1``."""
    rng = np.random.default_rng(seed)
    D0 = _d0(X)
    worst = 0.0
    for _ in range(pairs):
        xi = random_complex(rng, D0.shape[1])
        w = D0 @ xi
        v = tb.kernel @ random_complex(rng, tb.kernel.shape[1])
        val = omega_pair(TangentVector.from_vector(w, X.dims), TangentVector.from_vector(v, X.dims))
        worst = max(worst, abs(val) / (np.linalg.norm(w) * np.linalg.norm(v)))
    return float(worst)


def omega_on_h1(X, rtol=None, pairs=100, seed=0, welldef_tol=1e-8):
    if X.dims.cprime != 1:
        raise DomainError("omega_on_h1 needs c' = 1")
    rtol = TOLERANCES.rank_rtol if rtol is None else rtol
    tb = tangent_basis(X, "reduced", rtol)
    reps = tb.h1_representatives()
    M = omega_gram(reps, X.dims)
    info = numerical_rank(M, rtol) if M.size else None
    rank = info.rank if info else 0
    gap = info.gap if info else np.inf
    resid = welldefinedness_residual(X, tb, pairs, seed)
    ok = resid <= welldef_tol
    basis = [TangentVector.from_vector(reps[:, k], X.dims) for k in range(reps.shape[1])]
    flagged = tb.flagged or gap < 1e3 or rank % 2 == 1 or not ok
    return OmegaMatrix(basis, M, rank, gap, resid, ok, tb.h1, flagged)


# ---------------------------------------------------------------------------
# degeneracy scan


SCAN_STRATA = ("diagonal", "jordan", "jordan-b", "lifted")


def degeneracy_scan(dims, samples, seed=0, strata=("diagonal", "jordan", "jordan-b")):
    """Histogram of ``Omega`` ranks on ``H^1`` per sampling stratum.

    Sample ``k`` of every stratum uses seed ``seed + k``.  Returns rows
    ``(stratum, rank, count)`` sorted by stratum then rank, plus the number
    of flagged samples per stratum.
    """
    if dims.cprime != 1:
        raise DomainError("degeneracy_scan needs c' = 1")
    rows = []
    flagged = {}
    for stratum in strata:
        if stratum not in SCAN_STRATA:
            raise DomainError(f"unknown stratum {stratum!r}")
        hist = Counter()
        flagged[stratum] = 0
        for k in range(samples):
            X = generate_stable(dims, seed + k, style=stratum)
            om = omega_on_h1(X)
            hist[om.numerical_rank] += 1
            flagged[stratum] += int(om.flagged)
        rows += [(stratum, rank, hist[rank]) for rank in sorted(hist)]
    return rows, flagged


def scan_csv(rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["stratum", "rank", "count"])
    w.writerows(rows)
    return buf.getvalue()


def chamber_level_parameter(dims):
    """Default chamber parameter used as the flow level for stable data."""
    return StabilityParameter.default_chamber(dims)


__all__ = [
    "ambient_residuals",
    "MomentValue",
    "moment_map",
    "moment_level",
    "FlowResult",
    "balance_flow",
    "spectral_drift",
    "ambient_tangent_dim",
    "ambient_point",
    "omega_pair",
    "omega_gram",
    "OmegaMatrix",
    "omega_on_h1",
    "welldefinedness_residual",
    "degeneracy_scan",
    "scan_csv",
    "chamber_level_parameter",
    "DimVector",
    "Fraction",
]
