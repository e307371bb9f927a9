"""Maps between moduli spaces: the quotient ``X -> X''``, fiber lifts, the
monad pencil with the support of the quotient sheaf, and the nested Hilbert
scheme dictionary for ``r = 1``.
"""

import json
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import schur
from scipy.optimize import minimize

from .datum import TOLERANCES, ADHMDatum, DimVector, EnhancedDatum
from .errors import CommutationError, DomainError, GenerationError, LiftError, PreconditionError
from .linalg import charpoly, fro, null_space, numerical_rank, orth_complement, random_complex, range_basis

COMMUTE_TOL = 1e-8
CLUSTER_TOL = 1e-6


# ---------------------------------------------------------------------------
# types


@dataclass(frozen=True)
class LiftData:
    """Solution ``(A~, B~, I~)`` of the fiber system over ``(X'', A', B')``."""

    Atilde: np.ndarray = field(repr=False)
    Btilde: np.ndarray = field(repr=False)
    Itilde: np.ndarray = field(repr=False)
    Aprime: np.ndarray = field(repr=False)
    Bprime: np.ndarray = field(repr=False)

    def residual(self, X2):
        return fro(
            self.Aprime @ self.Btilde
            + self.Atilde @ X2.B
            - self.Bprime @ self.Atilde
            - self.Btilde @ X2.A
            + self.Itilde @ X2.J
        )


@dataclass(frozen=True)
class MonadPencil:
    """``alpha = [zA + x; zB + y; zJ]`` and ``beta = [-zB - y, zA + x, zI]``."""

    base: ADHMDatum

    def alpha(self, x, y, z=1.0):
        X2 = self.base
        one = np.eye(X2.c)
        return np.vstack([z * X2.A + x * one, z * X2.B + y * one, z * X2.J])

    def beta(self, x, y, z=1.0):
        X2 = self.base
        one = np.eye(X2.c)
        return np.hstack([-z * X2.B - y * one, z * X2.A + x * one, z * X2.I])


@dataclass(frozen=True)
class PointConfiguration:
    """Finite set of points of ``C^2`` with multiplicities."""

    points: tuple

    def __post_init__(self):
        pts = []
        for p in self.points:
            x, y, m = p
            if int(m) != m or m < 1:
                raise DomainError(f"multiplicity must be a positive integer, got {m!r}")
            pts.append((complex(x), complex(y), int(m)))
        for a in range(len(pts)):
            for b in range(a):
                if pts[a][0] == pts[b][0] and pts[a][1] == pts[b][1]:
                    raise DomainError(f"repeated point {pts[a][:2]}")
        object.__setattr__(self, "points", tuple(pts))

    @classmethod
    def simple(cls, coords):
        return cls(tuple((x, y, 1) for x, y in coords))

    @property
    def length(self):
        return sum(m for _, _, m in self.points)

    def sorted(self):
        key = lambda p: (round(p[0].real, 6), round(p[0].imag, 6), round(p[1].real, 6), round(p[1].imag, 6))
        return PointConfiguration(tuple(sorted(self.points, key=key)))

    def coords(self):
        return [(x, y) for x, y, _ in self.points]

    def matches(self, other, tol=1e-8):
        """Same multiset of points up to ordering, coordinates within ``tol``."""
        if len(self.points) != len(other.points):
            return False
        left = list(other.points)
        for x, y, m in self.points:
            hit = None
            for k, (u, v, n) in enumerate(left):
                if n == m and abs(u - x) <= tol and abs(v - y) <= tol:
                    hit = k
                    break
            if hit is None:
                return False
            left.pop(hit)
        return True

    def to_dict(self):
        return {
            "points": [
                {"x": [x.real, x.imag], "y": [y.real, y.imag], "mult": m} for x, y, m in self.points
            ]
        }

    @classmethod
    def from_dict(cls, obj):
        try:
            return cls(tuple((complex(*p["x"]), complex(*p["y"]), p.get("mult", 1)) for p in obj["points"]))
        except (KeyError, TypeError) as exc:
            raise DomainError(f"malformed point configuration: {exc}") from None

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)


# ---------------------------------------------------------------------------
# quotient and fiber lift


def quotient_rep(X, rtol=None):
    """Plain ADHM datum induced on ``V / Im F``, realized on ``(Im F)^perp``."""
    rtol = TOLERANCES.rank_rtol if rtol is None else rtol
    r, c, cp = X.dims.as_tuple()
    if cp and numerical_rank(X.F, rtol).rank != cp:
        raise PreconditionError("F is not injective")
    Q = orth_complement(range_basis(X.F, rtol), c) if cp else np.eye(c, dtype=complex)
    Qh = Q.conj().T
    return ADHMDatum(r, c - cp, Qh @ X.A @ Q, Qh @ X.B @ Q, Qh @ X.I, X.J @ Q)


def lift_operator(X2, Aprime, Bprime):
    """Matrix of ``L(A~,B~,I~) = A'B~ + A~B'' - B'A~ - B~A'' + I~J''``.

    Unknowns are stacked as ``(vec A~, vec B~, vec I~)``.
    """
    cp, c2 = Aprime.shape[0], X2.c
    Ip, I2 = np.eye(cp), np.eye(c2)
    LA = np.kron(X2.B.T, Ip) - np.kron(I2, Bprime)
    LB = np.kron(I2, Aprime) - np.kron(X2.A.T, Ip)
    LI = np.kron(X2.J.T, Ip)
    return np.hstack([LA, LB, LI]).astype(complex)


def lift_kernel_count(dims_X2, cprime):
    """Dimension of ``ker L`` when ``L`` is surjective: ``c'(c'' + r)``."""
    r, c2 = dims_X2
    return cprime * (c2 + r)


def split_lift_vector(v, X2, cp, Aprime, Bprime):
    n = cp * X2.c
    At = v[:n].reshape((cp, X2.c), order="F")
    Bt = v[n : 2 * n].reshape((cp, X2.c), order="F")
    It = v[2 * n :].reshape((cp, X2.r), order="F")
    return LiftData(At, Bt, It, Aprime, Bprime)


def assemble_lift(X2, lift):
    """Block datum with ``V = V' + V''``, ``F = [1; 0]`` and ``G = 0``."""
    cp, c2, r = lift.Aprime.shape[0], X2.c, X2.r
    Z = np.zeros((c2, cp), dtype=complex)
    A = np.block([[lift.Aprime, lift.Atilde], [Z, X2.A]])
    B = np.block([[lift.Bprime, lift.Btilde], [Z, X2.B]])
    I = np.vstack([lift.Itilde, X2.I])
    J = np.hstack([np.zeros((r, cp), dtype=complex), X2.J])
    F = np.vstack([np.eye(cp, dtype=complex), np.zeros((c2, cp), dtype=complex)])
    return EnhancedDatum(DimVector(r, c2 + cp, cp), A, B, I, J, lift.Aprime, lift.Bprime, F)


def fiber_lift(X2, Aprime, Bprime, seed=0, budget=20, rtol=None):
    """Stable enhanced datum over ``X2`` with kernel representation ``(A', B')``.

    Samples random elements of ``ker L`` until the assembled datum is stable.
    """
    from .stability import is_stable

    rtol = TOLERANCES.rank_rtol if rtol is None else rtol
    Aprime = np.atleast_2d(np.asarray(Aprime, dtype=complex))
    Bprime = np.atleast_2d(np.asarray(Bprime, dtype=complex))
    cp = Aprime.shape[0]
    if cp < 1:
        raise DomainError("fiber_lift needs c' >= 1")
    if fro(Aprime @ Bprime - Bprime @ Aprime) > COMMUTE_TOL * (1 + fro(Aprime) * fro(Bprime)):
        raise PreconditionError("A' and B' do not commute")
    if not X2.is_valid():
        raise PreconditionError("X'' does not satisfy [A,B] + IJ = 0")
    L = lift_operator(X2, Aprime, Bprime)
    K = null_space(L, rtol)
    if K.shape[1] == 0:
        raise LiftError("the fiber system has only the zero solution")
    rng = np.random.default_rng(seed)
    scale = max(1.0, X2.norm() / np.sqrt(max(1, X2.c + X2.r)))
    for _ in range(budget):
        coeffs = random_complex(rng, K.shape[1])
        v = scale * (K @ coeffs)
        lift = split_lift_vector(v, X2, cp, Aprime, Bprime)
        X = assemble_lift(X2, lift)
        if is_stable(X, rtol=rtol).verdict == "stable":
            return X
    raise GenerationError(
        "no stable lift found within budget",
        {"kernel_dim": int(K.shape[1]), "budget": budget},
    )


def krylov_matrix(M, v):
    cols = [v]
    for _ in range(M.shape[0] - 1):
        cols.append(M @ cols[-1])
    return np.column_stack(cols)


def vandermonde_frame(cprime, seed=0, alphas=None, betas=None, min_sep=1e-3):
    """Diagonal ``(A', B')`` with distinct entries and ``I~ = (1, ..., 1)^T``.

    The all-ones vector is cyclic for ``B'`` exactly when the ``beta``s are
    distinct (the Krylov matrix is a Vandermonde matrix).
    """
    if cprime < 1:
        raise DomainError("cprime must be >= 1")
    rng = np.random.default_rng(seed)
    if alphas is None:
        alphas = _separated(rng, cprime, min_sep)
    if betas is None:
        betas = _separated(rng, cprime, min_sep)
    Ap = np.diag(np.asarray(alphas, dtype=complex))
    Bp = np.diag(np.asarray(betas, dtype=complex))
    v = np.ones((cprime, 1), dtype=complex)
    K = krylov_matrix(Bp, v[:, 0])
    if numerical_rank(K).rank < cprime:
        raise DomainError("B' has repeated eigenvalues; Krylov matrix is rank deficient")
    return Ap, Bp, v


def _separated(rng, n, min_sep, avoid=()):
    for _ in range(1000):
        z = random_complex(rng, n)
        pts = list(z) + list(avoid)
        if all(abs(pts[a] - pts[b]) >= min_sep for a in range(len(pts)) for b in range(a)):
            return z
    raise GenerationError("could not sample separated values", {"n": n, "min_sep": min_sep})


# ---------------------------------------------------------------------------
# monad and support


def monad_ranks(M, p, rtol=None):
    rtol = TOLERANCES.rank_rtol if rtol is None else rtol
    x, y, z = p
    if x == 0 and y == 0 and z == 0:
        raise DomainError("(0:0:0) is not a point")
    return numerical_rank(M.alpha(x, y, z), rtol).rank, numerical_rank(M.beta(x, y, z), rtol).rank


def monad_defect(M, p):
    x, y, z = p
    return fro(M.beta(x, y, z) @ M.alpha(x, y, z))


def _cluster(pairs, tol):
    groups = []
    for a, b in pairs:
        for g in groups:
            if abs(g[0] / g[2] - a) <= tol and abs(g[1] / g[2] - b) <= tol:
                g[0] += a
                g[1] += b
                g[2] += 1
                break
        else:
            groups.append([a, b, 1])
    return PointConfiguration(tuple((s / m, t / m, m) for s, t, m in groups))


def joint_spectrum(A, B, tol=COMMUTE_TOL, cluster_tol=CLUSTER_TOL):
    """Paired eigenvalues of a commuting pair with algebraic multiplicities.

    Both matrices are brought to upper triangular form by the unitary Schur
    basis of a generic combination ``A + tB``.
    """
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    n = A.shape[0]
    if n == 0:
        return PointConfiguration(())
    scale = 1.0 + fro(A) + fro(B)
    if fro(A @ B - B @ A) > tol * scale**2:
        raise CommutationError(f"||[A,B]|| = {fro(A @ B - B @ A):.3e} exceeds tolerance")
    worst = np.inf
    for t in (0.5773502691896258 + 0.3141592653589793j, 1.0, 1j, -0.7071067811865476 + 1.2j):
        _, Z = schur(A + t * B, output="complex")
        TA = Z.conj().T @ A @ Z
        TB = Z.conj().T @ B @ Z
        lower = max(fro(np.tril(TA, -1)) / max(1.0, fro(A)), fro(np.tril(TB, -1)) / max(1.0, fro(B)))
        worst = min(worst, lower)
        if lower <= tol:
            pairs = list(zip(np.diag(TA), np.diag(TB)))
            return _cluster(pairs, cluster_tol * scale)
    raise CommutationError(f"simultaneous triangularization failed (lower mass {worst:.3e})")


def quotient_support(X):
    """Support of the quotient sheaf: the joint spectrum of ``(-A', -B')``."""
    return joint_spectrum(-X.Aprime, -X.Bprime)


def pencil_sigma(Aprime, Bprime, xs, ys):
    """Smallest singular value of ``[-B' - y, A' + x]`` for arrays of ``x, y``."""
    cp = Aprime.shape[0]
    xs = np.asarray(xs, dtype=complex).ravel()
    ys = np.asarray(ys, dtype=complex).ravel()
    one = np.eye(cp)
    M = np.concatenate(
        [-Bprime[None] - ys[:, None, None] * one, Aprime[None] + xs[:, None, None] * one], axis=2
    )
    return np.linalg.svd(M, compute_uv=False)[:, -1]


def pencil_scan_support(Aprime, Bprime, grid=9, starts=8, drop_tol=1e-7):
    """Independent estimate of the support from rank drops of the kernel pencil.

    A coarse grid over a box containing the spectrum seeds Nelder-Mead
    minimizations of the smallest singular value; minima where the pencil
    loses rank are returned (multiplicity 1 each, deduplicated).
    """
    Aprime = np.atleast_2d(np.asarray(Aprime, dtype=complex))
    Bprime = np.atleast_2d(np.asarray(Bprime, dtype=complex))
    R = 1.0 + np.linalg.norm(Aprime, 2) + np.linalg.norm(Bprime, 2)
    axis = np.linspace(-R, R, grid)
    g = np.stack(np.meshgrid(axis, axis, axis, axis, indexing="ij"), axis=-1).reshape(-1, 4)
    xs = g[:, 0] + 1j * g[:, 1]
    ys = g[:, 2] + 1j * g[:, 3]
    sig = pencil_sigma(Aprime, Bprime, xs, ys)
    order = np.argsort(sig)[:starts]

    def objective(p):
        return float(pencil_sigma(Aprime, Bprime, [p[0] + 1j * p[1]], [p[2] + 1j * p[3]])[0])

    found = []
    for k in order:
        res = minimize(
            objective,
            g[k],
            method="Nelder-Mead",
            options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 20000, "maxfev": 40000},
        )
        if res.fun <= drop_tol * R:
            x, y = res.x[0] + 1j * res.x[1], res.x[2] + 1j * res.x[3]
            if all(abs(x - u) > 1e-5 or abs(y - v) > 1e-5 for u, v in found):
                found.append((x, y))
    return PointConfiguration.simple(found)


# ---------------------------------------------------------------------------
# nested Hilbert schemes


def nested_hilbert_datum(Z1, Z2, match_tol=1e-12):
    """Rank-one enhanced datum of the nested pair ``Z1`` inside ``Z2``.

    ``V`` is indexed by ``Z2`` with the points of ``Z2 - Z1`` first; ``V'`` is
    indexed by ``Z2 - Z1`` and ``F`` is the coordinate inclusion.
    """
    for Z in (Z1, Z2):
        if any(m != 1 for _, _, m in Z.points):
            raise DomainError("nested Hilbert data need reduced points (multiplicity 1)")
    inner = Z1.coords()
    outer = Z2.coords()
    extra = list(outer)
    for x, y in inner:
        hit = [k for k, (u, v) in enumerate(extra) if abs(u - x) <= match_tol and abs(v - y) <= match_tol]
        if not hit:
            raise DomainError(f"point {(x, y)} of Z1 is not in Z2")
        extra.pop(hit[0])
    if not outer:
        raise DomainError("Z2 must be non-empty")
    ordered = extra + inner
    xs = np.array([p[0] for p in ordered], dtype=complex)
    ys = np.array([p[1] for p in ordered], dtype=complex)
    c, cp = len(ordered), len(extra)
    return EnhancedDatum(
        DimVector(1, c, cp),
        np.diag(xs),
        np.diag(ys),
        np.ones((c, 1), dtype=complex),
        np.zeros((1, c), dtype=complex),
        np.diag(xs[:cp]),
        np.diag(ys[:cp]),
        np.eye(c, cp, dtype=complex),
    )


def nested_hilbert_points(X):
    """Recover ``(Z1, Z2)``: joint spectra of ``(A'', B'')`` and of ``(A, B)``."""
    if X.dims.r != 1:
        raise DomainError("nested Hilbert correspondence needs r = 1")
    Z2 = joint_spectrum(X.A, X.B)
    X2 = quotient_rep(X)
    Z1 = joint_spectrum(X2.A, X2.B)
    return Z1, Z2


# ---------------------------------------------------------------------------
# gauge fingerprints


def _words(max_len):
    words = [""]
    for n in range(1, max_len + 1):
        words += [w + s for w in words if len(w) == n - 1 for s in "AB"]
    return words


def fingerprint(A, B, I=None, J=None, max_word=4):
    """Conjugation invariants of ``(A, B[, I, J])`` as a flat complex vector.

    Characteristic polynomials of ``A, B, AB, A+B``, traces of words in
    ``A, B`` up to length ``max_word`` and, when the framing is given,
    ``tr(J w I)`` for words up to length 2.
    """
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    mats = {"A": A, "B": B}
    parts = [charpoly(M)[1:] for M in (A, B, A @ B, A + B)]
    one = np.eye(A.shape[0], dtype=complex)

    def word(w):
        M = one
        for s in w:
            M = M @ mats[s]
        return M

    parts.append(np.array([np.trace(word(w)) for w in _words(max_word) if w], dtype=complex))
    if I is not None and J is not None:
        parts.append(np.array([np.trace(J @ word(w) @ I) for w in _words(2)], dtype=complex))
    return np.concatenate([np.atleast_1d(p) for p in parts]) if parts else np.zeros(0, complex)


def adhm_fingerprint(X2):
    return fingerprint(X2.A, X2.B, X2.I, X2.J)


def fingerprint_distance(f1, f2):
    """Largest entrywise relative deviation, with unit floor on the scale."""
    f1, f2 = np.asarray(f1), np.asarray(f2)
    if f1.shape != f2.shape:
        return np.inf
    if f1.size == 0:
        return 0.0
    scale = np.maximum(1.0, np.maximum(np.abs(f1), np.abs(f2)))
    return float(np.max(np.abs(f1 - f2) / scale))


def same_gauge_class(X2a, X2b, rtol=1e-8):
    return X2a.c == X2b.c and fingerprint_distance(adhm_fingerprint(X2a), adhm_fingerprint(X2b)) <= rtol


def lift_kernel_dim(X2, Aprime, Bprime, rtol=None):
    rtol = TOLERANCES.rank_rtol if rtol is None else rtol
    L = lift_operator(X2, np.atleast_2d(Aprime), np.atleast_2d(Bprime))
    return L.shape[1] - (numerical_rank(L, rtol).rank if L.shape[0] else 0)


__all__ = [
    "LiftData",
    "MonadPencil",
    "PointConfiguration",
    "quotient_rep",
    "lift_operator",
    "lift_kernel_count",
    "lift_kernel_dim",
    "assemble_lift",
    "fiber_lift",
    "vandermonde_frame",
    "krylov_matrix",
    "monad_ranks",
    "monad_defect",
    "joint_spectrum",
    "quotient_support",
    "pencil_sigma",
    "pencil_scan_support",
    "nested_hilbert_datum",
    "nested_hilbert_points",
    "fingerprint",
    "adhm_fingerprint",
    "fingerprint_distance",
    "same_gauge_class",
]
