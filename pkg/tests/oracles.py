"""Independent reference computations used to cross-check the package.

Nothing here imports the code under test except plain data containers.
Each oracle takes a different route than the implementation: explicit
matrix products instead of Kronecker operators, word enumeration instead of
iterated closure, eigenvalue products instead of charpoly helpers.
"""

import itertools

import numpy as np


def residuals_by_hand(X):
    A, B, I, J = X.A, X.B, X.I, X.J
    Ap, Bp, F, G = X.Aprime, X.Bprime, X.F, X.G
    exprs = [
        A @ B - B @ A + I @ J,
        Ap @ Bp - Bp @ Ap,
        A @ F - F @ Ap,
        B @ F - F @ Bp,
        J @ F,
        G @ I,
        F @ G,
        G @ A - Ap @ G,
        G @ B - Bp @ G,
    ]
    out = []
    for M in exprs:
        s = 0.0
        for z in np.asarray(M).ravel():
            s += abs(z) ** 2
        out.append(s**0.5)
    return out


def word_closure_dim(A, B, I, rtol=1e-9):
    """Rank of ``[w(A, B) I]`` over all words of length below ``c``."""
    c = A.shape[0]
    cols = [I]
    for n in range(1, c):
        for letters in itertools.product((A, B), repeat=n):
            M = np.eye(c, dtype=complex)
            for L in letters:
                M = L @ M
            cols.append(M @ I)
    K = np.hstack(cols)
    s = np.linalg.svd(K, compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > rtol * s[0]))


def d0_apply(X, h, hp):
    """Infinitesimal gauge action written with matrix products."""
    return {
        "a": h @ X.A - X.A @ h,
        "b": h @ X.B - X.B @ h,
        "i": h @ X.I,
        "j": -X.J @ h,
        "aprime": hp @ X.Aprime - X.Aprime @ hp,
        "bprime": hp @ X.Bprime - X.Bprime @ hp,
        "f": h @ X.F - X.F @ hp,
    }


def d1_apply(X, t, variant):
    """Linearized equations at ``X`` applied to a tangent dict ``t``."""
    A, B, I, J, Ap, Bp, F = X.A, X.B, X.I, X.J, X.Aprime, X.Bprime, X.F
    a, b, i, j = t["a"], t["b"], t["i"], t["j"]
    ap, bp, f = t["aprime"], t["bprime"], t["f"]
    parts = [
        a @ B + A @ b - b @ A - B @ a + i @ J + I @ j,
        a @ F + A @ f - f @ Ap - F @ ap,
        b @ F + B @ f - f @ Bp - F @ bp,
        j @ F + J @ f,
    ]
    if variant == "general":
        parts.append(ap @ Bp + Ap @ bp - bp @ Ap - Bp @ ap)
    return parts


def d2_apply(X, parts, variant):
    c1, c2, c3, c4 = parts[:4]
    out = c1 @ X.F + X.B @ c2 - c2 @ X.Bprime + c3 @ X.Aprime - X.A @ c3 - X.I @ c4
    if variant == "general":
        out = out - X.F @ parts[4]
    return out


def stack_colmajor(mats):
    return np.concatenate([np.asarray(M).reshape(-1, order="F") for M in mats])


def charpoly_from_eigs(M):
    return np.poly(np.linalg.eigvals(M)) if M.size else np.array([1.0])


def h1_formula(r, c):
    return 2 * r * c - r + 1


def ambient_formula(r, c, cp):
    return 2 * c * (r + cp)
