"""Seeded generators of stable data.

Every generator is exact up to rounding: plain data are direct sums over
distinct points, and enhanced data come from the linear fiber system, so no
nonlinear solve is ever needed.
"""

import numpy as np

from .datum import TOLERANCES, ADHMDatum, DimVector, EnhancedDatum, GaugeElement, act, residual_scale, residuals
from .errors import DomainError, GenerationError
from .linalg import null_space, random_complex
from .moduli_maps import fiber_lift, joint_spectrum, vandermonde_frame
from .stability import is_stable

MIN_SEP = 1e-3
GEN_TAU = 1e-12
STYLES = ("diagonal", "jordan", "jordan-b", "lifted")


def distinct_points(rng, n, min_sep=MIN_SEP, avoid=()):
    """``n`` random points of ``C^2`` pairwise separated in both coordinates."""
    for _ in range(1000):
        xs = random_complex(rng, n)
        ys = random_complex(rng, n)
        pts = list(zip(xs, ys)) + list(avoid)
        ok = all(
            abs(pts[a][0] - pts[b][0]) >= min_sep and abs(pts[a][1] - pts[b][1]) >= min_sep
            for a in range(len(pts))
            for b in range(a)
        )
        if ok:
            return xs, ys
    raise GenerationError("rejection sampling of separated points failed", {"n": n, "min_sep": min_sep})


def _framing(rng, r, c, blocked_cols=0):
    """``I`` mapping frame vector ``k`` into the points ``k, k + r, ...`` and
    ``J`` with ``IJ = 0`` that vanishes on the first ``blocked_cols`` coordinates."""
    I = np.zeros((c, r), dtype=complex)
    for k in range(c):
        I[k, k % r] = random_complex(rng, ()) + (1.0 if rng.random() < 0.5 else -1.0)
    J = np.zeros((r, c), dtype=complex)
    K = null_space(I)
    if K.shape[1] and c > blocked_cols:
        R = random_complex(rng, (K.shape[1], c))
        R[:, :blocked_cols] = 0
        J = K @ R
    return I, J


def random_stable_adhm(r, c, rng, min_sep=MIN_SEP):
    """Stable plain datum: ``A, B`` diagonal over distinct points, ``IJ = 0``."""
    if c == 0:
        return ADHMDatum(r, 0, np.zeros((0, 0)), np.zeros((0, 0)), np.zeros((0, r)), np.zeros((r, 0)))
    xs, ys = distinct_points(rng, c, min_sep)
    I, J = _framing(rng, r, c)
    return ADHMDatum(r, c, np.diag(xs), np.diag(ys), I, J)


GAUGE_COND = 4.0


def conjugate_adhm(X2, rng, max_cond=GAUGE_COND):
    if X2.c == 0:
        return X2
    g = GaugeElement.random(DimVector(X2.r, X2.c, 0), rng, max_cond=max_cond)
    h, hi = g.h, np.linalg.inv(g.h)
    return ADHMDatum(X2.r, X2.c, h @ X2.A @ hi, h @ X2.B @ hi, h @ X2.I, X2.J @ hi)


def _diagonal(dims, rng):
    r, c, cp = dims.as_tuple()
    xs, ys = distinct_points(rng, c)
    I, J = _framing(rng, r, c, blocked_cols=cp)
    F = np.eye(c, cp, dtype=complex)
    return EnhancedDatum(dims, np.diag(xs), np.diag(ys), I, J, np.diag(xs[:cp]), np.diag(ys[:cp]), F)


def _jordan(dims, rng, style):
    if dims.as_tuple() != (1, 2, 1):
        raise DomainError(f"style {style!r} is only defined for dims (1,2,1)")
    alpha, beta, b12, mu = random_complex(rng, 4)
    one = np.eye(2, dtype=complex)
    N = np.array([[0, 1], [0, 0]], dtype=complex)
    if style == "jordan":
        A = alpha * one + N
        B = beta * one + b12 * N
    else:
        A = alpha * one
        B = beta * one + N
    I = np.array([[mu], [1.0]], dtype=complex)
    J = np.zeros((1, 2), dtype=complex)
    F = np.array([[1.0], [0.0]], dtype=complex)
    return EnhancedDatum(dims, A, B, I, J, [[alpha]], [[beta]], F)


def _lifted(dims, rng):
    r, c, cp = dims.as_tuple()
    X2 = conjugate_adhm(random_stable_adhm(r, c - cp, rng), rng)
    spectrum = joint_spectrum(X2.A, X2.B).coords() if X2.c else []
    xs, ys = distinct_points(rng, cp, avoid=spectrum)
    Ap, Bp, _ = vandermonde_frame(cp, alphas=xs, betas=ys)
    X = fiber_lift(X2, Ap, Bp, seed=int(rng.integers(2**31)))
    return act(GaugeElement.random(dims, rng, max_cond=GAUGE_COND), X)


def generate_stable(dims, seed, style="lifted", max_tries=20):
    if style not in STYLES:
        raise DomainError(f"unknown style {style!r}; choose from {STYLES}")
    if dims.cprime > dims.c:
        raise DomainError(f"c' = {dims.cprime} exceeds c = {dims.c}; F cannot be injective")
    rng = np.random.default_rng(seed)
    diagnostics = {}
    for attempt in range(max_tries):
        try:
            if style == "diagonal":
                X = _diagonal(dims, rng)
            elif style == "lifted":
                X = _lifted(dims, rng)
            else:
                X = _jordan(dims, rng, style)
        except GenerationError as exc:
            diagnostics[attempt] = str(exc)
            continue
        worst = max(residuals(X).values())
        report = is_stable(X)
        if worst <= residual_scale(X, GEN_TAU) and report.verdict == "stable":
            return X
        diagnostics[attempt] = {"max_residual": worst, "verdict": report.verdict}
    raise GenerationError(f"no stable datum of type {dims.as_tuple()} after {max_tries} tries", diagnostics)


__all__ = ["generate_stable", "random_stable_adhm", "distinct_points", "conjugate_adhm", "STYLES", "TOLERANCES"]
