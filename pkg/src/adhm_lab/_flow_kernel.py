"""Compiled inner loop of the balancing flow.

The matrices are tiny, so explicit loops beat BLAS dispatch by a wide
margin; the loop itself must run up to 1e5 steps per datum.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def _mm(X, Y):
    m, k = X.shape
    n = Y.shape[1]
    out = np.zeros((m, n), dtype=np.complex128)
    for a in range(m):
        for b in range(n):
            s = 0j
            for t in range(k):
                s += X[a, t] * Y[t, b]
            out[a, b] = s
    return out


@njit(cache=True)
def _ct(X):
    m, n = X.shape
    out = np.empty((n, m), dtype=np.complex128)
    for a in range(m):
        for b in range(n):
            out[b, a] = np.conj(X[a, b])
    return out


@njit(cache=True)
def _sq(X):
    s = 0.0
    for v in X.ravel():
        s += v.real * v.real + v.imag * v.imag
    return s


@njit(cache=True)
def _residual(A, B, I, J, Ap, Bp, F, G, LV, LVp):
    Ah, Bh, Aph, Bph, Fh, Gh = _ct(A), _ct(B), _ct(Ap), _ct(Bp), _ct(F), _ct(G)
    HV = _mm(A, Ah) - _mm(Ah, A) + _mm(B, Bh) - _mm(Bh, B) + _mm(I, _ct(I)) - _mm(_ct(J), J)
    HV = HV + _mm(F, Fh) - _mm(Gh, G) - LV
    HVp = _mm(Ap, Aph) - _mm(Aph, Ap) + _mm(Bp, Bph) - _mm(Bph, Bp) - _mm(Fh, F) + _mm(G, Gh) - LVp
    return HV, HVp, _sq(HV) + _sq(HVp)


@njit(cache=True)
def _exp_pair(w, U, eps):
    n = w.shape[0]
    E = np.zeros((n, n), dtype=np.complex128)
    Ei = np.zeros((n, n), dtype=np.complex128)
    for k in range(n):
        E[k, k] = np.exp(-eps * w[k])
        Ei[k, k] = np.exp(eps * w[k])
    Uh = _ct(U)
    return _mm(_mm(U, E), Uh), _mm(_mm(U, Ei), Uh)


@njit(cache=True)
def _eigh(H):
    n = H.shape[0]
    if n == 0:
        return np.zeros(0), np.zeros((0, 0), dtype=np.complex128)
    # symmetrize against rounding before the hermitian solver
    Hs = 0.5 * (H + _ct(H))
    return np.linalg.eigh(Hs)


@njit(cache=True)
def flow(A, B, I, J, Ap, Bp, F, G, LV, LVp, max_iters, tol):
    """Returns the final matrices, the accepted-step count and the history of
    ``|mu_1 - level|``."""
    HV, HVp, f = _residual(A, B, I, J, Ap, Bp, F, G, LV, LVp)
    history = np.empty(max_iters + 1)
    history[0] = np.sqrt(f)
    it = 0
    while True:
        size = _sq(A) + _sq(B) + _sq(I) + _sq(J) + _sq(Ap) + _sq(Bp) + _sq(F) + _sq(G)
        if np.sqrt(f) <= tol * (1.0 + size) or it == max_iters:
            break
        wV, UV = _eigh(HV)
        wVp, UVp = _eigh(HVp)
        smax = 0.0
        for v in wV:
            smax = max(smax, abs(v))
        for v in wVp:
            smax = max(smax, abs(v))
        eps = 1.0 / (1.0 + smax * smax)
        accepted = False
        while eps >= 1e-30:
            h, hi = _exp_pair(wV, UV, eps)
            hp, hpi = _exp_pair(wVp, UVp, eps)
            tA, tB = _mm(_mm(h, A), hi), _mm(_mm(h, B), hi)
            tI, tJ = _mm(h, I), _mm(J, hi)
            tAp, tBp = _mm(_mm(hp, Ap), hpi), _mm(_mm(hp, Bp), hpi)
            tF, tG = _mm(_mm(h, F), hpi), _mm(_mm(hp, G), hi)
            tHV, tHVp, tf = _residual(tA, tB, tI, tJ, tAp, tBp, tF, tG, LV, LVp)
            if tf < f:
                accepted = True
                break
            eps *= 0.5
        if not accepted:
            break
        A, B, I, J, Ap, Bp, F, G = tA, tB, tI, tJ, tAp, tBp, tF, tG
        HV, HVp, f = tHV, tHVp, tf
        it += 1
        history[it] = np.sqrt(f)
    return A, B, I, J, Ap, Bp, F, G, it, history[: it + 1]
