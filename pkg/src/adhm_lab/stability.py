"""Stability of enhanced ADHM data.

Inside the chamber ``theta' > 0, theta + c' theta' < 0`` stability is the
pair of conditions

* (S.1) ``F`` is injective;
* (S.2) no proper subspace of ``V`` is preserved by ``A``, ``B`` and
  contains ``Im I``.

Outside the chamber only a heuristic search for destabilizing
subrepresentations is offered.
"""

import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from .datum import TOLERANCES
from .errors import ParameterError
from .linalg import numerical_rank, orth_complement, range_basis, null_space, singular_values


@dataclass(frozen=True)
class StabilityReport:
    f_injective: bool
    f_smallest_singular: float
    adhm_stable: bool
    closure_dim: int
    chamber_ok: bool
    verdict: str

    def to_dict(self):
        return asdict(self)

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)


def _span(vectors, rtol):
    if vectors.shape[1] == 0:
        return vectors
    return range_basis(vectors, rtol)


def invariant_closure_basis(mats, seeds, rtol=None):
    """Orthonormal basis of the smallest subspace containing ``seeds`` and
    invariant under every matrix in ``mats``."""
    rtol = TOLERANCES.rank_rtol if rtol is None else rtol
    seeds = np.asarray(seeds, dtype=complex)
    n = seeds.shape[0]
    S = _span(seeds, rtol)
    for _ in range(n + 1):
        grown = np.hstack([S] + [M @ S for M in mats])
        S_new = _span(grown, rtol)
        if S_new.shape[1] == S.shape[1]:
            return S_new
        S = S_new
    return S


def invariant_closure(A, B, I, rtol=None):
    """Dimension of the smallest ``(A, B)``-invariant subspace containing ``Im I``.

    Iterates ``S <- S + AS + BS`` from ``S = colspan(I)`` until the numerical
    rank stops growing.
    """
    return invariant_closure_basis((np.asarray(A), np.asarray(B)), I, rtol).shape[1]


def chamber_check(dims, theta):
    """Exact test of ``theta' > 0`` and ``theta + c' theta' < 0``."""
    theta.check(dims)
    return theta.thetaprime > 0 and theta.theta + dims.cprime * theta.thetaprime < 0


def is_stable(X, theta=None, rtol=None):
    rtol = TOLERANCES.rank_rtol if rtol is None else rtol
    cp = X.dims.cprime
    s = singular_values(X.F)
    smallest = float(s[-1]) if cp else float("inf")
    f_rank = numerical_rank(X.F, rtol).rank if cp else 0
    f_inj = f_rank == cp
    closure = invariant_closure(X.A, X.B, X.I, rtol)
    adhm_stable = closure == X.dims.c
    if theta is None:
        chamber_ok = True
    else:
        chamber_ok = chamber_check(X.dims, theta)
    if f_inj and adhm_stable:
        verdict = "stable" if chamber_ok else "outside-chamber-unknown"
    else:
        verdict = "unstable" if chamber_ok else "outside-chamber-unknown"
    return StabilityReport(f_inj, smallest, adhm_stable, closure, chamber_ok, verdict)


def chi_character(theta, g):
    """``det(h)^(-theta) * det(h')^(-theta')`` for integral ``theta, theta'``."""
    exps = []
    for value in (theta.theta, theta.thetaprime):
        if Fraction(value).denominator != 1:
            raise ParameterError(f"character needs integer exponents, got {value}")
        exps.append(int(value))
    dh = np.linalg.det(g.h) if g.h.size else 1.0 + 0j
    dhp = np.linalg.det(g.hprime) if g.hprime.size else 1.0 + 0j
    return complex(dh) ** (-exps[0]) * complex(dhp) ** (-exps[1])


# ---------------------------------------------------------------------------
# heuristic destabilizer search


@dataclass(frozen=True)
class Certificate:
    """A subrepresentation whose slope violates Theta-stability."""

    rtilde: int
    ctilde: int
    cprimetilde: int
    slope: Fraction
    basis_V: np.ndarray = field(repr=False)
    basis_Vprime: np.ndarray = field(repr=False)
    inequality: str = ""

    @property
    def type(self):
        return (self.rtilde, self.ctilde, self.cprimetilde)


@dataclass(frozen=True)
class SearchResult:
    certificate: Certificate = None
    conclusive: bool = False
    candidates_tried: int = 0

    @property
    def found(self):
        return self.certificate is not None


def _preimage(F, T, rtol):
    """Orthonormal basis of ``F^{-1}(span T)``."""
    cp = F.shape[1]
    if cp == 0:
        return np.zeros((0, 0), dtype=complex)
    if T.shape[1] == 0:
        return null_space(F, rtol)
    Tperp = orth_complement(T)
    if Tperp.shape[1] == 0:
        return np.eye(cp, dtype=complex)
    return null_space(Tperp.conj().T @ F, rtol)


def generated_subrep(X, seeds_V=None, seeds_Vp=None, include_W=False, maximal_Vprime=True, rtol=None):
    """Smallest subrepresentation containing the given seed vectors.

    Returns ``(rtilde, T, U)`` with ``T`` and ``U`` orthonormal bases of the
    ``V`` and ``V'`` parts.  The framing part is all of ``W`` as soon as it is
    forced to be nonzero, matching the restriction to ``rtilde in {0, r}``.
    With ``maximal_Vprime`` the ``V'`` part is enlarged to ``F^{-1}(T)``, which
    only increases the slope when ``theta' > 0``.
    """
    rtol = TOLERANCES.rank_rtol if rtol is None else rtol
    c, cp = X.dims.c, X.dims.cprime
    T = np.zeros((c, 0), complex) if seeds_V is None else _span(np.asarray(seeds_V, complex).reshape(c, -1), rtol)
    U = np.zeros((cp, 0), complex) if seeds_Vp is None else _span(np.asarray(seeds_Vp, complex).reshape(cp, -1), rtol)
    j_tol = rtol * max(1.0, np.linalg.norm(X.J)) * max(X.J.shape)
    with_W = include_W
    for _ in range(c + cp + 3):
        prev = (T.shape[1], U.shape[1], with_W)
        if not with_W and T.shape[1] and np.linalg.norm(X.J @ T) > j_tol:
            with_W = True
        gens = np.hstack([T, X.F @ U] + ([X.I] if with_W else []))
        if gens.shape[1]:
            T = invariant_closure_basis((X.A, X.B), gens, rtol)
        if cp:
            U_gens = np.hstack([U, X.G @ T])
            if U_gens.shape[1]:
                U = invariant_closure_basis((X.Aprime, X.Bprime), U_gens, rtol)
        if (T.shape[1], U.shape[1], with_W) == prev:
            break
    if maximal_Vprime and cp:
        U = _preimage(X.F, T, rtol)
    rtilde = X.dims.r if with_W else 0
    return rtilde, T, U


def _slope(theta, rt, ct, cpt):
    if rt == 0:
        return theta.theta * ct + theta.thetaprime * cpt
    return theta.thetainf * rt + theta.theta * ct + theta.thetaprime * cpt


def destabilizer_search(X, theta, budget=64, seed=0, rtol=None):
    """Look for a proper subrepresentation with non-negative Theta-slope.

    Candidates are generated from ``ker F``, from the invariant closure of
    ``Im I`` (with and without ``Im F``), and from eigenvector seeds of
    generic combinations of ``(A, B)`` and ``(A', B')``.  A hit is a genuine
    certificate of Theta-instability; a miss is conclusive only inside the
    chamber.
    """
    rtol = TOLERANCES.rank_rtol if rtol is None else rtol
    theta.check(X.dims)
    r, c, cp = X.dims.as_tuple()
    rng = np.random.default_rng(seed)
    in_chamber = chamber_check(X.dims, theta)
    tried = 0
    seen = set()

    def consider(rt, T, U, label):
        nonlocal tried
        tried += 1
        ct, cpt = T.shape[1], U.shape[1]
        key = (rt, ct, cpt, label)
        if (rt, ct, cpt) == (r, c, cp) or (rt, ct, cpt) == (0, 0, 0):
            return None
        if key in seen:
            return None
        seen.add(key)
        s = _slope(theta, rt, ct, cpt)
        if s >= 0:
            ineq = "theta*c~ + theta'*c'~ < 0" if rt == 0 else "theta_inf*r~ + theta*c~ + theta'*c'~ < 0"
            return Certificate(rt, ct, cpt, s, T, U, ineq)
        return None

    candidates = []
    if cp:
        K = null_space(X.F, rtol)
        if K.shape[1]:
            candidates.append(("kerF", lambda K=K: (0, np.zeros((c, 0), complex), K)))
    candidates.append(("closure(I)", lambda: generated_subrep(X, include_W=True, rtol=rtol)))
    candidates.append(
        ("closure(I)+F", lambda: generated_subrep(X, seeds_V=X.F, include_W=True, rtol=rtol))
    )
    t = complex(rng.standard_normal(), rng.standard_normal())
    if c:
        _, vecs = np.linalg.eig(X.A + t * X.B)
        for k in range(c):
            v = vecs[:, k : k + 1]
            candidates.append((f"eigV{k}", lambda v=v: generated_subrep(X, seeds_V=v, rtol=rtol)))
            candidates.append((f"eigV{k}+W", lambda v=v: generated_subrep(X, seeds_V=v, include_W=True, rtol=rtol)))
    if cp:
        _, vecs = np.linalg.eig(X.Aprime + t * X.Bprime)
        for k in range(cp):
            u = vecs[:, k : k + 1]
            candidates.append((f"eigV'{k}", lambda u=u: generated_subrep(X, seeds_Vp=u, rtol=rtol)))
    for k in range(max(0, budget - len(candidates))):
        if not c:
            break
        v = rng.standard_normal((c, 1)) + 1j * rng.standard_normal((c, 1))
        candidates.append((f"random{k}", lambda v=v: generated_subrep(X, seeds_V=v, rtol=rtol)))

    for label, make in candidates[:budget]:
        rt, T, U = make()
        cert = consider(rt, T, U, label)
        if cert is not None:
            return SearchResult(cert, True, tried)
    return SearchResult(None, in_chamber, tried)
