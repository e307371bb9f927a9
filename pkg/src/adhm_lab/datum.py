"""Enhanced ADHM data: types, equation residuals, gauge action, JSON I/O.

An enhanced datum of type ``(r, c, c')`` is a tuple
``(A, B, I, J, A', B', F, G)`` of complex matrices on ``W = C^r``,
``V = C^c`` and ``V' = C^{c'}``::

    A, B : V -> V        I : W -> V       J : V -> W
    A', B' : V' -> V'    F : V' -> V      G : V -> V'

Instances are immutable; every operation returns new objects.
"""

import json
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import DimensionError, DomainError, InvertibilityError, ParameterError
from .linalg import fro

MATRIX_NAMES = ("A", "B", "I", "J", "Aprime", "Bprime", "F", "G")

RESIDUAL_NAMES = (
    "[A,B]+IJ",
    "[A',B']",
    "AF-FA'",
    "BF-FB'",
    "JF",
    "GI",
    "FG",
    "GA-A'G",
    "GB-B'G",
)


@dataclass
class Tolerances:
    """Global tolerance settings.

    ``residual_tau`` scales as ``tau * (1 + ||X||^2)``; ``rank_rtol`` is the
    relative SVD cut used by all numerical rank decisions.
    """

    residual_tau: float = 1e-10
    rank_rtol: float = 1e-9
    flow_tol: float = 1e-8
    min_rcond: float = 1e-12

    def update(self, **kwargs):
        for key, value in kwargs.items():
            if not hasattr(self, key):
                raise AttributeError(key)
            if not value > 0:
                raise ValueError(f"tolerance {key} must be positive, got {value}")
            setattr(self, key, float(value))


TOLERANCES = Tolerances()


def _frozen(M, dtype=complex):
    arr = np.array(M, dtype=dtype, copy=True)
    if arr.ndim != 2:
        raise DimensionError(f"expected a 2-d array, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class DimVector:
    r: int
    c: int
    cprime: int = 0

    def __post_init__(self):
        for name in ("r", "c", "cprime"):
            value = getattr(self, name)
            if int(value) != value:
                raise DomainError(f"{name} must be an integer, got {value!r}")
            object.__setattr__(self, name, int(value))
        if self.r < 1 or self.c < 1 or self.cprime < 0:
            raise DomainError(f"need r >= 1, c >= 1, c' >= 0; got {self.as_tuple()}")

    def as_tuple(self):
        return (self.r, self.c, self.cprime)

    @classmethod
    def parse(cls, text):
        """Parse ``"r,c,c'"``."""
        parts = [p.strip() for p in str(text).split(",")]
        if len(parts) != 3:
            raise DomainError(f"dims must look like 'r,c,cprime', got {text!r}")
        return cls(*(int(p) for p in parts))

    def shapes(self):
        r, c, cp = self.as_tuple()
        return {
            "A": (c, c),
            "B": (c, c),
            "I": (c, r),
            "J": (r, c),
            "Aprime": (cp, cp),
            "Bprime": (cp, cp),
            "F": (c, cp),
            "G": (cp, c),
        }


@dataclass(frozen=True)
class EnhancedDatum:
    """The tuple ``(A, B, I, J, A', B', F, G)`` together with its dimensions."""

    dims: DimVector
    A: np.ndarray
    B: np.ndarray
    I: np.ndarray
    J: np.ndarray
    Aprime: np.ndarray
    Bprime: np.ndarray
    F: np.ndarray
    G: np.ndarray = None

    def __post_init__(self):
        shapes = self.dims.shapes()
        if self.G is None:
            object.__setattr__(self, "G", np.zeros(shapes["G"], dtype=complex))
        for name in MATRIX_NAMES:
            arr = _frozen(getattr(self, name))
            if arr.shape != shapes[name]:
                raise DimensionError(
                    f"{name} has shape {arr.shape}, expected {shapes[name]} for dims {self.dims.as_tuple()}"
                )
            object.__setattr__(self, name, arr)

    @classmethod
    def from_matrices(cls, A, B, I, J, Aprime, Bprime, F, G=None):
        A = np.atleast_2d(np.asarray(A, dtype=complex))
        I = np.asarray(I, dtype=complex)
        c = A.shape[0]
        I = I.reshape(c, -1)
        r = I.shape[1]
        F = np.asarray(F, dtype=complex).reshape(c, -1)
        cp = F.shape[1]
        return cls(
            DimVector(r, c, cp),
            A,
            np.atleast_2d(B),
            I,
            np.asarray(J, dtype=complex).reshape(r, c),
            np.asarray(Aprime, dtype=complex).reshape(cp, cp),
            np.asarray(Bprime, dtype=complex).reshape(cp, cp),
            F,
            None if G is None else np.asarray(G, dtype=complex).reshape(cp, c),
        )

    def matrices(self):
        return {name: getattr(self, name) for name in MATRIX_NAMES}

    def replace(self, **kwargs):
        mats = self.matrices()
        mats.update(kwargs)
        return EnhancedDatum(self.dims, **mats)

    def norm(self):
        return float(np.sqrt(sum(fro(M) ** 2 for M in self.matrices().values())))

    def adhm_part(self):
        return ADHMDatum(self.dims.r, self.dims.c, self.A, self.B, self.I, self.J)

    def __eq__(self, other):
        if not isinstance(other, EnhancedDatum) or self.dims != other.dims:
            return NotImplemented
        return all(np.array_equal(getattr(self, n), getattr(other, n)) for n in MATRIX_NAMES)

    __hash__ = None


@dataclass(frozen=True)
class ADHMDatum:
    """A plain ADHM datum ``(A, B, I, J)``; ``c = 0`` is allowed."""

    r: int
    c: int
    A: np.ndarray
    B: np.ndarray
    I: np.ndarray
    J: np.ndarray

    def __post_init__(self):
        if self.r < 1 or self.c < 0:
            raise DomainError(f"need r >= 1 and c >= 0, got r={self.r}, c={self.c}")
        expected = {"A": (self.c, self.c), "B": (self.c, self.c), "I": (self.c, self.r), "J": (self.r, self.c)}
        for name, shape in expected.items():
            arr = _frozen(np.asarray(getattr(self, name), dtype=complex).reshape(shape))
            object.__setattr__(self, name, arr)

    def residual(self):
        return fro(self.A @ self.B - self.B @ self.A + self.I @ self.J)

    def norm(self):
        return float(np.sqrt(sum(fro(M) ** 2 for M in (self.A, self.B, self.I, self.J))))

    def is_valid(self, tau=None):
        tau = TOLERANCES.residual_tau if tau is None else tau
        return self.residual() <= tau * (1.0 + self.norm() ** 2)


@dataclass(frozen=True)
class GaugeElement:
    """An element ``(h, h')`` of ``GL(V) x GL(V')``."""

    h: np.ndarray
    hprime: np.ndarray
    min_rcond: float = field(default=None, compare=False)

    def __post_init__(self):
        thresh = TOLERANCES.min_rcond if self.min_rcond is None else self.min_rcond
        for name in ("h", "hprime"):
            arr = _frozen(getattr(self, name))
            if arr.shape[0] != arr.shape[1]:
                raise DimensionError(f"{name} must be square, got {arr.shape}")
            if arr.size and 1.0 / np.linalg.cond(arr) < thresh:
                raise InvertibilityError(f"{name} is numerically singular (cond={np.linalg.cond(arr):.3e})")
            object.__setattr__(self, name, arr)

    @property
    def condition(self):
        conds = [np.linalg.cond(M) for M in (self.h, self.hprime) if M.size]
        return float(max(conds)) if conds else 1.0

    @classmethod
    def identity(cls, dims):
        return cls(np.eye(dims.c, dtype=complex), np.eye(dims.cprime, dtype=complex))

    @classmethod
    def random(cls, dims, rng, max_cond=10.0, unitary=False):
        """Random gauge element with both blocks of condition number <= max_cond."""
        blocks = []
        for n in (dims.c, dims.cprime):
            if n == 0:
                blocks.append(np.zeros((0, 0), dtype=complex))
                continue
            Z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            Q, R = np.linalg.qr(Z)
            Q = Q * (np.diag(R) / np.abs(np.diag(R)))
            if unitary:
                blocks.append(Q)
                continue
            Z2 = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            Q2, _ = np.linalg.qr(Z2)
            s = np.exp(rng.uniform(0.0, np.log(max_cond), n))
            blocks.append(Q @ np.diag(s) @ Q2)
        return cls(*blocks)

    def inverse(self):
        return GaugeElement(np.linalg.inv(self.h), np.linalg.inv(self.hprime))

    def __mul__(self, other):
        """Group product: ``(g2 * g1)`` acts as ``g1`` first, then ``g2``."""
        return GaugeElement(self.h @ other.h, self.hprime @ other.hprime)


@dataclass(frozen=True)
class StabilityParameter:
    """Rational triple ``(theta, theta', theta_inf)``."""

    theta: Fraction
    thetaprime: Fraction
    thetainf: Fraction

    def __post_init__(self):
        for name in ("theta", "thetaprime", "thetainf"):
            value = getattr(self, name)
            if isinstance(value, float):
                raise ParameterError(f"{name} must be rational (int or Fraction), got float {value}")
            object.__setattr__(self, name, Fraction(value))

    def relation(self, dims):
        return dims.c * self.theta + dims.cprime * self.thetaprime + dims.r * self.thetainf

    def check(self, dims):
        if self.relation(dims) != 0:
            raise ParameterError(
                f"c*theta + c'*theta' + r*theta_inf = {self.relation(dims)} != 0 for dims {dims.as_tuple()}"
            )
        return self

    @classmethod
    def from_plane(cls, dims, theta, thetaprime):
        """Solve the relation for ``theta_inf``."""
        theta, thetaprime = Fraction(theta), Fraction(thetaprime)
        thetainf = -(dims.c * theta + dims.cprime * thetaprime) / dims.r
        return cls(theta, thetaprime, thetainf)

    @classmethod
    def default_chamber(cls, dims):
        """``theta' = 1, theta = -(c' + 1)``, which lies inside the stable chamber."""
        return cls.from_plane(dims, -(dims.cprime + 1), 1)


# ---------------------------------------------------------------------------
# equations and the gauge action


def residuals(X):
    """Frobenius norms of the nine enhanced ADHM equations, in fixed order."""
    A, B, I, J, Ap, Bp, F, G = (X.A, X.B, X.I, X.J, X.Aprime, X.Bprime, X.F, X.G)
    values = (
        A @ B - B @ A + I @ J,
        Ap @ Bp - Bp @ Ap,
        A @ F - F @ Ap,
        B @ F - F @ Bp,
        J @ F,
        G @ I,
        F @ G,
        G @ A - Ap @ G,
        G @ B - Bp @ G,
    )
    return dict(zip(RESIDUAL_NAMES, (fro(v) for v in values)))


def residual_scale(X, tau=None):
    tau = TOLERANCES.residual_tau if tau is None else tau
    return tau * (1.0 + X.norm() ** 2)


def is_valid(X, tau=None):
    bound = residual_scale(X, tau)
    return all(v <= bound for v in residuals(X).values())


def act(g, X):
    """Apply ``(h, h')`` to ``X``::

        (hAh^-1, hBh^-1, hI, Jh^-1, h'A'h'^-1, h'B'h'^-1, hFh'^-1, h'Gh^-1)
    """
    if g.h.shape[0] != X.dims.c or g.hprime.shape[0] != X.dims.cprime:
        raise DimensionError(
            f"gauge of sizes ({g.h.shape[0]}, {g.hprime.shape[0]}) does not match dims {X.dims.as_tuple()}"
        )
    h, hp = g.h, g.hprime
    hi = np.linalg.inv(h)
    hpi = np.linalg.inv(hp) if hp.size else hp
    return EnhancedDatum(
        X.dims,
        h @ X.A @ hi,
        h @ X.B @ hi,
        h @ X.I,
        X.J @ hi,
        hp @ X.Aprime @ hpi,
        hp @ X.Bprime @ hpi,
        h @ X.F @ hpi,
        hp @ X.G @ hi,
    )


# ---------------------------------------------------------------------------
# JSON


def _encode_matrix(M):
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(M)]


def _decode_matrix(rows, shape, name):
    try:
        arr = np.array([[complex(e[0], e[1]) for e in row] for row in rows], dtype=complex)
    except (TypeError, IndexError, ValueError) as exc:
        raise DimensionError(f"matrix {name}: entries must be [re, im] pairs ({exc})") from None
    if arr.size == 0:
        arr = np.zeros(shape, dtype=complex)
    if arr.shape != shape:
        raise DimensionError(f"matrix {name} has shape {arr.shape}, expected {shape}")
    return arr


def datum_to_dict(X):
    return {
        "dims": {"r": X.dims.r, "c": X.dims.c, "cprime": X.dims.cprime},
        "matrices": {name: _encode_matrix(getattr(X, name)) for name in MATRIX_NAMES},
    }


def datum_from_dict(obj):
    try:
        d = obj["dims"]
        dims = DimVector(d["r"], d["c"], d.get("cprime", 0))
        mats = obj["matrices"]
    except (KeyError, TypeError) as exc:
        raise DimensionError(f"malformed datum object: missing {exc}") from None
    shapes = dims.shapes()
    out = {}
    for name in MATRIX_NAMES:
        if name not in mats:
            if name == "G":
                continue
            raise DimensionError(f"matrix {name} missing")
        out[name] = _decode_matrix(mats[name], shapes[name], name)
    return EnhancedDatum(dims, **out)


def adhm_to_dict(X2):
    return {
        "dims": {"r": X2.r, "c": X2.c},
        "matrices": {name: _encode_matrix(getattr(X2, name)) for name in ("A", "B", "I", "J")},
    }


def adhm_from_dict(obj):
    try:
        r, c = int(obj["dims"]["r"]), int(obj["dims"]["c"])
        mats = obj["matrices"]
        shapes = {"A": (c, c), "B": (c, c), "I": (c, r), "J": (r, c)}
        return ADHMDatum(r, c, **{n: _decode_matrix(mats[n], s, n) for n, s in shapes.items()})
    except (KeyError, TypeError) as exc:
        raise DimensionError(f"malformed ADHM datum object: missing {exc}") from None


def dumps(obj):
    """Deterministic JSON text (sorted keys, repr floats)."""
    return json.dumps(obj, sort_keys=True, indent=1)


def load_datum(text):
    obj = json.loads(text)
    if "cprime" in obj.get("dims", {}) or "Aprime" in obj.get("matrices", {}):
        return datum_from_dict(obj)
    return adhm_from_dict(obj)


# ---------------------------------------------------------------------------
# generation


def generate_stable(dims, seed, style="lifted", max_tries=20):
    """Seeded stable datum of the given type.

    Styles
    ------
    diagonal
        ``A``, ``B`` diagonal over distinct points, ``F`` the inclusion of the
        first ``c'`` coordinates, ``J = 0``.
    jordan
        ``c' = 1``; a 2x2 Jordan block in both ``A`` and ``B`` on the first
        two coordinates (neither is diagonalizable).
    jordan-b
        ``c' = 1``; ``A`` scalar and ``B`` a Jordan block on the first two
        coordinates.
    lifted
        A stable plain datum of type ``(r, c - c')`` lifted through the fiber
        system and then moved by a random well-conditioned gauge element.
    """
    from . import generation

    return generation.generate_stable(dims, seed, style=style, max_tries=max_tries)
