"""The acceptance suite: nine structural checks with exact integer targets.

Each check returns a :class:`Criterion` line.  The report text contains no
timings, so two runs with the same seed are byte-identical.
"""

import os
import subprocess
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import deformation as dfm
from . import geometry as geo
from . import moduli_maps as mm
from .datum import DimVector, EnhancedDatum, StabilityParameter, generate_stable, residual_scale, residuals
from .generation import conjugate_adhm, distinct_points, random_stable_adhm
from .stability import is_stable

ACCEPT_DIMS = ((1, 1, 1), (1, 2, 1), (1, 3, 1), (2, 2, 1), (2, 3, 1), (3, 2, 1))
GAP_MIN = 1e3


@dataclass(frozen=True)
class Criterion:
    key: str
    title: str
    passed: bool
    detail: str
    supplementary: bool = False

    def line(self):
        tag = "PASS" if self.passed else "FAIL"
        extra = " (supplementary)" if self.supplementary else ""
        return f"[{tag}] {self.key:<3} {self.title}{extra}: {self.detail}"


def _samples(dims, count, seed):
    return [generate_stable(DimVector(*dims), seed + k) for k in range(count)]


def criterion_1(samples, tau=1e-10):
    total = bad_res = bad_stab = bad_g = 0
    for dims, data in samples.items():
        for X in data:
            total += 1
            bound = residual_scale(X, tau)
            bad_res += any(v > bound for v in residuals(X).values())
            bad_stab += is_stable(X).verdict != "stable"
            bad_g += bool(np.any(X.G != 0))
    ok = bad_res == bad_stab == bad_g == 0
    return Criterion(
        "1",
        "equations and stability",
        ok,
        f"{total} data; residual failures {bad_res}, unstable {bad_stab}, nonzero G {bad_g}",
    )


def criterion_2(samples, seed, count):
    checked = wrong = resampled = 0
    for dims, data in samples.items():
        D = DimVector(*dims)
        r, c, _ = dims
        target = (0, 2 * r * c - r + 1, 0, 0)
        extra_seed = seed + 10_000
        for X in data:
            for _ in range(10):
                co = dfm.cohomology_dims(dfm.build_complex(X, "reduced"))
                if min(co.gaps) >= GAP_MIN:
                    break
                resampled += 1
                X = generate_stable(D, extra_seed)
                extra_seed += 1
            checked += 1
            wrong += co.h != target or min(co.gaps) < GAP_MIN
    rate = resampled / max(1, checked)
    ok = wrong == 0 and rate <= 0.01
    return Criterion(
        "2",
        "cohomology (0, 2rc-r+1, 0, 0), gaps >= 1e3",
        ok,
        f"{checked} data over {len(samples)} dims; mismatches {wrong}; resample rate {rate:.3f}",
    )


def unstable_line_datum():
    """``I = (1,0)^T`` with diagonal ``A, B``: ``span(e_1)`` is invariant and contains ``Im I``."""
    return EnhancedDatum(
        DimVector(1, 2, 1),
        np.diag([0, 1]),
        np.diag([0, 2]),
        [[1], [0]],
        np.zeros((1, 2)),
        [[0]],
        [[0]],
        [[1], [0]],
    )


def criterion_3(samples):
    nonfree = sum(dfm.stabilizer_dim(X) != 0 for data in samples.values() for X in data)
    total = sum(len(d) for d in samples.values())
    bad = dfm.stabilizer_dim(unstable_line_datum())
    ok = nonfree == 0 and bad >= 1
    return Criterion(
        "3",
        "infinitesimal gauge freeness",
        ok,
        f"stabilizer 0 on {total - nonfree}/{total} stable data; unstable invariant-line datum has stabilizer {bad}",
    )


def _random_x2(r, c2, rng):
    return conjugate_adhm(random_stable_adhm(r, c2, rng), rng)


def _scalar_pair(X2, rng):
    spectrum = mm.joint_spectrum(X2.A, X2.B).coords() if X2.c else []
    xs, ys = distinct_points(rng, 1, avoid=spectrum)
    return xs[0], ys[0]


def criterion_4(seed, count=50):
    rng = np.random.default_rng(seed)
    worst = 0.0
    kernel_bad = total = 0
    for r, c2 in ((1, 1), (1, 2), (2, 2)):
        for _ in range(count):
            X2 = _random_x2(r, c2, rng)
            a, b = _scalar_pair(X2, rng)
            X = mm.fiber_lift(X2, [[a]], [[b]], seed=int(rng.integers(2**31)))
            Q = mm.quotient_rep(X)
            worst = max(worst, mm.fingerprint_distance(mm.adhm_fingerprint(Q), mm.adhm_fingerprint(X2)))
            kdim = mm.lift_kernel_dim(X2, [[a]], [[b]])
            c = c2 + 1
            kernel_bad += kdim != mm.lift_kernel_count((r, c2), 1) or kdim < c + r - 1
            total += 1
    ok = worst <= 1e-8 and kernel_bad == 0
    return Criterion(
        "4",
        "quotient of fiber lift matches base; dim ker L",
        ok,
        f"{total} lifts; worst fingerprint deviation {worst:.1e}; kernel-count mismatches {kernel_bad}",
    )


def criterion_5(samples, seed, lifts=10):
    rng = np.random.default_rng(seed)
    grid_fail = checked = 0
    for data in samples.values():
        for X in data[:10]:
            M = mm.MonadPencil(X.adhm_part())
            xs = rng.standard_normal(10) + 1j * rng.standard_normal(10)
            ys = rng.standard_normal(10) + 1j * rng.standard_normal(10)
            for x in xs:
                for y in ys:
                    grid_fail += mm.monad_ranks(M, (x, y, 1.0))[1] != X.dims.c
            checked += 1
    worst = 0.0
    support_bad = 0
    for _ in range(lifts):
        X2 = _random_x2(1, 2, rng)
        a, b = _scalar_pair(X2, rng)
        X = mm.fiber_lift(X2, [[a]], [[b]], seed=int(rng.integers(2**31)))
        supp = mm.quotient_support(X)
        oracle = mm.pencil_scan_support(X.Aprime, X.Bprime)
        expected = mm.PointConfiguration.simple([(-a, -b)])
        support_bad += not (supp.matches(expected, 1e-12) and oracle.matches(supp, 1e-6))
        if oracle.points:
            worst = max(worst, abs(oracle.points[0][0] + a), abs(oracle.points[0][1] + b))
    ok = grid_fail == 0 and support_bad == 0
    return Criterion(
        "5",
        "monad rank and quotient support",
        ok,
        f"beta rank deficient at {grid_fail} of {checked * 100} grid points; "
        f"support mismatches {support_bad}/{lifts}; worst oracle offset {worst:.1e}",
    )


def random_nested(rng):
    n = int(rng.integers(0, 5))
    l = int(rng.integers(0, 3))
    if n + l == 0:
        n = 1
    xs, ys = distinct_points(rng, n + l)
    pts = list(zip(xs, ys))
    return mm.PointConfiguration.simple(pts[:n]), mm.PointConfiguration.simple(pts)


def criterion_6(seed, count=100):
    rng = np.random.default_rng(seed)
    bad = 0
    for _ in range(count):
        Z1, Z2 = random_nested(rng)
        X = mm.nested_hilbert_datum(Z1, Z2)
        valid = all(v <= residual_scale(X) for v in residuals(X).values())
        stable = is_stable(X).verdict == "stable"
        W1, W2 = mm.nested_hilbert_points(X)
        trip = W1.matches(Z1, 1e-8) and W2.matches(Z2, 1e-8)
        bad += not (valid and stable and trip and not np.any(X.J))
    return Criterion("6", "nested Hilbert round trip", bad == 0, f"{count - bad}/{count} configurations")


def criterion_7(samples, seed, flow_samples=5, chamber_samples=20, ambient_points=20):
    lines = []
    mu_bad = total = 0
    for data in samples.values():
        for X in data:
            total += 1
            mu_bad += geo.moment_map(X).complex_norm() > residual_scale(X)
    lines.append(Criterion("7a", "complex moment map vanishes", mu_bad == 0, f"{total - mu_bad}/{total} data"))

    flow_dims = ((1, 2, 1), (2, 2, 1))
    ok_count = n = 0
    worst_final = 0.0
    for dims in flow_dims:
        for X in _samples(dims, flow_samples, seed + 500):
            res = geo.balance_flow(X)
            n += 1
            ok_count += res.converged and res.spectral_drift <= 1e-6
            worst_final = max(worst_final, res.final_norm / (1 + res.datum.norm() ** 2))
    rate = ok_count / n
    lines.append(
        Criterion(
            "7b",
            "flow reaches mu_1 = 0 within 1e5 steps",
            rate >= 0.95,
            f"{ok_count}/{n} converged; worst scaled final norm {worst_final:.1e}",
        )
    )

    ok_count = n = 0
    drift = 0.0
    for dims in flow_dims:
        for X in _samples(dims, chamber_samples, seed + 700):
            res = geo.balance_flow(X, theta=StabilityParameter.default_chamber(X.dims))
            n += 1
            ok_count += res.converged and res.spectral_drift <= 1e-6
            drift = max(drift, res.spectral_drift)
    lines.append(
        Criterion(
            "7c",
            "flow reaches the chamber level within 1e5 steps",
            ok_count / n >= 0.95,
            f"{ok_count}/{n} converged; worst spectral drift {drift:.1e}",
            supplementary=True,
        )
    )

    rng = np.random.default_rng(seed + 900)
    amb_bad = 0
    seen = []
    for k in range(ambient_points):
        dims = DimVector(*flow_dims[k % 2])
        X = geo.ambient_point(dims, rng) if k % 4 >= 2 else generate_stable(dims, seed + 900 + k)
        res = geo.ambient_tangent_dim(X)
        amb_bad += res.dimension != res.expected or min(res.gaps) < GAP_MIN
        seen.append((dims.as_tuple(), res.dimension))
    dims_seen = sorted(set(seen))
    lines.append(
        Criterion(
            "7d",
            "ambient tangent dimension 2c(r+c')",
            amb_bad == 0,
            f"{ambient_points - amb_bad}/{ambient_points} points; observed " + ", ".join(f"{d}->{v}" for d, v in dims_seen),
        )
    )
    return lines


def criterion_8(seed, count=20):
    D = DimVector(1, 2, 1)
    out = {}
    wd = 0.0
    for style in ("diagonal", "jordan", "jordan-b"):
        ranks = []
        for k in range(count):
            om = geo.omega_on_h1(generate_stable(D, seed + k, style), pairs=100, seed=seed + k)
            ranks.append(om.numerical_rank)
            wd = max(wd, om.welldef_residual)
        out[style] = ranks
    ok = (
        all(r == 4 for r in out["diagonal"])
        and all(r < 4 for r in out["jordan"])
        and all(r < 4 for r in out["jordan-b"])
        and wd <= 1e-8
    )
    hist = "; ".join(f"{s}: ranks {sorted(set(v))}" for s, v in out.items())
    return Criterion("8", "Omega rank by stratum at (1,2,1)", ok, f"{hist}; worst descent residual {wd:.1e}")


def run_suite(seed=0, count=50):
    samples = {dims: _samples(dims, count, seed) for dims in ACCEPT_DIMS}
    results = [
        criterion_1(samples),
        criterion_2(samples, seed, count),
        criterion_3(samples),
        criterion_4(seed),
        criterion_5(samples, seed),
        criterion_6(seed),
    ]
    results += criterion_7(samples, seed)
    results.append(criterion_8(seed))
    return results


def criterion_9(seed=0, count=50):
    """Two concurrent ``accept`` runs (without this check) must print identical bytes."""
    cmd = [sys.executable, "-m", "adhm_lab", "accept", "--seed", str(seed), "--samples", str(count), "--no-determinism"]
    env = dict(os.environ)

    def run(_):
        return subprocess.run(cmd, capture_output=True, env=env)

    with ThreadPoolExecutor(2) as pool:
        pa, pb = pool.map(run, range(2))
    a, b = pa.stdout, pb.stdout
    # a crashed run must not count as a reproduced one
    complete = all(b"required checks passed" in out for out in (a, b))
    same = a == b and complete and pa.returncode == pb.returncode
    detail = f"{len(a)} and {len(b)} bytes, complete reports {complete}, identical {a == b}"
    return Criterion("9", "byte-identical accept output", same, detail)


def report(results):
    lines = [c.line() for c in results]
    required = [c for c in results if not c.supplementary]
    passed = sum(c.passed for c in required)
    lines.append(f"{passed}/{len(required)} required checks passed")
    return "\n".join(lines) + "\n"


def all_passed(results):
    return all(c.passed for c in results if not c.supplementary)
