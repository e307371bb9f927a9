from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from adhm_lab.datum import DimVector, EnhancedDatum, GaugeElement, StabilityParameter, act
from adhm_lab.errors import ParameterError
from adhm_lab.stability import (
    chamber_check,
    chi_character,
    destabilizer_search,
    invariant_closure,
    is_stable,
)

from helpers import SMALL_DIMS, stable
from oracles import word_closure_dim

D121 = DimVector(1, 2, 1)


@pytest.mark.parametrize(
    "I, expected",
    [([[1], [1]], 2), ([[1], [0]], 1), ([[0], [0]], 0)],
)
def test_closure_of_diagonal_pair(I, expected):
    A, B = np.diag([0, 1]), np.diag([0, 2])
    assert invariant_closure(A, B, np.array(I, dtype=complex)) == expected


@given(st.integers(0, 2**31), st.integers(1, 4), st.integers(1, 2), st.integers(0, 3))
def test_closure_matches_word_enumeration(seed, c, r, nilp):
    rng = np.random.default_rng(seed)
    # block-triangular pairs and low-rank seeds exercise proper closures
    A = np.triu(rng.standard_normal((c, c)), k=min(nilp, c - 1))
    B = np.triu(rng.standard_normal((c, c)))
    I = rng.standard_normal((c, r))
    I[: c // 2] = 0
    assert invariant_closure(A, B, I) == word_closure_dim(A, B, I)


def test_unstable_when_f_is_zero(line_datum):
    X = line_datum.replace(F=np.zeros((2, 1)))
    rep = is_stable(X)
    assert not rep.f_injective
    assert rep.verdict == "unstable"


def test_unstable_when_closure_is_proper(line_datum):
    X = line_datum.replace(I=np.array([[1], [0]]))
    rep = is_stable(X)
    assert rep.f_injective and not rep.adhm_stable
    assert rep.closure_dim == 1 and rep.verdict == "unstable"


@pytest.mark.parametrize("dims", SMALL_DIMS)
def test_generated_data_are_stable(dims):
    for seed in range(3):
        assert is_stable(stable(dims, seed)).verdict == "stable"


@given(st.integers(0, 2**31))
def test_stability_is_gauge_invariant(seed):
    X = stable((2, 3, 1), seed % 4)
    g = GaugeElement.random(X.dims, np.random.default_rng(seed))
    assert is_stable(act(g, X)).verdict == "stable"


def test_stable_valid_data_force_g_to_vanish():
    # FG = 0 with F injective leaves no room for G
    X = stable((1, 2, 1), 3)
    assert np.linalg.norm(X.G) == 0
    assert is_stable(X).f_injective


def test_chamber_examples():
    assert chamber_check(D121, StabilityParameter(-2, 1, 3))
    assert not chamber_check(D121, StabilityParameter.from_plane(D121, -1, 0))
    assert not chamber_check(D121, StabilityParameter.from_plane(D121, 0, 1))


def test_chamber_check_enforces_relation():
    with pytest.raises(ParameterError):
        chamber_check(D121, StabilityParameter(1, 1, 1))


def test_outside_chamber_verdict(line_datum):
    theta = StabilityParameter.from_plane(D121, 0, 1)
    assert is_stable(line_datum, theta).verdict == "outside-chamber-unknown"


def test_character_values():
    theta = StabilityParameter(-2, 1, 3)
    assert chi_character(theta, GaugeElement.identity(D121)) == 1
    g = GaugeElement(2 * np.eye(2), np.eye(1))
    assert chi_character(theta, g) == pytest.approx(16)


def test_character_rejects_fractional_exponents():
    theta = StabilityParameter(Fraction(-1, 2), 1, 0)
    with pytest.raises(ParameterError):
        chi_character(theta, GaugeElement.identity(D121))


@given(st.integers(0, 2**31))
def test_character_is_multiplicative(seed):
    rng = np.random.default_rng(seed)
    D = DimVector(1, 3, 1)
    theta = StabilityParameter.default_chamber(D)
    g1, g2 = GaugeElement.random(D, rng), GaugeElement.random(D, rng)
    lhs = chi_character(theta, g1 * g2)
    rhs = chi_character(theta, g1) * chi_character(theta, g2)
    assert abs(lhs - rhs) <= 1e-10 * abs(rhs)


def test_certificate_for_invariant_line(line_datum):
    X = line_datum.replace(I=np.array([[1], [0]]))
    res = destabilizer_search(X, StabilityParameter.default_chamber(D121))
    assert res.found
    cert = res.certificate
    assert cert.type[:2] == (1, 1)
    assert cert.slope >= 0
    e1 = np.array([1, 0])
    assert np.linalg.norm(e1 - cert.basis_V @ (cert.basis_V.conj().T @ e1)) < 1e-12


def test_certificate_for_kernel_of_f(line_datum):
    X = line_datum.replace(F=np.zeros((2, 1)))
    theta = StabilityParameter.default_chamber(D121)
    res = destabilizer_search(X, theta)
    assert res.certificate.type == (0, 0, 1)
    assert res.certificate.slope == theta.thetaprime


@pytest.mark.parametrize("dims", SMALL_DIMS)
def test_no_certificate_for_stable_data(dims):
    X = stable(dims, 2)
    res = destabilizer_search(X, StabilityParameter.default_chamber(X.dims))
    assert not res.found and res.conclusive


def test_two_dimensional_kernel_certificate():
    D = DimVector(1, 3, 2)
    X = EnhancedDatum(D, np.zeros((3, 3)), np.zeros((3, 3)), [[1], [1], [1]], np.zeros((1, 3)),
                      np.zeros((2, 2)), np.zeros((2, 2)), np.zeros((3, 2)))
    res = destabilizer_search(X, StabilityParameter.default_chamber(D))
    assert res.certificate.type == (0, 0, 2)
