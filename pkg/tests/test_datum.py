import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from adhm_lab import datum as dt
from adhm_lab.datum import (
    RESIDUAL_NAMES,
    DimVector,
    EnhancedDatum,
    GaugeElement,
    StabilityParameter,
    act,
    datum_from_dict,
    datum_to_dict,
    is_valid,
    residual_scale,
    residuals,
)
from adhm_lab.errors import DimensionError, DomainError, InvertibilityError, ParameterError
from adhm_lab.stability import is_stable

from helpers import SMALL_DIMS, stable
from oracles import residuals_by_hand


def test_residual_names_are_fixed():
    assert RESIDUAL_NAMES == ("[A,B]+IJ", "[A',B']", "AF-FA'", "BF-FB'", "JF", "GI", "FG", "GA-A'G", "GB-B'G")


def test_zero_datum_with_embedding_has_zero_residuals():
    D = DimVector(2, 3, 2)
    X = EnhancedDatum(D, np.zeros((3, 3)), np.zeros((3, 3)), np.zeros((3, 2)), np.zeros((2, 3)),
                      np.zeros((2, 2)), np.zeros((2, 2)), np.eye(3, 2))
    assert all(v == 0 for v in residuals(X).values())


def test_line_datum_solves_equations(line_datum):
    assert all(v == 0 for v in residuals(line_datum).values())


def test_fg_residual_reports_norm_of_fg(line_datum):
    G = np.array([[0.5, 0.0]])
    X = line_datum.replace(G=G)
    FG = line_datum.F @ G
    assert residuals(X)["FG"] == pytest.approx(np.linalg.norm(FG))
    assert residuals(X)["FG"] > 0


@pytest.mark.parametrize("dims", SMALL_DIMS)
def test_residuals_agree_with_hand_oracle(dims, rng):
    X = stable(dims, 3)
    noisy = X.replace(A=X.A + 0.1 * rng.standard_normal(X.A.shape), G=rng.standard_normal(X.G.shape))
    for Y in (X, noisy):
        got = list(residuals(Y).values())
        np.testing.assert_allclose(got, residuals_by_hand(Y), rtol=1e-12, atol=1e-14)


def test_shape_mismatch_raises_dimension_error():
    with pytest.raises(DimensionError):
        EnhancedDatum(DimVector(1, 2, 1), np.zeros((2, 2)), np.zeros((2, 2)), np.zeros((2, 1)),
                      np.zeros((1, 2)), [[0]], [[0]], np.zeros((3, 1)))


def test_dimvector_rejects_bad_values():
    with pytest.raises(DomainError):
        DimVector(0, 2, 1)
    with pytest.raises(DomainError):
        DimVector.parse("1,2")
    assert DimVector.parse("2, 3, 1").as_tuple() == (2, 3, 1)


def test_identity_gauge_is_bitwise_identity(line_datum):
    X = stable((2, 3, 1), 1)
    for Y in (X, line_datum):
        assert act(GaugeElement.identity(Y.dims), Y) == Y


@given(st.integers(0, 2**31), st.sampled_from(SMALL_DIMS))
def test_gauge_then_inverse_recovers_datum(seed, dims):
    X = stable(dims, seed % 7)
    g = GaugeElement.random(X.dims, np.random.default_rng(seed))
    Y = act(g.inverse(), act(g, X))
    for name in dt.MATRIX_NAMES:
        assert np.linalg.norm(getattr(Y, name) - getattr(X, name)) <= 1e-10 * max(1.0, X.norm())


@given(st.integers(0, 2**31), st.sampled_from(SMALL_DIMS))
def test_gauge_action_preserves_equations(seed, dims):
    X = stable(dims, seed % 5)
    g = GaugeElement.random(X.dims, np.random.default_rng(seed))
    Y = act(g, X)
    bound = 1e-9 * (1 + X.norm() ** 2)
    assert max(residuals(Y).values()) <= bound


@given(st.integers(0, 2**31))
def test_gauge_action_is_a_group_action(seed):
    rng = np.random.default_rng(seed)
    X = stable((2, 2, 1), seed % 3)
    g1, g2 = GaugeElement.random(X.dims, rng), GaugeElement.random(X.dims, rng)
    lhs = act(g2 * g1, X)
    rhs = act(g2, act(g1, X))
    for name in dt.MATRIX_NAMES:
        np.testing.assert_allclose(getattr(lhs, name), getattr(rhs, name), atol=1e-9 * (1 + X.norm()))


def test_singular_gauge_is_rejected():
    with pytest.raises(InvertibilityError):
        GaugeElement(np.array([[1, 1], [1, 1]]), np.eye(1))


def test_gauge_size_mismatch():
    X = stable((1, 2, 1))
    with pytest.raises(DimensionError):
        act(GaugeElement(np.eye(3), np.eye(1)), X)


def test_stability_parameter_relation_and_floats():
    D = DimVector(1, 2, 1)
    theta = StabilityParameter(-2, 1, 3)
    assert theta.relation(D) == 0
    assert StabilityParameter.default_chamber(D) == theta
    with pytest.raises(ParameterError):
        StabilityParameter(-2.0, 1, 3)
    with pytest.raises(ParameterError):
        StabilityParameter(1, 1, 1).check(D)


def test_json_round_trip_is_exact():
    X = stable((2, 3, 1), 4)
    text = dt.dumps(datum_to_dict(X))
    assert datum_from_dict(json.loads(text)) == X
    assert dt.load_datum(text) == X


def test_json_without_g_defaults_to_zero():
    X = stable((1, 2, 1), 0)
    obj = datum_to_dict(X)
    del obj["matrices"]["G"]
    assert np.all(datum_from_dict(obj).G == 0)


def test_json_missing_matrix_is_dimension_error():
    obj = datum_to_dict(stable((1, 2, 1)))
    del obj["matrices"]["F"]
    with pytest.raises(DimensionError):
        datum_from_dict(obj)


@pytest.mark.parametrize("style", ["diagonal", "jordan", "jordan-b", "lifted"])
def test_generated_data_are_valid_stable_and_have_zero_g(style):
    for seed in range(5):
        X = stable((1, 2, 1), seed, style)
        assert max(residuals(X).values()) <= residual_scale(X, 1e-12)
        assert is_stable(X).verdict == "stable"
        assert np.all(X.G == 0)


def test_diagonal_style_normal_form():
    X = stable((1, 2, 1), 11, "diagonal")
    assert np.count_nonzero(X.A - np.diag(np.diag(X.A))) == 0
    assert np.count_nonzero(X.B - np.diag(np.diag(X.B))) == 0
    np.testing.assert_array_equal(X.F, [[1], [0]])
    assert X.A[0, 0] == X.Aprime[0, 0] and X.B[0, 0] == X.Bprime[0, 0]


def test_jordan_style_normal_form():
    X = stable((1, 2, 1), 11, "jordan")
    a = X.Aprime[0, 0]
    np.testing.assert_array_equal(X.A, [[a, 1], [0, a]])
    np.testing.assert_array_equal(X.F, [[1], [0]])


def test_jordan_b_has_scalar_a_and_nilpotent_part_in_b():
    X = stable((1, 2, 1), 2, "jordan-b")
    np.testing.assert_array_equal(X.A, X.Aprime[0, 0] * np.eye(2))
    assert X.B[0, 1] == 1 and X.B[1, 0] == 0


def test_lifted_231_meets_generation_tolerance():
    X = stable((2, 3, 1), 0)
    assert max(residuals(X).values()) <= residual_scale(X, 1e-12)
    assert is_stable(X).verdict == "stable"


def test_generation_is_deterministic():
    assert stable((2, 3, 1), 9) == stable((2, 3, 1), 9)


def test_generation_domain_errors():
    with pytest.raises(DomainError):
        stable((1, 2, 3))
    with pytest.raises(DomainError):
        stable((1, 3, 1), style="jordan")
    with pytest.raises(DomainError):
        stable((1, 2, 1), style="spiral")


def test_is_valid_flags_perturbation(line_datum):
    assert is_valid(line_datum)
    assert not is_valid(line_datum.replace(J=np.array([[1e-3, 0]])))
