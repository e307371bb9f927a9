import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from adhm_lab import deformation as dfm
from adhm_lab.datum import DimVector, EnhancedDatum
from adhm_lab.errors import DomainError

from helpers import SMALL_DIMS, stable
from oracles import d0_apply, d1_apply, d2_apply, h1_formula, stack_colmajor


def _rand(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def test_term_dims_at_121():
    D = DimVector(1, 2, 1)
    # C0 = 4+1, C1 = 4+4+2+2+1+1+2, C2 = 4+2+2+1 (+1), C3 = 2
    assert dfm.term_dims(D, "reduced") == (5, 16, 9, 2)
    assert dfm.term_dims(D, "general") == (5, 16, 10, 2)


def test_general_euler_characteristic_at_231():
    K = dfm.build_complex(stable((2, 3, 1)), "general")
    assert K.euler_characteristic() == 10


@given(st.sampled_from(SMALL_DIMS))
def test_reduced_euler_characteristic_equals_h1(dims):
    r, c, _ = dims
    C0, C1, C2, C3 = dfm.term_dims(DimVector(*dims), "reduced")
    assert -C0 + C1 - C2 + C3 == h1_formula(r, c)


@pytest.mark.parametrize("variant", ["general", "reduced"])
@pytest.mark.parametrize("dims", [(1, 2, 1), (2, 3, 1), (3, 2, 1)])
def test_kronecker_differentials_match_matrix_products(dims, variant):
    rng = np.random.default_rng(7)
    X = stable(dims, 1)
    r, c, cp = dims
    K = dfm.build_complex(X, variant)

    h, hp = _rand(rng, (c, c)), _rand(rng, (cp, cp))
    got = K.D0 @ stack_colmajor([h, hp])
    want = stack_colmajor(d0_apply(X, h, hp).values())
    np.testing.assert_allclose(got, want, atol=1e-12)

    t = {name: _rand(rng, shape) for name, shape in dfm.c1_blocks(X.dims)}
    got = K.D1 @ stack_colmajor(t.values())
    np.testing.assert_allclose(got, stack_colmajor(d1_apply(X, t, variant)), atol=1e-12)

    shapes = [(c, c), (c, cp), (c, cp), (r, cp)] + ([(cp, cp)] if variant == "general" else [])
    parts = [_rand(rng, s) for s in shapes]
    got = K.D2 @ stack_colmajor(parts)
    np.testing.assert_allclose(got, stack_colmajor([d2_apply(X, parts, variant)]), atol=1e-12)


@given(st.integers(0, 2**31), st.sampled_from(SMALL_DIMS), st.sampled_from(["general", "reduced"]))
def test_complex_property_on_valid_data(seed, dims, variant):
    X = stable(dims, seed % 11)
    K = dfm.build_complex(X, variant)
    scale = 1 + X.norm() ** 2
    d10, d21 = K.chain_defects()
    assert d10 <= 1e-9 * scale and d21 <= 1e-9 * scale


@pytest.mark.parametrize("dims", SMALL_DIMS)
def test_reduced_cohomology(dims):
    r, c, _ = dims
    for seed in range(3):
        co = dfm.cohomology_dims(dfm.build_complex(stable(dims, seed), "reduced"))
        assert co.h == (0, h1_formula(r, c), 0, 0)
        assert min(co.gaps) >= 1e3 and not co.flagged


@pytest.mark.parametrize("dims", SMALL_DIMS + [(2, 3, 2), (1, 3, 2)])
def test_general_cohomology_ends_vanish(dims):
    co = dfm.cohomology_dims(dfm.build_complex(stable(dims, 0), "general"))
    assert co.h[0] == 0 and co.h[3] == 0


def test_h1_values_at_two_reference_types():
    for dims, h1 in (((1, 2, 1), 4), ((2, 3, 1), 11)):
        co = dfm.cohomology_dims(dfm.build_complex(stable(dims, 5), "reduced"))
        assert co.h == (0, h1, 0, 0)


def test_reduced_needs_single_dimensional_vprime():
    with pytest.raises(DomainError):
        dfm.build_complex(stable((1, 3, 2)), "reduced")
    with pytest.raises(DomainError):
        dfm.build_complex(stable((1, 2, 1)), "twisted")


def test_invalid_datum_warns(line_datum):
    bad = line_datum.replace(J=np.array([[1.0, 0.0]]))
    with pytest.warns(UserWarning):
        dfm.build_complex(bad, "reduced")


def test_tangent_basis_at_121():
    X = stable((1, 2, 1), 4)
    tb = dfm.tangent_basis(X)
    K = dfm.build_complex(X, "reduced")
    rank_d0 = 5 - 0
    assert tb.kernel.shape[1] == 4 + rank_d0
    assert np.linalg.norm(K.D1 @ tb.kernel, axis=0).max() <= 1e-9
    np.testing.assert_allclose(K.D0 @ tb.gauge_generators, tb.gauge, atol=1e-9)
    reps = tb.h1_representatives()
    assert reps.shape[1] == 4
    assert np.linalg.norm(tb.gauge.conj().T @ reps) <= 1e-9


def test_tangent_vector_round_trip():
    X = stable((2, 3, 1), 0)
    v = np.arange(dfm.term_dims(X.dims)[1], dtype=complex)
    tv = dfm.TangentVector.from_vector(v, X.dims)
    assert tv.dims == (2, 3, 1)
    np.testing.assert_array_equal(tv.to_vector(), v)
    with pytest.raises(DomainError):
        dfm.TangentVector.from_vector(v[:-1], X.dims)


@pytest.mark.parametrize("dims", SMALL_DIMS)
def test_stable_data_have_trivial_stabilizer(dims):
    assert dfm.stabilizer_dim(stable(dims, 6)) == 0


def test_zero_datum_has_stabilizer():
    X = EnhancedDatum(DimVector(1, 1, 1), [[0]], [[0]], [[0]], [[0]], [[0]], [[0]], [[0]])
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        assert dfm.stabilizer_dim(X) >= 1


def test_direct_sum_with_zero_block_has_stabilizer():
    X = stable((1, 2, 1), 0)
    c = 3
    A = np.zeros((c, c), complex)
    B = np.zeros((c, c), complex)
    A[:2, :2], B[:2, :2] = X.A, X.B
    I = np.vstack([X.I, [[0]]])
    J = np.hstack([X.J, [[0]]])
    F = np.vstack([X.F, [[0]]])
    Y = EnhancedDatum(DimVector(1, 3, 1), A, B, I, J, X.Aprime, X.Bprime, F)
    assert dfm.stabilizer_dim(Y) >= 1
