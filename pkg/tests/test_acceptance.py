"""Every acceptance criterion at its stated tolerance, one line each.

The samples are shared across criteria exactly as in ``adhm-lab accept``.
"""

import pytest

from adhm_lab import acceptance as acc

from helpers import ACCEPTANCE_LINES

SEED = 0
COUNT = 50


@pytest.fixture(scope="module")
def samples():
    return {dims: acc._samples(dims, COUNT, SEED) for dims in acc.ACCEPT_DIMS}


@pytest.fixture(scope="module")
def moment_lines(samples):
    return {c.key: c for c in acc.criterion_7(samples, SEED)}


def check(criterion):
    line = criterion.line()
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert criterion.passed, line


def test_criterion_1_equations_and_stability(samples):
    check(acc.criterion_1(samples))


def test_criterion_2_cohomology(samples):
    check(acc.criterion_2(samples, SEED, COUNT))


def test_criterion_3_gauge_freeness(samples):
    check(acc.criterion_3(samples))


def test_criterion_4_lift_round_trip():
    check(acc.criterion_4(SEED))


def test_criterion_5_monad_and_support(samples):
    check(acc.criterion_5(samples, SEED))


def test_criterion_6_nested_hilbert():
    check(acc.criterion_6(SEED))


def test_criterion_7a_complex_moment(moment_lines):
    check(moment_lines["7a"])


def test_criterion_7b_flow_to_zero_level(moment_lines):
    check(moment_lines["7b"])


def test_criterion_7c_flow_to_chamber_level(moment_lines):
    check(moment_lines["7c"])


def test_criterion_7d_ambient_dimension(moment_lines):
    check(moment_lines["7d"])


def test_criterion_8_omega_ranks():
    check(acc.criterion_8(SEED))


def test_criterion_9_determinism():
    check(acc.criterion_9(SEED, COUNT))
