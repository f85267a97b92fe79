from fractions import Fraction as F

import pytest

from askeyh.class_forms import (
    ClosedFormRecurrence,
    ClosedFormUnavailable,
    closed_recurrence,
    compare_with_matrix,
    moment_factor,
    ode_residual_h1,
)
from askeyh.core import HCollisionError, OperatorSpec, build_u, extract_recurrence, l_build
from askeyh.sequences import ClassSpec, ClassTag, SequenceParams

from oracles import arcsine_moments, gram_schmidt
from specgen import random_specs

ONE = ClassSpec.one()


def test_chebyshev_alpha_with_k1_cancellation():
    p = SequenceParams.make((0, 1, 1), (1, 0, 0), (1, 2))
    cf = ClosedFormRecurrence(ONE, p)
    assert cf.alpha(1) == F(1, 2)
    assert all(cf.alpha(k) == F(1, 4) for k in range(2, 15))
    assert all(cf.beta(k) == 0 for k in range(15))
    _, alpha, beta = gram_schmidt(arcsine_moments(21), 10)
    assert [cf.alpha(k) for k in range(1, 11)] == alpha[1:]


def test_q_instance_values():
    cf = ClosedFormRecurrence(ClassSpec.generic(2), SequenceParams.make((0, 0, 1), (0, 0, 0), (1, 0)))
    assert cf.beta(0) == 2 and cf.beta(1) == 10
    assert cf.alpha(1) == 4 and cf.alpha(2) == 96
    assert cf.sigma(1) == 12
    assert closed_recurrence(cf, 0) == (None, 2, 2)


def test_alpha_index_validation():
    cf = ClosedFormRecurrence(ONE, SequenceParams.make((0, 1, 1), (1, 0, 0), (1, 2)))
    with pytest.raises(ValueError):
        cf.alpha(0)
    with pytest.raises(ValueError):
        cf.sigma(-1)


def test_unavailable_closed_form_raises():
    # a1 + 2 a2 = 0 zeroes the sigma_1 denominator
    cf = ClosedFormRecurrence(ONE, SequenceParams.make((0, -2, 1), (0, 0, 0), (1, 0)))
    with pytest.raises(ClosedFormUnavailable):
        cf.sigma(1)


@pytest.mark.parametrize("tag", list(ClassTag))
def test_closed_forms_match_matrix(tag):
    for cls, p in random_specs(tag, 6, 14, seed=5):
        spec = OperatorSpec.from_params(cls, p)
        ex = extract_recurrence(l_build(spec, 10))
        report = compare_with_matrix(ClosedFormRecurrence(cls, p), ex, 10)
        assert report.passed and report.max_residual == 0


@pytest.mark.parametrize("tag", list(ClassTag))
def test_moment_factor_matches_ratio(tag):
    for cls, p in random_specs(tag, 6, 14, seed=9):
        spec = OperatorSpec.from_params(cls, p)
        for k in range(1, 12):
            assert moment_factor(cls, p, k) == spec.g(k) / (spec.h(0) - spec.h(k))


def test_moment_factor_collision():
    with pytest.raises(HCollisionError):
        moment_factor(ONE, SequenceParams.make((0, 0, 1), (0, 0, 0), (1, 0)), 1)


def test_ode_residual_vanishes_for_hypergeometric_instance():
    p = SequenceParams.make((0, 2, 1), (0, 0, 0), (2, 2)).derive(ONE)
    _, U = build_u(OperatorSpec.from_params(ONE, p), 10)
    for n in range(11):
        assert all(c == 0 for c in ode_residual_h1(p, U.row(n), n))


def test_ode_residual_detects_wrong_eigenvalue():
    p = SequenceParams.make((0, 2, 1), (0, 0, 0), (2, 2)).derive(ONE)
    _, U = build_u(OperatorSpec.from_params(ONE, p), 4)
    assert any(c != 0 for c in ode_residual_h1(p, U.row(3), 2))


def test_ode_requires_zero_nodes():
    p = SequenceParams.make((0, 2, 1), (1, 0, 0), (2, 2)).derive(ONE)
    with pytest.raises(ValueError):
        ode_residual_h1(p, [F(1)], 0)
