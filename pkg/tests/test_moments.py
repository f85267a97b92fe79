import itertools
import math
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from askeyh.core import OperatorSpec, build_u, extract_recurrence, l_build
from askeyh.moments import (
    Convergence,
    InsufficientMomentsError,
    RepeatedNodeError,
    determinant,
    discrete_weights,
    generalized_moments,
    gram_functional,
    hankel_check,
    hankel_determinants,
    pinv_entry,
    standard_moments,
)
from askeyh.sequences import ClassSpec, SequenceParams

from oracles import uniform_moments

ONE = ClassSpec.one()


def legendre():
    return OperatorSpec.from_params(ONE, SequenceParams.make((0, 2, 1), (1, 0, 0), (2, 2)))


def charlier(a):
    # g_k = -a k, h_k = k, x_k = k: m_n = a^n, Poisson weights on the naturals
    return OperatorSpec.from_params(ONE, SequenceParams.make((0, 1, 0), (0, 1, 0), (-a, 0)))


def test_legendre_moments():
    spec = legendre()
    m = generalized_moments(spec, 3)
    assert m == [1, -1, F(4, 3), -2]
    mu = standard_moments(generalized_moments(spec, 16), spec.x, 16)
    assert mu == uniform_moments(16)


def test_insufficient_moments():
    with pytest.raises(InsufficientMomentsError):
        standard_moments([F(1)], lambda k: F(0), 2)
    with pytest.raises(InsufficientMomentsError):
        gram_functional([F(1), F(0)], [F(0), F(1)], [F(0), F(1)])
    with pytest.raises(InsufficientMomentsError):
        hankel_determinants([F(1)] * 4, 2)


def test_legendre_gram_orthogonality():
    spec = legendre()
    mu = standard_moments(generalized_moments(spec, 20), spec.x, 20)
    _, U = build_u(spec, 10)
    alpha = extract_recurrence(l_build(spec, 10)).recurrence.alpha
    norm = F(1)
    for n in range(11):
        if n:
            norm *= alpha[n]
        assert gram_functional(mu, U.row(n), U.row(n)) == norm
        for m in range(n):
            assert gram_functional(mu, U.row(m), U.row(n)) == 0


def test_legendre_hankel():
    mu = uniform_moments(16)
    d = hankel_determinants(mu, 8)
    assert d[0] == 1 and d[1] == F(1, 3)
    alpha = [None] + [F(k * k, 4 * k * k - 1) for k in range(1, 9)]
    rep = hankel_check(mu, alpha, 8)
    assert rep.identity_holds and rep.quasi_definite


def test_hankel_detects_wrong_alpha():
    mu = uniform_moments(8)
    alpha = [None, F(1, 3), F(1, 4), F(9, 35), F(16, 63)]
    rep = hankel_check(mu, alpha, 4)
    assert [n for n, _ in rep.failures] == [2]


def _leibniz(m):
    n = len(m)
    total = F(0)
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = F(-1) ** inv
        for i, j in enumerate(perm):
            term *= m[i][j]
        total += term
    return total


@given(st.integers(1, 4).flatmap(lambda n: st.lists(
    st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=3), min_size=n, max_size=n),
    min_size=n, max_size=n)))
def test_determinant_matches_leibniz(m):
    assert determinant(m) == _leibniz(m)


def test_charlier_weights_are_poisson():
    a = F(2)
    spec = charlier(a)
    J = 40
    wt = discrete_weights(spec, generalized_moments(spec, J), J)
    assert wt.system_residual == 0.0
    assert sum(wt.r) == 1   # k = 0 row of the defining system
    for k in range(10):
        assert math.isclose(float(wt.r[k]), math.exp(-2) * 2**k / math.factorial(k), rel_tol=1e-12)
    assert wt.tail_estimate < 1e-20
    assert wt.tails[0] <= wt.tail_estimate


def test_divergent_series_flagged():
    spec = charlier(F(2))
    m = [F(math.factorial(j) ** 2) for j in range(12)]
    wt = discrete_weights(spec, m, 11)
    assert wt.convergence is Convergence.NON_CONVERGENT
    assert any("no decay" in n for n in wt.notes)


def test_repeated_nodes_rejected():
    with pytest.raises(RepeatedNodeError):
        discrete_weights(legendre(), [F(1)] * 4, 3)


def test_pinv_entry():
    xs = [F(0), F(1), F(2)]
    assert pinv_entry(xs, 2, 0) == F(1, 2)
    assert pinv_entry(xs, 2, 1) == -1
    assert pinv_entry(xs, 0, 1) == 0
