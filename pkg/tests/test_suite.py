from dataclasses import replace
from fractions import Fraction as F

import pytest

from askeyh.core import HCollisionError, OperatorSpec
from askeyh.presets import instantiate
from askeyh.sequences import ClassSpec, ClassTag, SequenceParams
from askeyh.suite import run_suite

from specgen import random_specs

EXPECTED_CHECKS = {
    "tridiagonality", "inverse_identity", "route_agreement", "eigen_equation",
    "l_recurrence_tau", "l_recurrence_eps", "gram_orthogonality", "hankel_identity",
    "closed_form_agreement",
}


def test_legendre_suite_all_zero():
    cls, p = instantiate("jacobi", {"alpha": 0, "beta": 0})
    result = run_suite(OperatorSpec.from_params(cls, p), 12)
    assert result.passed and result.status == "VALID"
    names = {r.check for r in result.reports}
    assert EXPECTED_CHECKS <= names
    assert all(r.max_residual == 0 for r in result.reports)
    d = result.to_dict()
    assert d["passed"] and {c["check"] for c in d["checks"]} == names


def test_ode_check_included_for_zero_nodes():
    spec = OperatorSpec.from_params(ClassSpec.one(), SequenceParams.make((0, 2, 1), (0, 0, 0), (2, 2)))
    assert run_suite(spec, 6).report("differential_equation").passed


@pytest.mark.parametrize("tag", list(ClassTag))
def test_random_specs_pass(tag):
    for cls, p in random_specs(tag, 3, 26, seed=21):
        assert run_suite(OperatorSpec.from_params(cls, p), 10).passed


def test_broken_spec_fails():
    cls, p = random_specs(ClassTag.Q, 1, 26, seed=2)[0]
    # shift weight from d0 to d3 so that g_0 stays 0 but g leaves the class
    spec = OperatorSpec.from_params(cls, replace(p, d3=p.d3 + 1, d0=p.d0 - 1))
    result = run_suite(spec, 8)
    assert not result.passed
    assert not result.report("tridiagonality").passed
    # the identities that hold for any g still hold
    assert result.report("inverse_identity").passed and result.report("route_agreement").passed
    assert result.report("eigen_equation").passed


def test_nonzero_g0_rejected():
    cls, p = random_specs(ClassTag.Q, 1, 26, seed=2)[0]
    with pytest.raises(ValueError, match="g_0"):
        OperatorSpec.from_params(cls, replace(p, d4=p.d4 + 1))


def test_collision_propagates():
    spec = OperatorSpec.from_params(ClassSpec.one(), SequenceParams.make((0, 3, -1), (0, 0, 0), (1, 0)))
    with pytest.raises(HCollisionError):
        run_suite(spec, 5)


def test_float_family_passes_with_relative_residuals():
    import math
    cls, p = instantiate("meixner-pollaczek", {"lambda": 1, "phi": math.pi / 3})
    result = run_suite(OperatorSpec.from_params(cls, p), 10)
    assert result.passed
    assert all(abs(r.max_residual) < 1e-9 for r in result.reports)


def test_depth_must_be_positive():
    cls, p = instantiate("jacobi", {"alpha": 0, "beta": 0})
    with pytest.raises(ValueError):
        run_suite(OperatorSpec.from_params(cls, p), 0)
