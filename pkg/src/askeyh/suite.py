"""The full invariant suite run by ``verify``.

Each check produces a :class:`VerificationReport`.  Residuals are exact
zeros under the rational backend; under the float backend each residual is
judged relative to the magnitudes of the terms that produced it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .class_forms import ClosedFormRecurrence, compare_with_matrix, ode_residual_h1
from .core import (
    HCollisionError,
    OperatorSpec,
    ResidualCollector,
    Route,
    VerificationReport,
    _scale,
    build_u,
    c_inverse,
    c_matrix,
    eigen_residual,
    extract_recurrence,
    l_build,
    l_term_scale,
    verify_l_recurrences,
)
from .moments import (
    generalized_moments,
    gram_functional,
    gram_scale,
    hankel_check,
    standard_moment_bounds,
    standard_moments,
)
from .numerics import ToleranceContext
from .sequences import ClassTag, validate_spectrum


@dataclass
class SuiteResult:
    N: int
    reports: list
    status: str = ""
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.reports)

    def report(self, check: str) -> VerificationReport:
        for r in self.reports:
            if r.check == check:
                return r
        raise KeyError(check)

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "passed": self.passed,
            "status": self.status,
            "checks": [r.to_dict() for r in self.reports],
            "notes": list(self.notes),
        }


def check_tridiagonal(L, field, ctx, scales=None) -> VerificationReport:
    """L_{n,k} = 0 for k < n - 1, judged like :func:`extract_recurrence` does."""
    col = ResidualCollector("tridiagonality", field, ctx)
    for n in range(L.N + 1):
        r = L.row(n)
        row_max = max(float(abs(v)) for v in r)
        for k in range(n - 1):
            extra = 0.0 if scales is None else float(scales[n, k])
            col.add(n, k, r[k], max(row_max, extra))
    return col.report()


def check_inverse(spec: OperatorSpec, N: int, ctx: ToleranceContext) -> VerificationReport:
    C, Ci = c_matrix(spec, N), c_inverse(spec, N)
    col = ResidualCollector("inverse_identity", spec.field, ctx)
    one, zero = spec.field.one, spec.field.zero
    for n in range(N + 1):
        cr = C.row(n)
        for k in range(n + 1):
            terms = [cr[j] * Ci[j, k] for j in range(k, n + 1)]
            s = zero
            for t in terms:
                s += t
            col.add(n, k, s - (one if n == k else zero), _scale(*terms))
    return col.report()


def check_routes(spec: OperatorSpec, L_conj, N: int, ctx: ToleranceContext,
                 scales=None) -> VerificationReport:
    L_exp = l_build(spec, N, Route.EXPLICIT)
    col = ResidualCollector("route_agreement", spec.field, ctx)
    for n in range(N + 1):
        a, b = L_conj.row(n), L_exp.row(n)
        for k in range(n + 1):
            extra = 0.0 if scales is None else float(scales[n, k])
            col.add(n, k, a[k] - b[k], _scale(a[k], b[k], extra))
    return col.report()


def check_eigen(spec: OperatorSpec, C, N: int, ctx: ToleranceContext) -> VerificationReport:
    col = ResidualCollector("eigen_equation", spec.field, ctx)
    for n in range(1, N + 1):
        r = C.row(n)
        hn = spec.h(n)
        for k, v in enumerate(eigen_residual(spec, C, n)):
            col.add(n, k, v, _scale(r[k + 1] * spec.g(k + 1), r[k] * (spec.h(k) - hn)))
    return col.report()


def check_gram(spec: OperatorSpec, alpha: list, depth: int, ctx: ToleranceContext) -> VerificationReport:
    """Lambda(u_m u_n) = 0 for m < n and Lambda(u_n^2) = alpha_1 ... alpha_n."""
    col = ResidualCollector("gram_orthogonality", spec.field, ctx)
    m = generalized_moments(spec, 2 * depth)
    mu = standard_moments(m, spec.x, 2 * depth, spec.field)
    bounds = None if spec.field.exact else standard_moment_bounds(m, spec.x, 2 * depth, spec.field)
    _, U = build_u(spec, depth)
    rows = U.to_lists()
    norm = spec.field.one
    for n in range(depth + 1):
        if n >= 1:
            norm = norm * alpha[n]
        for mm in range(n):
            col.add(mm, n, gram_functional(mu, rows[mm], rows[n]), gram_scale(mu, rows[mm], rows[n], bounds))
        sq = gram_functional(mu, rows[n], rows[n])
        col.add(n, n, sq - norm, max(gram_scale(mu, rows[n], rows[n], bounds), float(abs(norm))))
    return col.report()


def check_hankel(spec: OperatorSpec, alpha: list, depth: int, ctx: ToleranceContext) -> VerificationReport:
    m = generalized_moments(spec, 2 * depth)
    mu = standard_moments(m, spec.x, 2 * depth, spec.field)
    hr = hankel_check(mu, alpha, depth, ctx)
    col = ResidualCollector("hankel_identity", spec.field, ctx)
    # Hadamard's bound on |Delta_n| measures the size of the terms that cancel
    exact = spec.field.exact
    bound = [1.0 if exact else _hadamard(mu, n) for n in range(-1, depth + 1)]
    for n, res in enumerate(hr.residuals, start=1):
        scale = 1.0 if exact else _scale(float(abs(alpha[n])) * bound[n] ** 2, bound[n + 1] * bound[n - 1])
        col.add(n, 0, res, scale)
    if not hr.quasi_definite:
        col.notes.append("some Hankel determinant vanishes; the functional is not quasi-definite")
    return col.report()


def _hadamard(mu: list, n: int) -> float:
    """prod_i ||row i|| of the (n+1)x(n+1) Hankel matrix; 1 for n < 0."""
    acc = 1.0
    try:
        for i in range(n + 1):
            acc *= math.hypot(*(float(abs(mu[i + j])) for j in range(n + 1)))
    except OverflowError:
        return math.inf
    return acc


def check_ode(spec: OperatorSpec, N: int, ctx: ToleranceContext) -> VerificationReport:
    col = ResidualCollector("differential_equation", spec.field, ctx)
    _, U = build_u(spec, N)
    for n in range(N + 1):
        u = U.row(n)
        for k, v in enumerate(ode_residual_h1(spec.params, u, n)):
            col.add(n, k, v, _scale(*u) * _scale(*spec.params.a, spec.params.d1, spec.params.d2))
    return col.report()


def run_suite(spec: OperatorSpec, N: int, ctx: ToleranceContext | None = None,
              gram_depth: int | None = None, hankel_depth: int | None = None,
              closed_form: bool = True) -> SuiteResult:
    """Every invariant at depth N.

    Gram orthogonality runs to ``gram_depth`` (default min(N, 12)) and the
    Hankel identity to ``hankel_depth`` (default min(N, 8)); both need
    moments to twice their depth.  An h-collision raised while building the
    operator itself propagates; one met only while extending the moments
    skips those two checks with a note.
    """
    if N < 1:
        raise ValueError("N must be at least 1")
    ctx = ctx or spec.ctx
    gram_depth = min(N, 12) if gram_depth is None else gram_depth
    hankel_depth = min(N, 8) if hankel_depth is None else hankel_depth
    result = SuiteResult(N, [])

    if spec.cls is not None and spec.params is not None:
        sr = validate_spectrum(spec.cls, spec.params, N + 1, ctx)
        if not sr.ok:
            a, b = sr.first_collision()
            raise HCollisionError(a, b)
        if sr.status.value == "DISAGREE":
            result.notes.append(f"spectrum: the algebraic distinctness condition disagrees with brute force "
                                f"({sr.algebraic_failures})")

    L = l_build(spec, N, Route.CONJUGATION)
    # exact arithmetic needs no error yardstick
    scales = None if spec.field.exact else l_term_scale(spec, N)
    extraction = extract_recurrence(L, ctx, scales)
    result.status = extraction.status.value
    C, _ = build_u(spec, N)
    alpha = extraction.recurrence.alpha

    result.reports.append(check_tridiagonal(L, spec.field, ctx, scales))
    result.reports.append(check_inverse(spec, N, ctx))
    result.reports.append(check_routes(spec, L, N, ctx, scales))
    result.reports.append(check_eigen(spec, C, N, ctx))
    result.reports.extend(verify_l_recurrences(spec, L, N, ctx, scales))

    for name, fn, depth in (("gram_orthogonality", check_gram, gram_depth),
                            ("hankel_identity", check_hankel, hankel_depth)):
        if depth < 1:
            continue
        try:
            if depth > N:
                full = extract_recurrence(l_build(spec, depth), ctx).recurrence.alpha
            else:
                full = alpha
            result.reports.append(fn(spec, full, depth, ctx))
        except HCollisionError as exc:
            result.notes.append(f"{name} skipped: {exc}")

    if closed_form and spec.cls is not None and spec.params is not None:
        cf = ClosedFormRecurrence(spec.cls, spec.params, ctx)
        result.reports.append(compare_with_matrix(cf, extraction, N))
    if (spec.cls is not None and spec.cls.tag is ClassTag.ONE and spec.params is not None
            and all(b == 0 for b in spec.params.b)):
        result.reports.append(check_ode(spec, N, ctx))
    return result


__all__ = ["SuiteResult", "run_suite", "check_tridiagonal", "check_inverse", "check_routes", "check_eigen",
           "check_gram", "check_hankel", "check_ode"]
