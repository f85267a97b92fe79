"""Closed-form recurrence coefficients and moment factors per class.

These are rational functions of (a, b, d) and the index.  The generic-q and
q = 1 formulas for alpha_k carry a common factor in numerator and
denominator that vanishes at k = 1 when h is symmetric about k = 0 (e.g.
a1 = a2); it is cancelled before evaluation.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import comb

from .core import HCollisionError, RecurrenceExtraction, ResidualCollector, VerificationReport
from .newton import poly_derivative
from .numerics import Scalar, ToleranceContext, is_zero
from .sequences import ClassSpec, ClassTag, SequenceParams, g_sequence


class ClosedFormUnavailable(ZeroDivisionError):
    """A closed-form denominator vanished; use the matrix route instead."""

    def __init__(self, what: str, n: int):
        super().__init__(f"closed form for {what} at n={n} has a zero denominator; "
                         "fall back to extract_recurrence(l_build(...))")
        self.what = what
        self.n = n


@dataclass(frozen=True)
class ClosedFormRecurrence:
    cls: ClassSpec
    params: SequenceParams
    ctx: ToleranceContext = ToleranceContext()

    def __post_init__(self):
        if not self.params.derived:
            object.__setattr__(self, "params", self.params.derive(self.cls))

    @property
    def e1(self) -> Scalar:
        p = self.params
        return -(p.a1 * p.b1 + 2 * p.a2 * p.b1 - 2 * p.d2) / 2

    @property
    def e2(self) -> Scalar:
        p = self.params
        return 2 * p.b2 * (p.a1 + p.a2) / 3

    @property
    def e3(self) -> Scalar:
        p = self.params
        return p.a2 * p.b2 / 3

    def _div(self, num: Scalar, den: Scalar, what: str, n: int) -> Scalar:
        if is_zero(den, self.ctx.with_scale(0.0)):
            raise ClosedFormUnavailable(what, n)
        return num / den

    def alpha(self, k: int) -> Scalar:
        if k < 1:
            raise ValueError("alpha is defined for k >= 1")
        tag = self.cls.tag
        if tag is ClassTag.Q:
            return self._alpha_q(k)
        if tag is ClassTag.ONE:
            return self._alpha_one(k)
        return self._alpha_minus_one(k)

    def sigma(self, k: int) -> Scalar:
        if k < 0:
            raise ValueError("sigma is defined for k >= 0")
        tag = self.cls.tag
        if tag is ClassTag.Q:
            return self._sigma_q(k)
        if tag is ClassTag.ONE:
            return self._sigma_one(k)
        return self._sigma_minus_one(k)

    def beta(self, k: int) -> Scalar:
        return self.sigma(k) if k == 0 else self.sigma(k) - self.sigma(k - 1)

    # generic q
    def _alpha_q(self, k: int) -> Scalar:
        p, q = self.params, self.cls.q
        a1, a2, b1, b2, d1, d2 = p.a1, p.a2, p.b1, p.b2, p.d1, p.d2
        num = (q**(k - 1) * a1 + a2) * (q**(2 * k) * a1 * b2 - a2 * b1) + q**k * (q**(k - 1) * a1 * d2 - a2 * d1)
        tail = (q**k + 1) * (q**(2 * k - 2) * a1 * b1 - a2 * b2) + q**(k - 1) * (q**k * d1 - d2)
        den = (q**(2 * k) * a1 - a2) * (q**(2 * k - 1) * a1 - a2) ** 2
        if k == 1:
            # (q^{k-1} a1 - a2) / (q^{2k-2} a1 - a2) == 1
            fac = q**k - 1
        else:
            fac = (q**k - 1) * (q**(k - 1) * a1 - a2)
            den = den * (q**(2 * k - 2) * a1 - a2)
        return self._div(num * fac * tail, den, "alpha", k)

    def _sigma_q(self, k: int) -> Scalar:
        p, q = self.params, self.cls.q
        geo = (q**(k + 1) - 1) / (q - 1)
        num = (q**k * p.a1 + p.a2) * (q * p.b2 - p.b1) - q**(k + 1) * p.d1 + p.d2
        return (k + 1) * p.b0 + geo * self._div(num, q**(2 * k + 1) * p.a1 - p.a2, "sigma", k)

    # q = 1
    def _alpha_one(self, k: int) -> Scalar:
        p = self.params
        a1, a2, b1, b2, d1, d2 = p.a1, p.a2, p.b1, p.b2, p.d1, p.d2
        gk = g_sequence(self.cls, p)(k)
        tail = (a1 + (k - 1) * a2) * (a2 * b2 * k * (k - 1) + (a1 * b2 - a2 * b1) * k - a1 * b1 - a1 * b2 + d2) - d1 * a2
        den = (a1 + (2 * k - 1) * a2) * (a1 + (2 * k - 2) * a2) ** 2
        if k == 1:
            # (a1 + (k-2) a2) / (a1 + (2k-3) a2) == 1
            num = gk * tail
        else:
            num = gk * (a1 + (k - 2) * a2) * tail
            den = den * (a1 + (2 * k - 3) * a2)
        return self._div(num, den, "alpha", k)

    def _sigma_one(self, k: int) -> Scalar:
        p = self.params
        num = p.d1 + self.e1 * k + self.e2 * k * (k - 1) + self.e3 * k * (k - 1) * (k - 2)
        return (k + 1) * (p.b0 - self._div(num, p.a1 + 2 * k * p.a2, "sigma", k))

    # q = -1
    def _alpha_minus_one(self, n: int) -> Scalar:
        p = self.params
        a1, a2, b1, b2, d1, d2 = p.a1, p.a2, p.b1, p.b2, p.d1, p.d2
        den = a2 * (a1 + (2 * n - 1) * a2) ** 2
        if n % 2 == 0:
            num = -(n * (a1 + (n - 1) * a2) * (a1 * b2 + a2 * b1 - d2 + 2 * (n - 1) * a2 * b2)
                    * (2 * n * a2 * b2 + a1 * b2 - a2 * b1 + d2))
        else:
            num = ((-d1 - n * (a1 * b2 + a2 * b1 + d2) - 2 * n * (n - 1) * a2 * b2)
                   * (a1 * (a1 * b2 - a2 * b1 - d2) + a2 * d1
                      + a2 * ((3 * n - 1) * a1 * b2 - (n - 1) * (a2 * b1 + d2) + 2 * n * (n - 1) * a2 * b2)))
        return self._div(num, den, "alpha", n)

    def _sigma_minus_one(self, n: int) -> Scalar:
        p = self.params
        a1, a2, b1, b2, d1, d2 = p.a1, p.a2, p.b1, p.b2, p.d1, p.d2
        den = a1 + (2 * n + 1) * a2
        if n % 2 == 0:
            return (n + 1) * p.b0 + self._div(
                n * (a2 * b1 - a2 * b2 - d2) + a1 * b1 - a1 * b2 - d1 - d2, den, "sigma", n)
        return (n + 1) * (p.b0 + self._div(a2 * b1 - a2 * b2 - d2, den, "sigma", n))


def closed_recurrence(cf: ClosedFormRecurrence, n: int) -> tuple[Scalar | None, Scalar, Scalar]:
    """(alpha_n, sigma_n, beta_n); alpha_0 is None."""
    alpha = cf.alpha(n) if n >= 1 else None
    return alpha, cf.sigma(n), cf.beta(n)


def moment_factor(cls: ClassSpec, params: SequenceParams, k: int,
                  ctx: ToleranceContext | None = None) -> Scalar:
    """g_k / (h_0 - h_k) from the class closed form."""
    if k < 1:
        raise ValueError("moment factors start at k = 1")
    ctx = ctx or ToleranceContext()
    p = params if params.derived else params.derive(cls)
    a1, a2, b1, b2, d1, d2 = p.a1, p.a2, p.b1, p.b2, p.d1, p.d2
    if cls.tag is ClassTag.Q:
        q = cls.q
        num = d2 - q**k * d1 - q**(k - 1) * (1 + q**k) * a1 * b1 + q * (1 + q**(-k)) * a2 * b2
        den = q**k * a1 - a2
    elif cls.tag is ClassTag.ONE:
        num = -(d1 + d2 * (k - 1) + 2 * (a1 * b2 + a2 * b1 + 2 * a2 * b2) * comb(k - 1, 2)
                + 6 * a2 * b2 * comb(k - 1, 3))
        den = a1 + (k - 1) * a2
    else:
        s = 1 if k % 2 == 0 else -1
        num = 4 * k * k * a2 * b2 - s * (d1 + 2 * k * d2) - 2 * k * (2 * a2 * b2 - a1 * b2 - a2 * b1) + d1
        den = s * (a1 + 2 * k * a2) - a1
    if is_zero(den, ctx.with_scale(0.0)):
        raise HCollisionError(0, k)
    return num / den


def ode_residual_h1(params: SequenceParams, u: list, n: int) -> list:
    """Coefficients of (d2 t + a2 t^2) u'' + (d1 + a1 t) u' + a0 u - h_n u.

    Valid for q = 1 with all node parameters zero (the Newton basis is then
    the monomial basis).
    """
    if any(b != 0 for b in params.b):
        raise ValueError("the differential form needs b0 = b1 = b2 = 0")
    p = params
    hn = p.a0 + p.a1 * n + p.a2 * n * (n - 1)
    zero = 0 * p.a0
    du = poly_derivative(u)
    ddu = poly_derivative(du)
    out = [zero] * len(u)
    for i, c in enumerate(ddu):
        out[i + 1] += p.d2 * c
        out[i + 2] += p.a2 * c
    for i, c in enumerate(du):
        out[i] += p.d1 * c
        out[i + 1] += p.a1 * c
    for i, c in enumerate(u):
        out[i] += (p.a0 - hn) * c
    return out


def compare_with_matrix(cf: ClosedFormRecurrence, extraction: RecurrenceExtraction,
                        N: int | None = None) -> VerificationReport:
    """Residuals alpha_closed - alpha_matrix and sigma_closed - sigma_matrix.

    Failures are recorded as (n, 0, residual) for alpha and (n, 1, residual)
    for sigma; indices where the closed form is unavailable go to ``notes``.
    """
    rec = extraction.recurrence
    N = rec.N if N is None else min(N, rec.N)
    col = ResidualCollector("closed_form_agreement", cf.cls.field, cf.ctx)
    for n in range(N + 1):
        try:
            alpha, sigma, _ = closed_recurrence(cf, n)
        except ClosedFormUnavailable as exc:
            col.notes.append(str(exc))
            continue
        if alpha is not None:
            col.add(n, 0, alpha - rec.alpha[n], max(1.0, float(abs(alpha)), float(abs(rec.alpha[n]))))
        col.add(n, 1, sigma - rec.sigma[n], max(1.0, float(abs(sigma)), float(abs(rec.sigma[n]))))
    return col.report()
