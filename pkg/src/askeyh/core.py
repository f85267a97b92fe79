"""Coefficient matrices, the multiplication operator and its recurrences.

Given sequences g (step, g_0 = 0), h (eigenvalues, pairwise distinct) and x
(Newton nodes), the monic solutions of

    gamma u_n + phi u_n = h_n u_n,   gamma v_k = g_k v_{k-1},  phi v_k = h_k v_k,

have Newton coefficients c_{n,k} = prod_{j=k}^{n-1} g_{j+1} / (h_n - h_j).
Multiplication by t in the basis {u_n} is L = C (S^T + F) C^{-1}; when the
three sequences are tied together correctly L is tridiagonal and {u_n} is an
orthogonal polynomial sequence with recurrence coefficients read off L.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from dataclasses import field as _dc_field
from typing import Callable

from .newton import Shape, TriangularTable, basis_matrices, matmul
from .numerics import EXACT, Field, Scalar, ToleranceContext, close, format_scalar, is_zero
from .sequences import (
    ClassSpec,
    Kind,
    SequenceParams,
    aux_table,
    g_sequence,
    h_x_sequence,
    order3_from_initials,
)

Seq = Callable[[int], Scalar]


class HCollisionError(ZeroDivisionError):
    """Two eigenvalues h_j, h_k coincide where a division by h_j - h_k is needed."""

    def __init__(self, j: int, k: int):
        super().__init__(f"h-collision: h_{j} == h_{k}")
        self.pair = (j, k)


class DegenerateSystemError(ValueError):
    pass


@dataclass(frozen=True)
class OperatorSpec:
    """The three defining sequences, plus the class data when known."""

    g: Seq
    h: Seq
    x: Seq
    field: Field = EXACT
    cls: ClassSpec | None = None
    params: SequenceParams | None = None
    ctx: ToleranceContext = ToleranceContext()
    _diffs: dict = _dc_field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if not is_zero(self.g(0), self.ctx):
            raise ValueError(f"the step sequence must start with g_0 = 0, got {format_scalar(self.g(0))}")

    @classmethod
    def from_params(cls, class_spec: ClassSpec, params: SequenceParams,
                    ctx: ToleranceContext | None = None) -> OperatorSpec:
        params = params if params.derived else params.derive(class_spec)
        return cls(
            g=g_sequence(class_spec, params),
            h=h_x_sequence(class_spec, Kind.H, params.a),
            x=h_x_sequence(class_spec, Kind.X, params.b),
            field=class_spec.field,
            cls=class_spec,
            params=params,
            ctx=ctx or ToleranceContext(),
        )

    def hdiff(self, i: int, j: int) -> Scalar:
        """h_i - h_j, rejecting collisions."""
        d = self._diffs.get((i, j))
        if d is None:
            hi, hj = self.h(i), self.h(j)
            if close(hi, hj, self.ctx):
                raise HCollisionError(min(i, j), max(i, j))
            d = self._diffs[(i, j)] = hi - hj
        return d

    def w(self, n: int, k: int, t_index: int) -> Scalar:
        """w_{n,k}(h_t) = prod_{j=k}^{n-1} (h_t - h_j)."""
        acc = self.field.one
        ht = self.h(t_index)
        for j in range(k, n):
            acc *= ht - self.h(j)
        return acc


def c_matrix(spec: OperatorSpec, N: int) -> TriangularTable:
    """C with c_{n,n} = 1 and c_{n,k} = c_{n,k+1} g_{k+1} / (h_n - h_k)."""

    def row(n: int) -> list:
        r = [spec.field.zero] * (n + 1)
        r[n] = spec.field.one
        for k in range(n - 1, -1, -1):
            r[k] = r[k + 1] * spec.g(k + 1) / spec.hdiff(n, k)
        return r

    return TriangularTable(N, row, unit_diagonal=True, field=spec.field, name="C")


def c_inverse(spec: OperatorSpec, N: int) -> TriangularTable:
    """C^{-1} with entries prod_{j=k+1}^{n} g_j / (h_k - h_j)."""

    def row(n: int) -> list:
        r = []
        for k in range(n + 1):
            acc = spec.field.one
            for j in range(k + 1, n + 1):
                acc *= spec.g(j) / spec.hdiff(k, j)
            r.append(acc)
        return r

    return TriangularTable(N, row, unit_diagonal=True, field=spec.field, name="Cinv")


def build_u(spec: OperatorSpec, N: int) -> tuple[TriangularTable, TriangularTable]:
    """u_n in the Newton basis (rows of C) and in the monomial basis (rows of C V)."""
    C = c_matrix(spec, N)
    V, _ = basis_matrices(spec.x, N, spec.field)
    CV = matmul(C, V)
    monomial = TriangularTable.from_rows(CV, unit_diagonal=True, field=spec.field, name="CV")
    return C, monomial


def eigen_residual(spec: OperatorSpec, C: TriangularTable, n: int) -> list:
    """Newton coefficients of gamma u_n + phi u_n - h_n u_n (entries k < n)."""
    r = C.row(n)
    hn = spec.h(n)
    return [r[k + 1] * spec.g(k + 1) + r[k] * (spec.h(k) - hn) for k in range(n)]


# --- multiplication operator -------------------------------------------------

class Route(str, enum.Enum):
    CONJUGATION = "conjugation"
    EXPLICIT = "explicit"


def _g_over(spec: OperatorSpec, gi: int, i: int, j: int) -> Scalar:
    """g_gi / (h_i - h_j), zero without dividing when g_gi vanishes."""
    g = spec.g(gi)
    if g == 0:
        return spec.field.zero
    return g / spec.hdiff(i, j)


def l_entry_general(spec: OperatorSpec, n: int, k: int) -> Scalar:
    """L_{n,k} for 0 <= k <= n from the explicit product-sum.

    Each summand (h_n - h_{j-1}) x_j + g_j over w_{j+1,k+1}(h_k) w_{n,j-1}(h_n)
    is split as x_j / w_{n,j}(h_n) + g_j / w_{n,j-1}(h_n) so the j = k = 0
    term never touches h_{-1} (it carries g_0 = 0).
    """
    one = spec.field.one
    pre = one
    for j in range(k + 1, n + 1):
        pre *= spec.g(j)
    total = spec.field.zero
    for j in range(k, n + 2):
        term = spec.field.zero
        if j <= n:
            term += spec.x(j) / _w_checked(spec, n, j, n)
        gj = spec.g(j)
        if gj != 0:
            term += gj / _w_checked(spec, n, j - 1, n)
        total += term / _w_checked(spec, j + 1, k + 1, k)
    return pre * total


def _w_checked(spec: OperatorSpec, n: int, k: int, t_index: int) -> Scalar:
    acc = spec.field.one
    for j in range(k, n):
        acc *= spec.hdiff(t_index, j)
    return acc


def l_diagonal(spec: OperatorSpec, n: int) -> Scalar:
    """L_{n,n} = x_n + g_{n+1}/(h_n - h_{n+1}) - g_n/(h_{n-1} - h_n)."""
    val = spec.x(n) + _g_over(spec, n + 1, n, n + 1)
    if n >= 1:
        val -= _g_over(spec, n, n - 1, n)
    return val


def l_subdiagonal(spec: OperatorSpec, n: int) -> Scalar:
    """L_{n,n-1} for n >= 1."""
    if n < 1:
        raise ValueError("subdiagonal starts at n = 1")
    inner = (
        -_g_over(spec, n, n - 1, n)
        + _g_over(spec, n + 1, n - 1, n + 1)
        + spec.x(n) - spec.x(n - 1)
    )
    if n >= 2:
        inner += _g_over(spec, n - 1, n - 2, n)
    return _g_over(spec, n, n - 1, n) * inner


def l_build(spec: OperatorSpec, N: int, route: Route | str = Route.CONJUGATION) -> TriangularTable:
    """Rows 0..N of L (lower Hessenberg, L_{n,n+1} = 1)."""
    route = Route(route)
    f = spec.field
    if route is Route.CONJUGATION:
        C = c_matrix(spec, N)
        Ci = c_inverse(spec, N + 1)

        def row(n: int) -> list:
            crow = C.row(n)
            # row n of C (S^T + F): entry j is c_{n,j-1} + c_{n,j} x_j
            m = [crow[0] * spec.x(0)]
            for j in range(1, n + 1):
                m.append(crow[j - 1] + crow[j] * spec.x(j))
            m.append(crow[n])
            out = []
            for k in range(n + 2):
                s = f.zero
                for j in range(k, n + 2):
                    s += m[j] * Ci[j, k]
                out.append(s)
            return out
    else:
        def row(n: int) -> list:
            out = [l_entry_general(spec, n, k) for k in range(max(n - 1, 0))]
            if n >= 1:
                out.append(l_subdiagonal(spec, n))
            out.append(l_diagonal(spec, n))
            out.append(f.one)
            return out

    return TriangularTable(N, row, shape=Shape.LOWER_HESSENBERG, field=f, name=f"L[{route.value}]")


def l_term_scale(spec: OperatorSpec, N: int) -> TriangularTable:
    """Entrywise |C| (S^T + |F|) |C^{-1}| as floats.

    This is the size of the terms summed into each conjugation entry of L,
    the natural yardstick for rounding error when an entry cancels to zero.
    """
    C = c_matrix(spec, N)
    Ci = c_inverse(spec, N + 1)

    def row(n: int) -> list:
        crow = [float(abs(v)) for v in C.row(n)]
        m = [crow[0] * float(abs(spec.x(0)))]
        for j in range(1, n + 1):
            m.append(crow[j - 1] + crow[j] * float(abs(spec.x(j))))
        m.append(crow[n])
        return [sum(m[j] * float(abs(Ci[j, k])) for j in range(k, n + 2)) for k in range(n + 2)]

    return TriangularTable(N, row, shape=Shape.LOWER_HESSENBERG, field=spec.field, name="|L|")


# --- recurrence extraction ---------------------------------------------------

class OpsStatus(str, enum.Enum):
    VALID = "VALID"
    DEGENERATE = "DEGENERATE"


@dataclass
class RecurrencePair:
    """alpha[n] for n >= 1 (alpha[0] is None), beta[n] and sigma[n] for n >= 0."""

    alpha: list
    beta: list
    sigma: list

    @property
    def N(self) -> int:
        return len(self.beta) - 1


@dataclass
class RecurrenceExtraction:
    recurrence: RecurrencePair
    offdiagonal: list = field(default_factory=list)
    degenerate_at: list = field(default_factory=list)

    @property
    def tridiagonal(self) -> bool:
        return not self.offdiagonal

    @property
    def status(self) -> OpsStatus:
        return OpsStatus.DEGENERATE if self.degenerate_at else OpsStatus.VALID

    @property
    def report(self) -> str:
        return "PASS" if self.tridiagonal else "FAIL"


def extract_recurrence(L: TriangularTable, ctx: ToleranceContext | None = None,
                       scales: TriangularTable | None = None) -> RecurrenceExtraction:
    """Read alpha, beta, sigma off L and flag entries below the subdiagonal.

    Zero tests use the row's largest entry as scale, raised entrywise to
    ``scales`` when given (see :func:`l_term_scale`).
    """
    ctx = ctx or ToleranceContext()
    alpha: list = [None]
    beta, sigma = [], []
    off, degenerate = [], []
    running = L.field.zero
    for n in range(L.N + 1):
        r = L.row(n)
        scale = max(float(abs(v)) for v in r)
        rctx = ctx.with_scale(scale)
        for k in range(n - 1):
            kctx = rctx if scales is None else ctx.with_scale(max(scale, float(scales[n, k])))
            if not is_zero(r[k], kctx):
                off.append((n, k, r[k]))
        if n >= 1:
            alpha.append(r[n - 1])
            if is_zero(r[n - 1], rctx):
                degenerate.append(n)
        running = running + r[n]
        beta.append(r[n])
        sigma.append(running)
    return RecurrenceExtraction(RecurrencePair(alpha, beta, sigma), off, degenerate)


def three_term_polynomials(rec: RecurrencePair, N: int, field: Field = EXACT) -> list[list]:
    """Monomial coefficients of u_0..u_N from u_{n+1} = (t - beta_n) u_n - alpha_n u_{n-1}."""
    one, zero = field.one, field.zero
    polys = [[one]]
    if N >= 1:
        polys.append([-rec.beta[0], one])
    for n in range(1, N):
        un, um = polys[n], polys[n - 1]
        nxt = [zero] + list(un)
        for i, c in enumerate(un):
            nxt[i] -= rec.beta[n] * c
        for i, c in enumerate(um):
            nxt[i] -= rec.alpha[n] * c
        polys.append(nxt)
    return polys


# --- verification reports ----------------------------------------------------

@dataclass
class VerificationReport:
    check: str
    max_residual: Scalar
    failures: list = field(default_factory=list)
    evaluated: int = 0
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "check": self.check,
            "passed": self.passed,
            "evaluated": self.evaluated,
            "max_residual": format_scalar(self.max_residual),
            "failures": [[n, k, format_scalar(v)] for n, k, v in self.failures],
            "notes": list(self.notes),
        }


class ResidualCollector:
    """Accumulates residuals, deciding zero-ness relative to a per-item scale."""

    def __init__(self, check: str, field: Field, ctx: ToleranceContext | None = None):
        self.check = check
        self.field = field
        self.ctx = ctx or ToleranceContext()
        self.failures: list = []
        self.max_abs = 0
        self.evaluated = 0
        self.notes: list = []

    def add(self, n: int, k: int, value: Scalar, scale: float = 1.0) -> None:
        self.evaluated += 1
        mag = abs(value)
        if self.field.exact:
            self.max_abs = max(self.max_abs, mag)
        else:
            rel = float(mag) / max(1.0, float(scale))
            self.max_abs = max(self.max_abs, rel)
        if not is_zero(value, self.ctx.with_scale(float(scale))):
            self.failures.append((n, k, value))

    def report(self) -> VerificationReport:
        mr = self.field(self.max_abs) if self.field.exact else complex(self.max_abs)
        return VerificationReport(self.check, mr, self.failures, self.evaluated, self.notes)


def _scale(*vals) -> float:
    return max([1.0] + [float(abs(v)) for v in vals])


def tau(spec: OperatorSpec, n: int, k: int) -> Scalar:
    """(prod_{j=k+1}^n 1/g_j) w_{n+2,k+1}(h_k) w_{n,k+2}(h_n)."""
    acc = spec.field.one
    for j in range(k + 1, n + 1):
        acc /= spec.g(j)
    return acc * spec.w(n + 2, k + 1, k) * spec.w(n, k + 2, n)


def eps1(spec: OperatorSpec, n: int, k: int) -> Scalar:
    return spec.w(n + 2, k + 1, k) * spec.w(n, k + 2, n)


def eps2(spec: OperatorSpec, n: int, k: int) -> Scalar:
    return (spec.g(n + 1) * spec.w(k + 1, k, k + 1) * spec.w(n + 3, k + 1, k)
            * spec.w(n + 1, k + 2, n + 1) / spec.w(n + 1, n - 1, n + 1))


def eps3(spec: OperatorSpec, n: int, k: int) -> Scalar:
    return spec.g(k) * spec.w(n, n - 1, n) * spec.w(n + 2, k + 2, k - 1) * spec.w(n, k + 1, n)


def verify_l_recurrences(spec: OperatorSpec, L: TriangularTable, N: int | None = None,
                         ctx: ToleranceContext | None = None,
                         scales: TriangularTable | None = None) -> tuple[VerificationReport, VerificationReport]:
    """Residuals of the two diagonal recurrences satisfied by the entries of L.

    The three-diagonal relation with weights tau and y_{n-k} is checked for
    0 <= k <= n-2, n+2 <= N, except where tau would divide by a zero g_j.  The mixed relation with weights eps1..eps3 and
    p_{n-k-2} is checked for 0 <= k <= n-3 (it involves L_{n-1,k} and
    L_{n,k+1}, which are both strictly below the subdiagonal only there).
    """
    N = L.N if N is None else min(N, L.N)
    ctx = ctx or spec.ctx
    z = _z_of(spec)
    y = aux_table(z, "Y", N + 1)
    p = aux_table(z, "P", N + 1)

    def size(weight, n, k):
        mag = float(abs(L[n, k])) if scales is None else max(float(abs(L[n, k])), float(scales[n, k]))
        return float(abs(weight)) * mag

    g_zero = {j for j in range(1, N + 1) if is_zero(spec.g(j), ctx.with_scale(0.0))}
    diag = ResidualCollector("l_recurrence_tau", spec.field, ctx)
    skipped = 0
    for n in range(2, N - 1):
        for k in range(0, n - 1):
            # tau divides by g_{k+1} .. g_{n+2}
            if any(j in g_zero for j in range(k + 1, n + 3)):
                skipped += 1
                continue
            w1, w2, w3 = tau(spec, n + 2, k + 2), y[n - k] * tau(spec, n + 1, k + 1), tau(spec, n, k)
            t1, t2, t3 = w1 * L[n + 2, k + 2], w2 * L[n + 1, k + 1], w3 * L[n, k]
            diag.add(n, k, t1 - t2 + t3,
                     _scale(size(w1, n + 2, k + 2), size(w2, n + 1, k + 1), size(w3, n, k)))
    if skipped:
        diag.notes.append(f"{skipped} index pairs skipped: g vanishes at {sorted(g_zero)}")

    mixed = ResidualCollector("l_recurrence_eps", spec.field, ctx)
    for n in range(3, N + 1):
        for k in range(0, n - 2):
            w1, w2, w3 = p[n - k - 2] * eps1(spec, n, k), eps2(spec, n - 1, k), eps3(spec, n, k + 1)
            t1, t2, t3 = w1 * L[n, k], w2 * L[n - 1, k], w3 * L[n, k + 1]
            mixed.add(n, k, t1 - t2 + t3,
                      _scale(size(w1, n, k), size(w2, n - 1, k), size(w3, n, k + 1)))
    mixed.notes.append("evaluated for 0 <= k <= n-3")
    return diag.report(), mixed.report()


def _z_of(spec: OperatorSpec) -> Scalar:
    if spec.cls is not None:
        return spec.cls.z
    # recover z from the order-3 recurrence of h: h3 - h0 = z (h2 - h1)
    return (spec.h(3) - spec.h(0)) / spec.hdiff(2, 1)


# --- the g3/g4 constraint ----------------------------------------------------

@dataclass
class G34Solution:
    g3: Scalar
    g4: Scalar
    closed_g3: Scalar
    closed_g4: Scalar

    @property
    def closed_form_agrees(self) -> bool:
        ctx = ToleranceContext()
        return (close(self.g3, self.closed_g3, ctx.with_scale(_scale(self.g3)))
                and close(self.g4, self.closed_g4, ctx.with_scale(_scale(self.g4))))

    def diagnostics(self) -> list[str]:
        out = []
        if self.closed_form_agrees:
            return out
        if self.g3 != self.closed_g3:
            out.append(f"closed-form g3 = {format_scalar(self.closed_g3)} differs from solved g3 = {format_scalar(self.g3)}")
        if self.g4 != self.closed_g4:
            out.append(f"closed-form g4 = {format_scalar(self.closed_g4)} differs from solved g4 = {format_scalar(self.g4)}")
        return out


def closed_form_g34(z, h0, h1, h2, x0, x1, x2, g1, g2) -> tuple[Scalar, Scalar]:
    g3 = z * (x0 * (h1 - h0) + x1 * (h2 - h0) + x2 * (h2 - h1) + g2 - g1)
    g4 = ((x1 - x2) * (h1 - h2) * z**3 - (x0 - x2) * (h0 - h2) * z**2 + (g2 - g1) * z**2
          + (x0 * (h0 - h2) + x1 * (h2 - h1) + x2 * (h1 - h0)) * z - g2 * z + g1)
    return g3, g4


def solve_g34(z, h0, h1, h2, x0, x1, x2, g1, g2, field: Field = EXACT,
              ctx: ToleranceContext | None = None) -> G34Solution:
    """The (g3, g4) making L_{2,0} = 0 and L_{3,1} = 0.

    Both entries are affine in the unknown they are solved for, so each is
    evaluated at two trial values and the line's root taken.  The commonly
    quoted closed-form expressions are evaluated alongside for comparison.
    """
    z, h0, h1, h2, x0, x1, x2, g1, g2 = (field(v) for v in (z, h0, h1, h2, x0, x1, x2, g1, g2))
    h = order3_from_initials(z, h0, h1, h2)
    x = order3_from_initials(z, x0, x1, x2)
    ctx = ctx or ToleranceContext()
    zero, one = field.zero, field.one

    def entry(g3, g4, n, k):
        gs = [zero, g1, g2, g3, g4]
        spec = OperatorSpec(g=lambda i: gs[i], h=h, x=x, field=field, ctx=ctx)
        return l_entry_general(spec, n, k)

    f0 = entry(zero, zero, 2, 0)
    slope = entry(one, zero, 2, 0) - f0
    if is_zero(slope, ctx.with_scale(_scale(f0))):
        raise DegenerateSystemError("L_{2,0} does not depend on g3 (g1 g2 = 0?)")
    g3 = -f0 / slope

    f0 = entry(g3, zero, 3, 1)
    slope = entry(g3, one, 3, 1) - f0
    if is_zero(slope, ctx.with_scale(_scale(f0))):
        raise DegenerateSystemError("L_{3,1} does not depend on g4 (g2 g3 = 0?)")
    g4 = -f0 / slope

    pg3, pg4 = closed_form_g34(z, h0, h1, h2, x0, x1, x2, g1, g2)
    return G34Solution(g3, g4, pg3, pg4)
