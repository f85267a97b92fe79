"""Moments, the moment functional, discrete weights and Hankel determinants."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .core import HCollisionError, OperatorSpec
from .newton import NodeSequence, basis_matrices, poly_multiply
from .numerics import EXACT, Field, Scalar, ToleranceContext, close, is_zero


class InsufficientMomentsError(ValueError):
    pass


def generalized_moments(spec: OperatorSpec, N: int) -> list:
    """m_0 = 1, m_n = prod_{k=1}^n g_k / (h_0 - h_k)."""
    m = [spec.field.one]
    for k in range(1, N + 1):
        m.append(m[-1] * spec.g(k) / spec.hdiff(0, k))
    return m


def standard_moments(m: list, x_nodes: NodeSequence, N: int, field: Field = EXACT) -> list:
    """mu = Vinv m, Vinv holding complete homogeneous sums of the nodes."""
    if len(m) < N + 1:
        raise InsufficientMomentsError(f"need {N + 1} generalized moments, have {len(m)}")
    _, Vinv = basis_matrices(x_nodes, N, field)
    out = []
    for n in range(N + 1):
        r = Vinv.row(n)
        s = field.zero
        for k in range(n + 1):
            s += r[k] * m[k]
        out.append(s)
    return out


def standard_moment_bounds(m: list, x_nodes: NodeSequence, N: int, field: Field = EXACT) -> list:
    """sum_k |Vinv_{n,k}| |m_k|: the size of the terms summed into mu_n."""
    _, Vinv = basis_matrices(x_nodes, N, field)
    return [sum(float(abs(c)) * float(abs(v)) for c, v in zip(Vinv.row(n), m)) for n in range(N + 1)]


def gram_functional(mu: list, p: list, q: list) -> Scalar:
    """Lambda(p q) = sum_j (p q)_j mu_j."""
    pq = poly_multiply(p, q)
    while pq and pq[-1] == 0:
        pq.pop()
    if len(pq) > len(mu):
        raise InsufficientMomentsError(f"product has degree {len(pq) - 1}, moments reach {len(mu) - 1}")
    total = 0 * mu[0]
    for c, v in zip(pq, mu):
        total += c * v
    return total


def gram_scale(mu: list, p: list, q: list, bounds: list | None = None) -> float:
    """sum_j (|p| * |q|)_j |mu_j|, the size of the terms that cancel in Lambda(p q).

    ``bounds`` replaces |mu_j| when the moments themselves carry rounding
    error (see :func:`standard_moment_bounds`).
    """
    pq = poly_multiply([float(abs(c)) for c in p], [float(abs(c)) for c in q])
    ref = bounds if bounds is not None else [float(abs(v)) for v in mu]
    return sum(c * v for c, v in zip(pq, ref))


class Convergence(str, enum.Enum):
    DECAYING = "DECAYING"
    NON_CONVERGENT = "NON_CONVERGENT"


@dataclass
class WeightTable:
    """Truncated weights r_0..r_J on the nodes x_0..x_J.

    ``tail_estimate`` is the largest magnitude of a last retained series term.
    ``system_residual`` is the largest |sum_j r_j v_k(x_j) - m_k| over k <= J.
    ``tails[k]`` is the magnitude of the last retained term of r_k.
    """

    r: list
    J: int
    tail_estimate: float
    convergence: Convergence
    system_residual: float
    notes: list = field(default_factory=list)
    tails: list = field(default_factory=list)


class RepeatedNodeError(ValueError):
    pass


def _derivative_at_node(xs: list, j: int, k: int) -> Scalar:
    """v'_{j+1}(x_k) = prod_{i<=j, i!=k} (x_k - x_i) for k <= j."""
    acc = 1 + 0 * xs[k]
    for i in range(j + 1):
        if i != k:
            acc *= xs[k] - xs[i]
    return acc


def discrete_weights(spec: OperatorSpec, m: list, J: int, window: int = 5) -> WeightTable:
    """r_k = sum_{j=k}^J m_j / v'_{j+1}(x_k), truncated at J.

    The series is flagged NON_CONVERGENT unless, for every k with at least
    ``window`` retained terms, the last ``window`` terms strictly decrease in
    magnitude.
    """
    if len(m) < J + 1:
        raise InsufficientMomentsError(f"need {J + 1} generalized moments, have {len(m)}")
    f = spec.field
    xs = [spec.x(j) for j in range(J + 1)]
    ctx = spec.ctx
    for j in range(J + 1):
        for i in range(j):
            if close(xs[i], xs[j], ctx):
                raise RepeatedNodeError(f"nodes x_{i} and x_{j} coincide")

    r, tails = [], []
    undecided = []
    for k in range(J + 1):
        terms = [m[j] / _derivative_at_node(xs, j, k) for j in range(k, J + 1)]
        s = f.zero
        for t in terms:
            s += t
        r.append(s)
        tails.append(float(abs(terms[-1])))
        if len(terms) >= window:
            mags = [abs(t) for t in terms[-window:]]
            if not all(b < a for a, b in zip(mags, mags[1:])):
                undecided.append(k)

    resid = 0.0
    for k in range(J + 1):
        s = f.zero
        for j in range(k, J + 1):
            v = 1 + 0 * xs[j]
            for i in range(k):
                v *= xs[j] - xs[i]
            s += r[j] * v
        resid = max(resid, float(abs(s - m[k])))

    notes = [f"decay heuristic: the last {window} terms of each r_k must decrease in magnitude; "
             "this is not a convergence proof"]
    if undecided:
        notes.append(f"no decay in the last {window} terms for k = {undecided}")
    return WeightTable(r, J, max(tails) if tails else 0.0,
                       Convergence.NON_CONVERGENT if undecided else Convergence.DECAYING,
                       resid, notes, tails)


def pinv_entry(xs: list, j: int, k: int) -> Scalar:
    """(P^{-1})_{j,k} = 1 / v'_{j+1}(x_k) for k <= j, else 0."""
    if k > j:
        return 0 * xs[0]
    return 1 / _derivative_at_node(xs, j, k)


def determinant(matrix: list) -> Scalar:
    """Fraction-free (Bareiss) elimination with row swaps on zero pivots."""
    a = [list(r) for r in matrix]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1 + 0 * a[0][0]
    for i in range(n - 1):
        if a[i][i] == 0:
            swap = next((r for r in range(i + 1, n) if a[r][i] != 0), None)
            if swap is None:
                return 0 * a[0][0]
            a[i], a[swap] = a[swap], a[i]
            sign = -sign
        piv = a[i][i]
        for r in range(i + 1, n):
            for c in range(i + 1, n):
                a[r][c] = (a[r][c] * piv - a[r][i] * a[i][c]) / prev
        prev = piv
    return sign * a[n - 1][n - 1]


@dataclass
class HankelReport:
    deltas: list
    residuals: list
    failures: list
    quasi_definite: bool

    @property
    def identity_holds(self) -> bool:
        return not self.failures


def hankel_determinants(mu: list, N: int) -> list:
    if len(mu) < 2 * N + 1:
        raise InsufficientMomentsError(f"Hankel determinants to {N} need {2 * N + 1} moments")
    return [determinant([[mu[i + j] for j in range(n + 1)] for i in range(n + 1)]) for n in range(N + 1)]


def hankel_check(mu: list, alpha: list, N: int, ctx: ToleranceContext | None = None) -> HankelReport:
    """Delta_0..Delta_N and alpha_n Delta_{n-1}^2 == Delta_n Delta_{n-2} (Delta_{-1} = 1).

    ``alpha[n]`` is alpha_n for n >= 1; ``alpha[0]`` is ignored.
    """
    ctx = ctx or ToleranceContext()
    deltas = hankel_determinants(mu, N)
    one = 1 + 0 * mu[0]
    ext = [one] + deltas  # ext[n + 1] == Delta_n
    residuals, failures = [], []
    for n in range(1, N + 1):
        lhs = alpha[n] * ext[n] ** 2
        rhs = ext[n + 1] * ext[n - 1]
        res = lhs - rhs
        residuals.append(res)
        if not is_zero(res, ctx.with_scale(max(float(abs(lhs)), float(abs(rhs))))):
            failures.append((n, res))
    quasi = all(not is_zero(d, ctx.with_scale(0.0)) for d in deltas)
    return HankelReport(deltas, residuals, failures, quasi)


__all__ = [
    "generalized_moments", "standard_moments", "standard_moment_bounds", "gram_functional", "gram_scale", "discrete_weights",
    "hankel_check", "hankel_determinants", "determinant", "WeightTable", "HankelReport",
    "Convergence", "InsufficientMomentsError", "RepeatedNodeError", "HCollisionError", "pinv_entry",
]
