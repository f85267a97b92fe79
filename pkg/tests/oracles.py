"""Independent reference computations that share no code with the package."""
from __future__ import annotations

from fractions import Fraction
from math import comb


def uniform_moments(n: int) -> list:
    """Moments of the uniform probability measure on [-1, 1]."""
    return [Fraction(1, k + 1) if k % 2 == 0 else Fraction(0) for k in range(n + 1)]


def arcsine_moments(n: int) -> list:
    """Moments of dt / (pi sqrt(1 - t^2)) on [-1, 1]."""
    return [Fraction(comb(k, k // 2), 2**k) if k % 2 == 0 else Fraction(0) for k in range(n + 1)]


def _mul(p, q):
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


def _apply(mu, p):
    return sum(c * m for c, m in zip(p, mu))


def gram_schmidt(mu: list, N: int):
    """Monic orthogonal polynomials (monomial coefficients) and their recurrence.

    Returns (polys, alpha, beta) with alpha[0] = None.  Needs moments to 2N+1.
    """
    polys = []
    for n in range(N + 1):
        p = [Fraction(0)] * n + [Fraction(1)]
        for m in range(n):
            pm = polys[m]
            coef = _apply(mu, _mul([0] * n + [1], pm)) / _apply(mu, _mul(pm, pm))
            for i, c in enumerate(pm):
                p[i] -= coef * c
        polys.append(p)
    norms = [_apply(mu, _mul(p, p)) for p in polys]
    alpha = [None] + [norms[n] / norms[n - 1] for n in range(1, N + 1)]
    beta = [_apply(mu, _mul([0, 1], _mul(p, p))) / nrm for p, nrm in zip(polys, norms)]
    return polys, alpha, beta


def brute_force_distinct(h, N: int) -> bool:
    vals = [h(k) for k in range(N + 1)]
    return len(set(vals)) == len(vals)
