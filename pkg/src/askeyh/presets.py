"""Parameter tables for named hypergeometric and basic hypergeometric families.

Each entry maps the family's classical parameters to (a, b, d) with one free
nonzero scale (``a2`` or ``a1``).  The eigenvalue offset ``a0`` is free and
defaults to 0; it shifts h_k without affecting the recurrence coefficients.
Families outside this catalog can be described by raw parameters.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .numerics import EXACT, FLOAT, Field, Scalar
from .sequences import ClassSpec, ClassTag, SequenceParams


class UnknownFamilyError(KeyError):
    pass


@dataclass(frozen=True)
class FamilyDescriptor:
    name: str
    tag: ClassTag
    slots: tuple[str, ...]
    scale_slot: str
    builder: Callable
    complex_valued: bool = False
    finite: bool = False

    @property
    def needs_q(self) -> bool:
        return self.tag is ClassTag.Q


# Builders take (values, s, q, f) where ``s`` is the scale, ``q`` the base
# (class q only) and ``f`` the field; they return (a1, a2, b0, b1, b2, d1, d2).

def _askey_wilson(v, s, q, f):
    a, b, c, d = v["a"], v["b"], v["c"], v["d"]
    abcd = a * b * c * d
    return (abcd / q * s, s, f(0), a, 1 / a,
            -a * (abcd + q * (b * c + b * d + c * d)) / q**2 * s,
            -((b + c + d) + q / a) * s)


def _q_racah(v, s, q, f):
    al, be, ga, de = v["alpha"], v["beta"], v["gamma"], v["delta"]
    return (al * be * q * s, s, f(0), ga * de * q, f(1),
            -q * (al * be * ga * de + al * be * de + be * ga * de + al * ga) * s,
            -q * (be * de + al + ga + 1) * s)


def _continuous_dual_q_hahn(v, s, q, f):
    a, b, c = v["a"], v["b"], v["c"]
    return (f(0), s, f(0), a / 2, 1 / (2 * a),
            -a * b * c * s / (2 * q),
            -(a * b + a * c + q) * s / (2 * a))


def _al_salam_chihara(v, s, q, f):
    a, b = v["a"], v["b"]
    return (f(0), s, f(0), a, 1 / a, f(0), -s * (b + q / a))


def _big_q_jacobi(v, s, q, f):
    a, b, c = v["a"], v["b"], v["c"]
    return (a * b * q * s, s, f(0), a * q, f(0),
            -(a * b + b + c) * a * q * s, -c * q * s)


def _q_meixner(v, s, q, f):
    b, c = v["b"], v["c"]
    return (s, f(0), f(0), b * q, f(0), s * (b * c - b - 1), c * s)


def _wilson(v, s, q, f):
    a, b, c, d = v["a"], v["b"], v["c"], v["d"]
    return ((a + b + c + d) * s, s, -a * a, -2 * a - 1, f(-1),
            -s * (a + b) * (a + c) * (a + d),
            -s * ((2 * a + 1) * (a + b + c + d + 1) + a * a + b * c + b * d + c * d))


def _racah(v, s, q, f):
    be, ga, de, N = v["beta"], v["gamma"], v["delta"], v["N"]
    return ((1 + be - N) * s, s, f(0), 2 + ga + de, f(1),
            -N * (1 + ga) * (1 + be + de) * s,
            -s * ((3 + be + ga + de) * N - (2 + ga) * (2 + de + ga)))


def _continuous_dual_hahn(v, s, q, f):
    a, b, c = v["a"], v["b"], v["c"]
    return (s, f(0), -a * a, -2 * a - 1, f(-1),
            -s * (a + c) * (a + b), -s * (2 * a + b + c + 1))


def _continuous_hahn(v, s, q, f):
    a, b, c, d = v["a"], v["b"], v["c"], v["d"]
    i = 1j
    return (s * (a + b + c + d), s, i * b, i, f(0),
            i * s * (b * b + b * c + b * d + c * d), i * s * (2 * b + c + d + 1))


def _meixner_pollaczek(v, s, q, f):
    lam, phi = v["lambda"], v["phi"]
    cot = math.cos(phi.real) / math.sin(phi.real) - 1j
    return (s, f(0), -1j * lam, -1j, f(0), s * lam * cot, s / 2 * cot)


def _jacobi(v, s, q, f):
    al, be = v["alpha"], v["beta"]
    return (s * (2 + al + be), s, f(1), f(0), f(0), 2 * s * (al + 1), 2 * s)


def _bessel(v, s, q, f):
    a = v["a"]
    return ((a + 2) * s, s, f(0), f(0), f(0), 2 * s, f(0))


_CATALOG = [
    FamilyDescriptor("askey-wilson", ClassTag.Q, ("a", "b", "c", "d"), "a2", _askey_wilson),
    FamilyDescriptor("q-racah", ClassTag.Q, ("alpha", "beta", "gamma", "delta"), "a2", _q_racah,
                     finite=True),
    FamilyDescriptor("continuous-dual-q-hahn", ClassTag.Q, ("a", "b", "c"), "a2", _continuous_dual_q_hahn),
    FamilyDescriptor("al-salam-chihara", ClassTag.Q, ("a", "b"), "a2", _al_salam_chihara),
    FamilyDescriptor("big-q-jacobi", ClassTag.Q, ("a", "b", "c"), "a2", _big_q_jacobi),
    FamilyDescriptor("q-meixner", ClassTag.Q, ("b", "c"), "a1", _q_meixner),
    FamilyDescriptor("wilson", ClassTag.ONE, ("a", "b", "c", "d"), "a2", _wilson),
    FamilyDescriptor("racah", ClassTag.ONE, ("beta", "gamma", "delta", "N"), "a2", _racah,
                     finite=True),
    FamilyDescriptor("continuous-dual-hahn", ClassTag.ONE, ("a", "b", "c"), "a1", _continuous_dual_hahn),
    FamilyDescriptor("continuous-hahn", ClassTag.ONE, ("a", "b", "c", "d"), "a2", _continuous_hahn,
                     complex_valued=True),
    FamilyDescriptor("meixner-pollaczek", ClassTag.ONE, ("lambda", "phi"), "a1", _meixner_pollaczek,
                     complex_valued=True),
    FamilyDescriptor("jacobi", ClassTag.ONE, ("alpha", "beta"), "a2", _jacobi),
    FamilyDescriptor("bessel", ClassTag.ONE, ("a",), "a2", _bessel),
]

_BY_NAME = {d.name: d for d in _CATALOG}


def list_families() -> list[FamilyDescriptor]:
    return list(_CATALOG)


def get_family(name: str) -> FamilyDescriptor:
    try:
        return _BY_NAME[name]
    except KeyError:
        raise UnknownFamilyError(f"unknown family {name!r}; known: {', '.join(_BY_NAME)}") from None


def instantiate(name: str, values: dict, scale: Scalar = 1, a0: Scalar = 0, q: Scalar | None = None,
                field: Field | None = None) -> tuple[ClassSpec, SequenceParams]:
    """(ClassSpec, SequenceParams) for a named family.

    ``values`` maps slot names to scalars (strings are parsed in ``field``).
    Complex-valued families default to, and require, the float backend.
    """
    desc = get_family(name)
    if field is None:
        field = FLOAT if desc.complex_valued else EXACT
    if desc.complex_valued and field.exact:
        raise ValueError(f"{name} has complex parameters; use the float backend")
    missing = [s for s in desc.slots if s not in values]
    if missing:
        raise ValueError(f"{name} needs values for {', '.join(missing)}")
    extra = set(values) - set(desc.slots) - {"q"}
    if extra:
        raise ValueError(f"{name} has no slot(s) {', '.join(sorted(extra))}")
    if q is None and "q" in values:
        q = values["q"]
    if desc.needs_q and q is None:
        raise ValueError(f"{name} needs q")
    vals = {k: _coerce(values[k], field) for k in desc.slots}
    s = _coerce(scale, field)
    if s == 0:
        raise ValueError("scale must be nonzero")
    cls = ClassSpec(desc.tag, _coerce(q, field) if desc.needs_q else None, field)
    a1, a2, b0, b1, b2, d1, d2 = (field(v) for v in desc.builder(vals, s, cls.q, field))
    params = SequenceParams(_coerce(a0, field), a1, a2, b0, b1, b2, d1, d2)
    return cls, params.derive(cls)


def _coerce(value, field: Field) -> Scalar:
    if isinstance(value, str):
        return field.parse(value)
    return field(value)
