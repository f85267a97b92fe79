"""Linearly recurrent sequences h_k, x_k, g_k and their Chebyshev-like helpers.

``h`` (eigenvalues) and ``x`` (Newton nodes) solve the order-3 recurrence

    s_{k+3} = z (s_{k+2} - s_{k+1}) + s_k,

whose characteristic roots are 1, q, 1/q.  ``g`` solves the order-5
recurrence satisfied by pointwise products of two such solutions.  Three
closed-form branches exist depending on the root multiplicities: generic q,
q = 1 (z = 3) and q = -1 (z = -1).
"""
from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

from .numerics import EXACT, Field, Scalar, ToleranceContext, close


class ClassTag(str, enum.Enum):
    Q = "q"
    ONE = "1"
    MINUS_ONE = "-1"


class Kind(str, enum.Enum):
    H = "h"
    X = "x"
    G = "g"


class InvalidClassError(ValueError):
    pass


@dataclass(frozen=True)
class ClassSpec:
    tag: ClassTag
    q: Scalar | None = None
    field: Field = EXACT

    def __post_init__(self):
        tag = ClassTag(self.tag)
        object.__setattr__(self, "tag", tag)
        if tag is ClassTag.Q:
            if self.q is None:
                raise InvalidClassError("class q requires a value for q")
            q = self.field(self.q)
            object.__setattr__(self, "q", q)
            ctx = ToleranceContext()
            if any(close(q, self.field(v), ctx) for v in (0, 1, -1)):
                raise InvalidClassError(f"q must avoid 0, 1, -1 (got {q})")
        else:
            object.__setattr__(self, "q", self.field(1 if tag is ClassTag.ONE else -1))

    @property
    def z(self) -> Scalar:
        if self.tag is ClassTag.Q:
            return 1 + self.q + 1 / self.q
        return self.field(3 if self.tag is ClassTag.ONE else -1)

    @classmethod
    def generic(cls, q, field: Field = EXACT) -> ClassSpec:
        return cls(ClassTag.Q, q, field)

    @classmethod
    def one(cls, field: Field = EXACT) -> ClassSpec:
        return cls(ClassTag.ONE, None, field)

    @classmethod
    def minus_one(cls, field: Field = EXACT) -> ClassSpec:
        return cls(ClassTag.MINUS_ONE, None, field)


@dataclass(frozen=True)
class SequenceParams:
    """Spectral ``a``, node ``b`` and step ``d`` parameters.

    ``d0``, ``d3``, ``d4`` are normally left as ``None`` and filled by
    :meth:`derive`; setting them explicitly produces a g outside the
    orthogonal class, which is useful for negative checks.
    """

    a0: Scalar
    a1: Scalar
    a2: Scalar
    b0: Scalar
    b1: Scalar
    b2: Scalar
    d1: Scalar
    d2: Scalar
    d0: Scalar | None = None
    d3: Scalar | None = None
    d4: Scalar | None = None

    @classmethod
    def make(cls, a: Sequence, b: Sequence, d: Sequence, field: Field = EXACT) -> SequenceParams:
        a0, a1, a2 = (field(v) for v in a)
        b0, b1, b2 = (field(v) for v in b)
        d1, d2 = (field(v) for v in d)
        return cls(a0, a1, a2, b0, b1, b2, d1, d2)

    @property
    def a(self) -> tuple:
        return (self.a0, self.a1, self.a2)

    @property
    def b(self) -> tuple:
        return (self.b0, self.b1, self.b2)

    @property
    def derived(self) -> bool:
        return None not in (self.d0, self.d3, self.d4)

    def derive(self, cls: ClassSpec) -> SequenceParams:
        """Fill d0, d3, d4 from the class constraints (keeps explicit values)."""
        a1, a2, b1, b2, d1, d2 = self.a1, self.a2, self.b1, self.b2, self.d1, self.d2
        if cls.tag is ClassTag.Q:
            q = cls.q
            d3 = a1 * b1 / q
            d4 = a2 * b2 * q
            d0 = -(a2 * b2 * q + d1 + d2 + a1 * b1 / q)
        elif cls.tag is ClassTag.ONE:
            d3 = a1 * b2 + a2 * b1 + 2 * a2 * b2
            d4 = a2 * b2
            d0 = 0 * d1
        else:
            d0 = -d1
            d3 = -a1 * b2 - a2 * b1
            d4 = -2 * a2 * b2
        return replace(
            self,
            d0=d0 if self.d0 is None else self.d0,
            d3=d3 if self.d3 is None else self.d3,
            d4=d4 if self.d4 is None else self.d4,
        )

    def scaled(self, factor: Scalar) -> SequenceParams:
        """Scale (a0, a1, a2, d1, d2) jointly; derived d's are dropped."""
        return SequenceParams(
            self.a0 * factor, self.a1 * factor, self.a2 * factor,
            self.b0, self.b1, self.b2,
            self.d1 * factor, self.d2 * factor,
        )


@dataclass(frozen=True)
class RecurrentSequence:
    """Closed-form evaluator ``k -> s_k`` for one of h, x, g."""

    cls: ClassSpec
    kind: Kind
    coeffs: tuple
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    def __call__(self, k: int) -> Scalar:
        v = self._cache.get(k)
        if v is None:
            v = self._cache[k] = self._evaluate(k)
        return v

    def _evaluate(self, k: int) -> Scalar:
        c = self.coeffs
        tag = self.cls.tag
        if self.kind is Kind.G:
            d0, d1, d2, d3, d4 = c
            if tag is ClassTag.Q:
                q = self.cls.q
                qk = q**k
                return d0 + d1 * qk + d2 / qk + d3 * qk * qk + d4 / (qk * qk)
            if tag is ClassTag.ONE:
                f1 = k
                f2 = f1 * (k - 1)
                f3 = f2 * (k - 2)
                return d1 * f1 + d2 * f2 + d3 * f3 + d4 * f3 * (k - 3)
            s = 1 if k % 2 == 0 else -1
            return d0 + d1 * s + 2 * d2 * k * s + 2 * d3 * k + 2 * d4 * k * (k - 1)
        c0, c1, c2 = c
        if tag is ClassTag.Q:
            qk = self.cls.q**k
            return c0 + c1 * qk + c2 / qk
        if tag is ClassTag.ONE:
            return c0 + c1 * k + c2 * k * (k - 1)
        s = 1 if k % 2 == 0 else -1
        return c0 + c1 * s + 2 * c2 * k * s

    def terms(self, n: int, start: int = 0) -> list:
        return [self(k) for k in range(start, n + 1)]


class RecurrenceDrivenSequence:
    """Sequence generated forward from initial values by a constant-coefficient
    recurrence ``s_{k+r} = sum_i coeffs[i] * s_{k+i}``."""

    def __init__(self, initial: Sequence[Scalar], coeffs: Sequence[Scalar]):
        if len(initial) != len(coeffs):
            raise ValueError("need one initial value per recurrence coefficient")
        self._values = list(initial)
        self._coeffs = list(coeffs)

    def __call__(self, k: int) -> Scalar:
        if k < 0:
            raise IndexError("recurrence-driven sequences start at k = 0")
        r = len(self._coeffs)
        vals = self._values
        while len(vals) <= k:
            tail = vals[-r:]
            vals.append(sum(c * v for c, v in zip(self._coeffs, tail)))
        return vals[k]


def order3_coefficients(z: Scalar) -> list:
    """Coefficients of s_k, s_{k+1}, s_{k+2} in the order-3 recurrence."""
    return [1 + 0 * z, -z, z]


def order5_coefficients(z: Scalar) -> list:
    w = z * z - z - 1
    return [1 + 0 * z, -w, (z - 1) * w, -(z - 1) * w, w]


def order3_from_initials(z: Scalar, s0, s1, s2) -> RecurrenceDrivenSequence:
    return RecurrenceDrivenSequence([s0, s1, s2], order3_coefficients(z))


def order5_from_initials(z: Scalar, s0, s1, s2, s3, s4) -> RecurrenceDrivenSequence:
    return RecurrenceDrivenSequence([s0, s1, s2, s3, s4], order5_coefficients(z))


def order3_residual(z: Scalar, s: Callable[[int], Scalar], k: int) -> Scalar:
    return s(k + 3) - z * (s(k + 2) - s(k + 1)) - s(k)


def order5_residual(z: Scalar, s: Callable[[int], Scalar], k: int) -> Scalar:
    w = z * z - z - 1
    return s(k + 5) - w * (s(k + 4) - s(k + 1)) + (z - 1) * w * (s(k + 3) - s(k + 2)) - s(k)


def h_x_sequence(cls: ClassSpec, kind: Kind | str, coeffs: Sequence) -> RecurrentSequence:
    """Closed-form h or x sequence from its three coefficients.

    Generic q: c0 + c1 q^k + c2 q^-k.  q = 1: c0 + c1 k + c2 k(k-1).
    q = -1: c0 + c1 (-1)^k + 2 c2 k (-1)^k.
    """
    kind = Kind(kind)
    if kind is Kind.G:
        raise ValueError("use g_sequence for step sequences")
    return RecurrentSequence(cls, kind, tuple(cls.field(c) for c in coeffs))


def g_sequence(cls: ClassSpec, params: SequenceParams, N: int | None = None) -> RecurrentSequence:
    """Step sequence g with g_0 = 0.

    ``params`` must already carry d0, d3, d4 (see :meth:`SequenceParams.derive`).
    When ``N`` is given, zeros among g_1..g_N trigger a warning; only the
    operations that divide by g treat them as errors.
    """
    if not params.derived:
        raise ValueError("derive d0, d3, d4 before building g")
    d0 = params.d0
    if cls.tag is ClassTag.ONE:
        d0 = cls.field(0)
    seq = RecurrentSequence(cls, Kind.G, (d0, params.d1, params.d2, params.d3, params.d4))
    if N is not None:
        zeros = [k for k in range(1, N + 1) if seq(k) == 0]
        if zeros:
            warnings.warn(f"degenerate step sequence: g_k = 0 at k = {zeros}", stacklevel=2)
    return seq


def params_from_initials(cls: ClassSpec, kind: Kind | str, s0, s1, s2) -> tuple:
    """Coefficients (c0, c1, c2) reproducing s0, s1, s2 at k = 0, 1, 2."""
    f = cls.field
    s0, s1, s2 = f(s0), f(s1), f(s2)
    if cls.tag is ClassTag.Q:
        q = cls.q
        den = (q - 1) ** 2
        c0 = ((q * q + 1) * s1 - q * (s0 + s2)) / den
        c1 = -(q * (s1 - s2) + s1 - s0) / ((q + 1) * den)
        c2 = q * q * (q * (s0 - s1) + s2 - s1) / ((q + 1) * den)
        return (c0, c1, c2)
    if cls.tag is ClassTag.ONE:
        return (s0, s1 - s0, (s0 - 2 * s1 + s2) / 2)
    c2 = (s2 - s0) / 4
    c0 = (s0 + s1) / 2 + c2
    return (c0, s0 - c0, c2)


def aux_pry(z: Scalar, kind: str, k: int) -> Scalar:
    """Solutions of s_{k+2} = (z-1) s_{k+1} - s_k.

    P starts (1, z-1), R starts (1, z), Y starts (2, z-1).
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    one = 1 + 0 * z
    start = {"P": (one, z - 1), "R": (one, z), "Y": (2 * one, z - 1)}[kind.upper()]
    s0, s1 = start
    for _ in range(k):
        s0, s1 = s1, (z - 1) * s1 - s0
    return s0


def aux_table(z: Scalar, kind: str, n: int) -> list:
    out = []
    one = 1 + 0 * z
    s0, s1 = {"P": (one, z - 1), "R": (one, z), "Y": (2 * one, z - 1)}[kind.upper()]
    for _ in range(n + 1):
        out.append(s0)
        s0, s1 = s1, (z - 1) * s1 - s0
    return out


class SpectrumStatus(str, enum.Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    DISAGREE = "DISAGREE"


@dataclass
class SpectrumReport:
    """Outcome of :func:`validate_spectrum`.

    ``ok`` is the brute-force verdict.  ``status`` is DISAGREE when the
    class-specific algebraic conditions and brute force differ.
    """

    N: int
    brute_force_ok: bool
    algebraic_ok: bool
    collisions: list = field(default_factory=list)
    algebraic_failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.brute_force_ok

    @property
    def status(self) -> SpectrumStatus:
        if self.brute_force_ok != self.algebraic_ok:
            return SpectrumStatus.DISAGREE
        return SpectrumStatus.PASS if self.brute_force_ok else SpectrumStatus.FAIL

    def first_collision(self) -> tuple | None:
        return self.collisions[0] if self.collisions else None


def find_collisions(h: Callable[[int], Scalar], N: int, ctx: ToleranceContext | None = None) -> list:
    """All pairs (j, k), j < k <= N, with h_j == h_k, sorted by k then j."""
    values = [h(k) for k in range(N + 1)]
    ctx = ctx or ToleranceContext()
    out = []
    for k in range(N + 1):
        for j in range(k):
            if close(values[j], values[k], ctx):
                out.append((j, k))
    return out


def _algebraic_failures(cls: ClassSpec, params: SequenceParams, N: int, ctx: ToleranceContext) -> list:
    a1, a2 = params.a1, params.a2
    f = cls.field
    fails = []
    if cls.tag is ClassTag.Q:
        q = cls.q
        for d in range(1, N + 1):
            if close(q**d, f(1), ctx):
                fails.append(("q^d == 1", d))
        for m in range(1, 2 * N):
            if close(q**m * a1, a2, ctx):
                fails.append(("q^m a1 == a2", m))
    elif cls.tag is ClassTag.ONE:
        for s in range(0, 2 * N - 1):
            if close(a1 + s * a2, f(0), ctx):
                fails.append(("a1 + s a2 == 0", s))
    else:
        if N >= 1 and close(a2, f(0), ctx):
            fails.append(("a2 == 0", 0))
        for n in range(1, 2 * N):
            if close(a1 - n * a2, f(0), ctx):
                fails.append(("a1 - n a2 == 0", n))
    return fails


def validate_spectrum(cls: ClassSpec, params: SequenceParams, N: int,
                      ctx: ToleranceContext | None = None) -> SpectrumReport:
    """Check h_j != h_k for 0 <= j < k <= N two ways.

    Brute force compares every pair.  The algebraic route evaluates the
    class distinctness conditions over the index ranges that matter up to N:
    q^d != 1 and q^m a1 != a2 (generic q); a1 + s a2 != 0 (q = 1);
    a2 != 0 and a1 - n a2 != 0 (q = -1, as commonly stated).
    """
    ctx = ctx or ToleranceContext()
    h = h_x_sequence(cls, Kind.H, params.a)
    collisions = find_collisions(h, N, ctx)
    algebraic = _algebraic_failures(cls, params, N, ctx)
    return SpectrumReport(N, not collisions, not algebraic, collisions, algebraic)


def params_from_mapping(data: dict, field: Field = EXACT) -> tuple[ClassSpec, SequenceParams]:
    """Build (ClassSpec, SequenceParams) from the JSON parameter-file schema.

    Keys: ``class`` ("q" | "1" | "-1"), ``q`` (class q), ``a``/``h`` and
    ``b``/``x`` (three scalars each; ``h``/``x`` are initial values), ``d``
    (two scalars).  Optional ``d0``, ``d3``, ``d4`` override derivation.
    """
    try:
        tag = ClassTag(str(data["class"]))
    except KeyError:
        raise ValueError("parameter file needs a 'class' key") from None
    cls = ClassSpec(tag, _scalar(data["q"], field) if tag is ClassTag.Q and "q" in data else None, field)

    def triple(key: str, alt: str, kind: Kind) -> tuple:
        if key in data:
            vals = data[key]
            if len(vals) != 3:
                raise ValueError(f"'{key}' needs three scalars")
            return tuple(_scalar(v, field) for v in vals)
        if alt in data:
            vals = data[alt]
            if len(vals) != 3:
                raise ValueError(f"'{alt}' needs three scalars")
            return params_from_initials(cls, kind, *(_scalar(v, field) for v in vals))
        raise ValueError(f"parameter file needs '{key}' or '{alt}'")

    a = triple("a", "h", Kind.H)
    b = triple("b", "x", Kind.X)
    d = data.get("d")
    if d is None or len(d) != 2:
        raise ValueError("'d' needs two scalars")
    params = SequenceParams(*a, *b, _scalar(d[0], field), _scalar(d[1], field))
    overrides = {k: _scalar(data[k], field) for k in ("d0", "d3", "d4") if k in data}
    if overrides:
        params = replace(params, **overrides)
    return cls, params.derive(cls)


def params_to_mapping(cls: ClassSpec, params: SequenceParams) -> dict:
    fmt = cls.field.format
    out: dict = {"class": cls.tag.value}
    if cls.tag is ClassTag.Q:
        out["q"] = fmt(cls.q)
    out["a"] = [fmt(v) for v in params.a]
    out["b"] = [fmt(v) for v in params.b]
    out["d"] = [fmt(params.d1), fmt(params.d2)]
    return out


def _scalar(value, field: Field) -> Scalar:
    if isinstance(value, str):
        return field.parse(value)
    return field(value)


def hadamard(s: Callable[[int], Scalar], t: Callable[[int], Scalar]) -> Callable[[int], Scalar]:
    return lambda k: s(k) * t(k)


__all__ = [
    "ClassTag", "Kind", "ClassSpec", "SequenceParams", "RecurrentSequence",
    "RecurrenceDrivenSequence", "h_x_sequence", "g_sequence", "params_from_initials",
    "aux_pry", "aux_table", "validate_spectrum", "SpectrumReport", "SpectrumStatus",
    "find_collisions", "order3_residual", "order5_residual", "order3_from_initials",
    "order5_from_initials", "params_from_mapping", "params_to_mapping", "InvalidClassError",
]
