"""Seeded random class-conformant parameter sets shared by the test modules."""
from __future__ import annotations

import random
from fractions import Fraction

from askeyh.sequences import ClassSpec, ClassTag, SequenceParams, validate_spectrum

SEED = 20260101
Q_CHOICES = [Fraction(2), Fraction(3), Fraction(1, 2), Fraction(1, 3), Fraction(-2),
             Fraction(3, 2), Fraction(2, 3), Fraction(-1, 2), Fraction(5, 2)]


def rational(rng: random.Random, bound: int = 5, nonzero: bool = False) -> Fraction:
    while True:
        v = Fraction(rng.randint(-bound, bound), rng.choice((1, 2, 3, 4, 5)))
        if v or not nonzero:
            return v


def class_spec(tag: ClassTag, rng: random.Random) -> ClassSpec:
    if tag is ClassTag.Q:
        return ClassSpec.generic(rng.choice(Q_CHOICES))
    return ClassSpec(tag)


def random_params(cls: ClassSpec, rng: random.Random) -> SequenceParams:
    a = (rational(rng), rational(rng, nonzero=True), rational(rng, nonzero=True))
    b = (rational(rng), rational(rng), rational(rng))
    d = (rational(rng, nonzero=True), rational(rng))
    return SequenceParams.make(a, b, d).derive(cls)


def random_specs(tag: ClassTag, count: int, depth: int, seed: int = SEED) -> list:
    """``count`` (ClassSpec, SequenceParams) pairs whose eigenvalues are distinct to ``depth``."""
    rng = random.Random(f"{seed}-{tag.value}")
    out = []
    while len(out) < count:
        cls = class_spec(tag, rng)
        params = random_params(cls, rng)
        if validate_spectrum(cls, params, depth).ok:
            out.append((cls, params))
    return out
