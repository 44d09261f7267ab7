"""Seeded random scalars, sections and vector fields for law testing.

The polynomial degree is capped by the environment variable ``AGD_MAX_DEGREE``
(default 2), read at call time.
"""

from __future__ import annotations

import os
import random
from itertools import combinations_with_replacement

from .geometry import Section, VectorBundle, VectorField
from .symexpr import CoordinatePatch, ScalarExpr

__all__ = ["max_degree", "random_poly", "random_rational", "random_section", "random_field"]


def max_degree() -> int:
    raw = os.environ.get("AGD_MAX_DEGREE", "2")
    try:
        d = int(raw)
    except ValueError:
        raise ValueError(f"AGD_MAX_DEGREE must be a non-negative integer, got {raw!r}") from None
    if d < 0:
        raise ValueError(f"AGD_MAX_DEGREE must be a non-negative integer, got {raw!r}")
    return d


def _monomials(patch: CoordinatePatch, degree: int):
    out = []
    for k in range(degree + 1):
        for idx in combinations_with_replacement(range(patch.dimension), k):
            m = patch.one()
            for i in idx:
                m = m * patch.coord(i)
            out.append(m)
    return out


def random_poly(patch: CoordinatePatch, rng: random.Random, degree: int | None = None,
                density: float = 0.5, coeff: int = 3) -> ScalarExpr:
    """Polynomial of degree at most ``degree`` with integer coefficients in [-coeff, coeff]."""
    degree = max_degree() if degree is None else degree
    total = patch.zero()
    for m in _monomials(patch, degree):
        if rng.random() < density:
            total = total + rng.randint(-coeff, coeff) * m
    return total


def random_rational(patch: CoordinatePatch, rng: random.Random, degree: int | None = None) -> ScalarExpr:
    """Quotient of two random polynomials; the denominator is never zero."""
    den = patch.zero()
    while den.is_zero:
        den = random_poly(patch, rng, degree)
    return random_poly(patch, rng, degree) / den


def random_section(bundle: VectorBundle, rng: random.Random, degree: int | None = None) -> Section:
    return Section(bundle, [random_poly(bundle.patch, rng, degree) for _ in range(bundle.rank)])


def random_field(patch: CoordinatePatch, rng: random.Random, degree: int | None = None) -> VectorField:
    return VectorField(patch, [random_poly(patch, rng, degree) for _ in range(patch.dimension)])
