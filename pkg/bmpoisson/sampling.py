"""Seeded random inputs for the property suites."""
from __future__ import annotations

import itertools
from typing import Any

import numpy as np

from .multivector import DIM, MultiVector
from .poly import NVARS, Polynomial

DEFAULT_SEED = 20240601


def make_rng(rng: Any = None) -> np.random.Generator:
    """Accepts a seed, an existing generator or ``None``, as ``numpy.random.default_rng`` does."""
    return np.random.default_rng(DEFAULT_SEED if rng is None else rng)


def random_polynomial(
    rng: Any = None,
    *,
    max_degree: int = 2,
    max_terms: int = 3,
    coeff_range: int = 3,
    nvars: int = NVARS,
) -> Polynomial:
    """Sparse polynomial with small nonzero integer coefficients in the first *nvars* variables."""
    rng = make_rng(rng)
    n_terms = int(rng.integers(1, max_terms + 1))
    terms: dict[tuple[int, ...], int] = {}
    for _ in range(n_terms):
        degree = int(rng.integers(0, max_degree + 1))
        mono = [0] * NVARS
        for var in rng.integers(0, nvars, size=degree):
            mono[int(var)] += 1
        coeff = int(rng.integers(1, coeff_range + 1)) * int(rng.choice((-1, 1)))
        terms[tuple(mono)] = terms.get(tuple(mono), 0) + coeff
    return Polynomial(terms)


def random_multivector(
    rng: Any = None,
    grade: int = 2,
    *,
    max_terms: int = 2,
    max_degree: int = 2,
) -> MultiVector:
    rng = make_rng(rng)
    if grade == 0:
        return MultiVector.scalar(random_polynomial(rng, max_degree=max_degree))
    keys = list(itertools.combinations(range(1, DIM + 1), grade))
    n_terms = min(int(rng.integers(1, max_terms + 1)), len(keys))
    picked = rng.choice(len(keys), size=n_terms, replace=False)
    return MultiVector(grade, {keys[int(i)]: random_polynomial(rng, max_degree=max_degree) for i in picked})


def random_grades(rng: Any = None, *, max_total: int = 5) -> tuple[int, int, int]:
    """Grades ``(p, q, r)`` with ``p, q >= 1`` and ``p + q + r <= max_total``."""
    rng = make_rng(rng)
    while True:
        p, q = (int(g) for g in rng.integers(1, 4, size=2))
        r = int(rng.integers(0, 4))
        if p + q + r <= max_total:
            return p, q, r


def random_triple(rng: Any = None, *, max_degree: int = 2) -> tuple[MultiVector, MultiVector, MultiVector]:
    rng = make_rng(rng)
    p, q, r = random_grades(rng)
    return (
        random_multivector(rng, p, max_degree=max_degree),
        random_multivector(rng, q, max_degree=max_degree),
        random_multivector(rng, r, max_degree=max_degree),
    )


def random_points(
    rng: Any = None,
    n: int = 1000,
    *,
    low: float = -1.0,
    high: float = 1.0,
    min_rho: float = 0.1,
    min_abs_x1: float = 0.05,
) -> np.ndarray:
    """``(n, 4)`` points away from the ``x3``-axis and from ``x1 = 0``."""
    rng = make_rng(rng)
    out = np.empty((0, 4))
    while out.shape[0] < n:
        batch = rng.uniform(low, high, size=(2 * n, 4))
        keep = (np.hypot(batch[:, 0], batch[:, 1]) >= min_rho) & (np.abs(batch[:, 0]) >= min_abs_x1)
        out = np.vstack([out, batch[keep]])
    return out[:n]
