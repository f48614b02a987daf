"""Shared helpers for the test suite."""

from __future__ import annotations

import random

from dtmseries import Series


def relgap(got: Series, want: Series) -> float:
    """Worst per-coefficient difference, relative to max(|want_k|, 1)."""
    assert got.order == want.order
    return max(
        abs(x - y) / max(abs(y), 1.0) for x, y in zip(got.coeffs, want.coeffs)
    )


def oracle_series(rng: random.Random, order: int = 32) -> Series:
    """Leading coefficient in [0.5, 2], remaining coefficients in [-1, 1]."""
    return Series(
        [rng.uniform(0.5, 2.0)] + [rng.uniform(-1.0, 1.0) for _ in range(order)]
    )


def oracle_series_valuation(rng: random.Random, order: int = 32) -> Series:
    """Same population with a0 = a1 = 0 forced; the pivot coefficient keeps
    the [0.5, 2] band so the 1/(k*Y(0)) prefactor stays conditioned."""
    return Series(
        [0.0, 0.0, rng.uniform(0.5, 2.0)]
        + [rng.uniform(-1.0, 1.0) for _ in range(order - 2)]
    )
