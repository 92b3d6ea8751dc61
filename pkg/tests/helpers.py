"""Shared random generators for the test suite."""

from __future__ import annotations

import numpy as np

from barut_kit import noether as nt
from barut_kit.barut import LagrangianParams


def random_lagrangian(rng, mass: float) -> LagrangianParams:
    a1, a2, a3 = (complex(*rng.normal(size=2)) for _ in range(3))
    return nt.on_shell(LagrangianParams(a1, 0.3 * a2, a3, 0.0), mass)


def random_modeset(rng, max_modes: int = 3, max_n: int = 2):
    """On-shell mode set with 1..max_modes modes and a matching random Lagrangian."""
    m = float(rng.uniform(0.5, 2.0))
    L = float(rng.uniform(4.0, 12.0)) / m
    modes = []
    for _ in range(int(rng.integers(1, max_modes + 1))):
        n = tuple(int(x) for x in rng.integers(-max_n, max_n + 1, 3))
        h = float(rng.choice([0.5, -0.5]))
        a, b = complex(*rng.normal(size=2)), complex(*rng.normal(size=2))
        modes.append(nt.Mode(n, h, a, b))
    return random_lagrangian(rng, m), nt.ModeSet(L, m, tuple(modes))
