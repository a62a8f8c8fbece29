"""Closed-form steady state of the magnon pair without the cavity.

These expressions involve no linear solves and serve as an independent check
of the numerical Lyapunov pipeline.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .errors import MarginalStabilityError, ModelError
from .model import DerivedModel, SystemParams

__all__ = ["NoCavityCM", "analytic_cm", "analytic_steering"]


@dataclass(frozen=True)
class NoCavityCM:
    """Entries of the a-b covariance block; `n_a`, `n_b` include the vacuum 1/2."""

    n_a: float
    n_b: float
    c1: float
    c2: float
    de: float

    def matrix(self) -> NDArray[np.float64]:
        """The 4x4 CM [[n_a, 0, c1, c2], [0, n_a, c2, -c1], ...]."""
        na, nb, c1, c2 = self.n_a, self.n_b, self.c1, self.c2
        return np.array(
            [
                [na, 0.0, c1, c2],
                [0.0, na, c2, -c1],
                [c1, c2, nb, 0.0],
                [c2, -c1, 0.0, nb],
            ]
        )


def _check_decoupled(dm: DerivedModel) -> None:
    if dm.g_ac != 0.0 or dm.g_bc != 0.0:
        raise ModelError("closed forms only hold with the cavity decoupled")


def _denominator(dm: DerivedModel, p: SystemParams) -> float:
    ka, kb, g = p.kappa_a, p.kappa_b, dm.g_ab
    w = dm.omega_a + dm.omega_b
    return (ka * kb - g * g) * (ka + kb) ** 2 + ka * kb * w * w


def analytic_cm(dm: DerivedModel, p: SystemParams) -> NoCavityCM:
    """Steady-state a-b covariance entries for decoupled cavity."""
    _check_decoupled(dm)
    ka, kb, g = p.kappa_a, p.kappa_b, dm.g_ab
    de = _denominator(dm, p)
    if de == 0.0:
        raise MarginalStabilityError("De = 0: two-mode subsystem is marginally stable")
    return NoCavityCM(
        n_a=g * g * (ka + kb) * kb / de + 0.5,
        n_b=g * g * (ka + kb) * ka / de + 0.5,
        c1=-g * ka * kb * (dm.omega_a + dm.omega_b) / de,
        c2=-g * ka * kb * (ka + kb) / de,
        de=de,
    )


def analytic_steering(dm: DerivedModel, p: SystemParams) -> tuple[float, float]:
    """Closed-form (a->b, b->a) steering for decoupled cavity."""
    _check_decoupled(dm)
    ka, kb, g = p.kappa_a, p.kappa_b, dm.g_ab
    denom = _denominator(dm, p) + 2.0 * g * g * (ka * ka + kb * kb)
    if denom == 0.0:
        raise MarginalStabilityError("vanishing denominator in steering closed form")
    a_to_b = math.log(abs(1.0 + 2.0 * g * g * (kb - ka) * ka / denom))
    b_to_a = math.log(abs(1.0 + 2.0 * g * g * (ka - kb) * kb / denom))
    return max(0.0, a_to_b), max(0.0, b_to_a)
