"""Quadrature Langevin system: drift, diffusion, stability and steady state.

Quadratures are ordered (X_a, Y_a, X_b, Y_b, X_c, Y_c) with
X = (v + v^dag)/sqrt(2) and Y = (v - v^dag)/(sqrt(2) i). Baths are at zero
temperature.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np
from numpy.typing import NDArray

from . import linalg
from .errors import InstabilityError, MarginalStabilityError
from .model import DerivedModel, SystemParams

__all__ = [
    "MARGINAL_TOL",
    "Stability",
    "build_drift",
    "build_diffusion",
    "is_stable",
    "steady_state",
    "lyapunov_residual",
]

MARGINAL_TOL = 1e-8


class Stability(NamedTuple):
    stable: bool
    margin: float


def build_drift(dm: DerivedModel, p: SystemParams) -> NDArray[np.float64]:
    """6x6 drift matrix of the linear quadrature equations.

    Magnon a couples to b and to the photon through two-mode squeezing,
    magnon b couples to the photon through a beam splitter.
    """
    ka, kb, kc = p.kappa_a, p.kappa_b, p.kappa_c
    wa, wb, wc = dm.omega_a, dm.omega_b, dm.omega_c
    gab, gac, gbc = dm.g_ab, dm.g_ac, dm.g_bc
    return np.array(
        [
            [-ka, wa, 0.0, -gab, 0.0, -gac],
            [-wa, -ka, -gab, 0.0, -gac, 0.0],
            [0.0, -gab, -kb, wb, 0.0, gbc],
            [-gab, 0.0, -wb, -kb, -gbc, 0.0],
            [0.0, -gac, 0.0, gbc, -kc, wc],
            [-gac, 0.0, -gbc, 0.0, -wc, -kc],
        ]
    )


def build_diffusion(p: SystemParams) -> NDArray[np.float64]:
    """Zero-temperature diffusion matrix diag(ka, ka, kb, kb, kc, kc)."""
    return np.diag([p.kappa_a, p.kappa_a, p.kappa_b, p.kappa_b, p.kappa_c, p.kappa_c])


def is_stable(m: NDArray[np.float64]) -> Stability:
    """Stability of the drift matrix and its margin (minus the largest real part)."""
    margin = -float(np.max(linalg.eigenvalues(m).real))
    return Stability(margin > 0.0, margin)


def steady_state(m: NDArray[np.float64], d: NDArray[np.float64]) -> NDArray[np.float64]:
    """Steady-state covariance matrix, refusing unstable or marginal drift.

    Raises
    ------
    InstabilityError
        If some eigenvalue of `m` has a non-negative real part.
    MarginalStabilityError
        If the stability margin is below ``MARGINAL_TOL``.
    """
    stab = is_stable(m)
    if not stab.stable:
        raise InstabilityError(f"drift matrix is unstable (margin {stab.margin:.3e})")
    if stab.margin < MARGINAL_TOL:
        raise MarginalStabilityError(f"stability margin {stab.margin:.3e} below {MARGINAL_TOL}")
    return linalg.solve_lyapunov(m, d)


def lyapunov_residual(m: NDArray[np.float64], v: NDArray[np.float64], d: NDArray[np.float64]) -> float:
    """Max-norm residual of M V + V M^T + D relative to max |D|."""
    r = m @ v + v @ m.T + d
    return float(np.max(np.abs(r)) / np.max(np.abs(d)))
