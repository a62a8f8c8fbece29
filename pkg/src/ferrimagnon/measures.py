"""Quantities extracted from a steady-state covariance matrix.

Covariance matrices use the quadrature convention of :mod:`ferrimagnon.dynamics`
(vacuum = I/2). Mode labels are ``"a"``, ``"b"`` (magnons) and ``"c"`` (photon).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray

from . import linalg
from .errors import DegenerateSpectrumError, ShapeError, SingularTransformError, UnphysicalStateError
from .model import DerivedModel

__all__ = [
    "MODES",
    "BogoliubovFrame",
    "reduce",
    "symplectic_form",
    "symplectic_eigenvalues",
    "partial_transpose",
    "smallest_pt_symplectic_eigenvalue",
    "log_negativity",
    "steering",
    "steering_pair",
    "steering_from_populations",
    "number_moment",
    "anomalous_moment",
    "populations",
    "bogoliubov_frame",
    "bogoliubov_populations",
    "coherence_bc",
    "visibility_distinguishability",
    "eigenfrequencies",
    "tmsv_covariance",
]

MODES = {"a": 0, "b": 1, "c": 2}
DEGENERATE_POP = 1e-14
# steering below this is round-off of an exact zero
STEERING_FLOOR = 1e-12
FREQ_RESOLUTION = 1e-9


def _mode_index(mode: str | int) -> int:
    if isinstance(mode, str):
        try:
            return MODES[mode]
        except KeyError:
            raise ValueError(f"unknown mode {mode!r}; expected one of {sorted(MODES)}") from None
    return int(mode)


def reduce(v: ArrayLike, modes: Sequence[str | int]) -> NDArray[np.float64]:
    """4x4 covariance block [[V_x, V_xy], [V_xy^T, V_y]] of two modes, in the given order."""
    v = np.asarray(v, dtype=float)
    i, j = (_mode_index(m) for m in modes)
    if i == j:
        raise ValueError(f"modes must be distinct, got {modes!r}")
    idx = [2 * i, 2 * i + 1, 2 * j, 2 * j + 1]
    return v[np.ix_(idx, idx)]


def symplectic_form(n_modes: int) -> NDArray[np.float64]:
    """Block-diagonal symplectic form for `n_modes` modes in (X, Y) ordering."""
    return np.kron(np.eye(n_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def symplectic_eigenvalues(v: ArrayLike) -> NDArray[np.float64]:
    """Symplectic eigenvalues of a covariance matrix, ascending.

    Computed as the moduli of the eigenvalues of i*Omega*V, each of which
    appears twice; a physical state has all of them >= 1/2.
    """
    v = linalg.as_square(v)
    n = v.shape[0] // 2
    ev = np.abs(np.linalg.eigvals(1j * symplectic_form(n) @ v))
    return np.sort(ev)[::2]


def partial_transpose(v4: ArrayLike) -> NDArray[np.float64]:
    """Partial transpose of a two-mode CM (momentum of the second mode flipped)."""
    p = np.diag([1.0, 1.0, 1.0, -1.0])
    return p @ np.asarray(v4, dtype=float) @ p


def _exact_det(m: NDArray[np.float64]) -> Fraction:
    """Determinant of a small float matrix in exact rational arithmetic."""
    q = [[Fraction(float(x)) for x in row] for row in m]
    n = len(q)
    total = Fraction(0)
    for perm in itertools.permutations(range(n)):
        inversions = sum(perm[i] > perm[j] for i in range(n) for j in range(i + 1, n))
        term = Fraction(-1 if inversions % 2 else 1)
        for i, j in enumerate(perm):
            term *= q[i][j]
        total += term
    return total


def smallest_pt_symplectic_eigenvalue(v4: ArrayLike) -> float:
    r"""Smallest symplectic eigenvalue :math:`\eta^-` of the partially transposed CM.

    Uses the closed form with the seralian
    :math:`\Sigma = \det V_a + \det V_b - 2\det V_{ab}`. The determinants and
    the discriminant are evaluated exactly over the stored entries, so weakly
    and strongly squeezed states keep full relative precision.
    """
    v4 = np.asarray(v4, dtype=float)
    if v4.shape != (4, 4):
        raise ShapeError(f"expected a 4x4 two-mode CM, got {v4.shape}")
    if not np.all(np.isfinite(v4)):
        raise UnphysicalStateError("covariance matrix has non-finite entries")
    sigma = _exact_det(v4[:2, :2]) + _exact_det(v4[2:, 2:]) - 2 * _exact_det(v4[:2, 2:])
    det_v = _exact_det(v4)
    disc = sigma * sigma - 4 * det_v
    if disc < -1e-12 * max(1.0, float(sigma) ** 2):
        raise UnphysicalStateError(f"negative discriminant {float(disc):.3e} in symplectic spectrum")
    # eta-^2 * eta+^2 = det V; dividing avoids cancellation in sigma - sqrt(disc)
    outer = float(sigma) + math.sqrt(max(float(disc), 0.0))
    if outer <= 0.0 or det_v <= 0:
        return 0.0
    return math.sqrt(2.0 * float(det_v) / outer)


def log_negativity(v4: ArrayLike) -> float:
    """Logarithmic negativity max(0, -ln 2 eta^-) of a two-mode CM."""
    eta = smallest_pt_symplectic_eigenvalue(v4)
    if eta == 0.0:
        return math.inf
    return max(0.0, -math.log(2.0 * eta))


def steering(v4: ArrayLike, direction: str = "a->b") -> float:
    """Gaussian steerability between the two modes of a 4x4 CM.

    ``"a->b"`` means the first mode of `v4` steers the second; ``"b->a"``
    the reverse. The measure is the Renyi-2 entropy difference
    max(0, S(2 V_steerer) - S(2 V)), with S(s) = ln(det s) / 2. Values at or
    below ``STEERING_FLOOR`` are returned as exactly 0.
    """
    v4 = np.asarray(v4, dtype=float)
    if v4.shape != (4, 4):
        raise ShapeError(f"expected a 4x4 two-mode CM, got {v4.shape}")
    if direction == "a->b":
        block = v4[:2, :2]
    elif direction == "b->a":
        block = v4[2:, 2:]
    else:
        raise ValueError(f"direction must be 'a->b' or 'b->a', got {direction!r}")
    det_v = linalg.determinant(v4)
    det_block = linalg.determinant(block)
    if det_v <= 0.0 or det_block <= 0.0:
        raise UnphysicalStateError(f"non-positive determinant (det V'={det_v:.3e})")
    g = 0.5 * math.log(det_block / (4.0 * det_v))
    return g if g > STEERING_FLOOR else 0.0


def steering_pair(v4: ArrayLike) -> tuple[float, float]:
    """Both steering directions (first->second, second->first)."""
    return steering(v4, "a->b"), steering(v4, "b->a")


def steering_from_populations(n: float, det_v: float) -> float:
    """Steering for the phase-symmetric CM structure, max(0, ln(n^2 / (4 det V)) / 2).

    `n` is the diagonal entry of the steering party's block (population + 1/2).
    """
    if det_v <= 0.0:
        raise UnphysicalStateError(f"non-positive determinant {det_v:.3e}")
    g = 0.5 * math.log(n * n / (4.0 * det_v))
    return g if g > STEERING_FLOOR else 0.0


def number_moment(v: ArrayLike, i: str | int, j: str | int) -> complex:
    """<v_i^dag v_j> reconstructed from quadrature covariances."""
    v = np.asarray(v, dtype=float)
    i, j = _mode_index(i), _mode_index(j)
    xi, yi, xj, yj = 2 * i, 2 * i + 1, 2 * j, 2 * j + 1
    if i == j:
        return complex(0.5 * (v[xi, xi] + v[yi, yi] - 1.0))
    return complex(0.5 * (v[xi, xj] + v[yi, yj]), 0.5 * (v[xi, yj] - v[yi, xj]))


def anomalous_moment(v: ArrayLike, i: str | int, j: str | int) -> complex:
    """<v_i v_j> for two distinct modes, reconstructed from quadrature covariances."""
    v = np.asarray(v, dtype=float)
    i, j = _mode_index(i), _mode_index(j)
    if i == j:
        raise ValueError("anomalous_moment needs two distinct modes")
    xi, yi, xj, yj = 2 * i, 2 * i + 1, 2 * j, 2 * j + 1
    return complex(0.5 * (v[xi, xj] - v[yi, yj]), 0.5 * (v[xi, yj] + v[yi, xj]))


def populations(v: ArrayLike) -> tuple[float, float, float]:
    """Mean quanta (pop_a, pop_b, pop_c) of the three modes."""
    return tuple(number_moment(v, m, m).real for m in "abc")  # type: ignore[return-value]


@dataclass(frozen=True)
class BogoliubovFrame:
    """Two-mode squeezing frame that diagonalises the magnon pair.

    alpha = cosh(r) a + sinh(r) b^dag is the optical band and
    beta = sinh(r) a^dag + cosh(r) b the acoustic band.
    """

    r: float
    omega_alpha: float
    omega_beta: float
    g_alpha_c: float
    g_beta_c: float


def bogoliubov_frame(dm: DerivedModel) -> BogoliubovFrame:
    """Squeezing parameter, band frequencies and photon couplings of the Bogoliubov modes."""
    total = dm.omega_a + dm.omega_b
    x = 2.0 * dm.g_ab / total
    if not (-1.0 < x < 1.0):
        raise SingularTransformError(f"tanh(2r) = {x:.6g} is outside (-1, 1)")
    r = 0.5 * math.atanh(x)
    root = math.sqrt(total * total - 4.0 * dm.g_ab * dm.g_ab)
    ch, sh = math.cosh(r), math.sinh(r)
    return BogoliubovFrame(
        r=r,
        omega_alpha=0.5 * (dm.omega_a - dm.omega_b + root),
        omega_beta=0.5 * (-dm.omega_a + dm.omega_b + root),
        g_alpha_c=dm.g_ac * ch - dm.g_bc * sh,
        g_beta_c=-dm.g_ac * sh + dm.g_bc * ch,
    )


def bogoliubov_populations(v: ArrayLike, frame: BogoliubovFrame) -> tuple[float, float]:
    """Mean quanta (pop_alpha, pop_beta) of the Bogoliubov modes."""
    na, nb, _ = populations(v)
    ch, sh = math.cosh(frame.r), math.sinh(frame.r)
    # <ab> + <a^dag b^dag> = 2 Re<ab>
    pair = 2.0 * anomalous_moment(v, "a", "b").real
    pop_alpha = ch * ch * na + sh * sh * (nb + 1.0) + sh * ch * pair
    pop_beta = sh * sh * (na + 1.0) + ch * ch * nb + sh * ch * pair
    return pop_alpha, pop_beta


def coherence_bc(v: ArrayLike) -> float:
    """Degree of first-order coherence between magnon b and the photon.

    Defined as 0 when either population is below 1e-14.
    """
    _, nb, nc = populations(v)
    if nb < DEGENERATE_POP or nc < DEGENERATE_POP:
        return 0.0
    return abs(number_moment(v, "b", "c")) / math.sqrt(nb * nc)


def visibility_distinguishability(v: ArrayLike) -> tuple[float, float]:
    """Interference visibility and which-mode distinguishability of b and c.

    Both are 0 when the two modes are empty.
    """
    _, nb, nc = populations(v)
    total = nb + nc
    if total < DEGENERATE_POP:
        return 0.0, 0.0
    vis = 2.0 * abs(number_moment(v, "b", "c")) / total
    dis = abs(nb - nc) / total
    return vis, dis


def eigenfrequencies(m: ArrayLike, n_modes: int = 3) -> tuple[float, ...]:
    """Normal-mode frequencies of a stable drift matrix, descending.

    These are the distinct positive imaginary parts of the spectrum.

    Raises
    ------
    DegenerateSpectrumError
        When fewer than `n_modes` distinct positive frequencies are resolved.
    """
    ev = linalg.eigenvalues(m)
    pos = np.sort(ev.imag[ev.imag > FREQ_RESOLUTION])[::-1]
    if pos.size != n_modes or np.any(np.diff(-pos) <= FREQ_RESOLUTION):
        raise DegenerateSpectrumError(
            f"expected {n_modes} distinct positive frequencies, resolved {pos.tolist()}"
        )
    return tuple(float(w) for w in pos)


def tmsv_covariance(r: float) -> NDArray[np.float64]:
    """CM of the two-mode squeezed vacuum S(r)|0,0> with S(r) = exp[r(ab - a^dag b^dag)]."""
    c, s = math.cosh(2 * r) / 2.0, math.sinh(2 * r) / 2.0
    return np.array(
        [
            [c, 0.0, -s, 0.0],
            [0.0, c, 0.0, s],
            [-s, 0.0, c, 0.0],
            [0.0, s, 0.0, c],
        ]
    )


@dataclass
class MeasureSet:
    """Everything computed at one parameter point.

    CM-derived fields are ``None`` when the point is unstable.
    """

    stable: bool
    margin: float
    r: float
    g_alpha_c: float
    g_beta_c: float
    omega_alpha: float
    omega_beta: float
    e_n: float | None = None
    g_a_to_b: float | None = None
    g_b_to_a: float | None = None
    pop_a: float | None = None
    pop_b: float | None = None
    pop_c: float | None = None
    pop_alpha: float | None = None
    pop_beta: float | None = None
    omega_1: float | None = None
    omega_2: float | None = None
    omega_3: float | None = None
    gamma1_bc: float | None = None
    visibility: float | None = None
    distinguishability: float | None = None
    residual: float | None = None
    min_symplectic: float | None = None

    @property
    def eigenfreqs(self) -> tuple[float, float, float] | None:
        if self.omega_1 is None:
            return None
        return (self.omega_1, self.omega_2, self.omega_3)  # type: ignore[return-value]
