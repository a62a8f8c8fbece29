"""Physical parameters of the cavity-ferrimagnet system and their mode model.

All frequencies, rates and couplings are measured in units of the
sublattice-B exchange frequency, which is fixed to 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from typing import Optional

from .errors import ModelError, SingularTransformError

__all__ = ["SystemParams", "DerivedModel", "spin_flop_field", "derive_model"]


@dataclass(frozen=True)
class SystemParams:
    """Raw knobs of the three-mode model.

    Attributes
    ----------
    spin_ratio : float
        Sublattice spin ratio S_B/S_A.
    field_ratio : float
        Static field in units of the spin-flop field, H/H_sp. May be negative.
    anis_a : float
        Anisotropy frequency of sublattice A.
    kappa_a, kappa_b, kappa_c : float
        Damping rates of magnon a, magnon b and the cavity photon.
    g_ac : float
        Magnon-a / photon coupling.
    omega_c_over_hsp : float
        Cavity frequency in units of the spin-flop field.
    cavity_enabled : bool
        When False both photon couplings are forced to zero.
    g_bc : float or None
        Explicit magnon-b / photon coupling. ``None`` (the default) ties it
        to ``g_ac * sqrt(spin_ratio)``; a number decouples the two, which the
        coherence sweeps need (g_bc held fixed while g_ac varies).
    """

    spin_ratio: float = 1.0
    field_ratio: float = 0.0
    anis_a: float = 0.0163
    kappa_a: float = 0.001
    kappa_b: float = 0.001
    kappa_c: float = 0.003
    g_ac: float = 0.01
    omega_c_over_hsp: float = 0.85
    cavity_enabled: bool = True
    g_bc: Optional[float] = None

    def __post_init__(self) -> None:
        for f in fields(self):
            val = getattr(self, f.name)
            if f.name == "cavity_enabled" or val is None:
                continue
            if not math.isfinite(val):
                raise ModelError(f"{f.name} must be finite, got {val!r}")
        if self.spin_ratio <= 0:
            raise ModelError(f"spin_ratio must be positive, got {self.spin_ratio}")
        for name in ("kappa_a", "kappa_b", "kappa_c"):
            if getattr(self, name) <= 0:
                raise ModelError(f"{name} must be positive, got {getattr(self, name)}")
        if self.g_ac < 0 or (self.g_bc is not None and self.g_bc < 0):
            raise ModelError("photon couplings must be non-negative")
        if self.omega_c_over_hsp <= 0:
            raise ModelError("omega_c_over_hsp must be positive")

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass(frozen=True)
class DerivedModel:
    """Concrete frequencies and couplings entering the bosonic Hamiltonian."""

    omega_a: float
    omega_b: float
    omega_c: float
    g_ab: float
    g_ac: float
    g_bc: float
    h_sp: float


def spin_flop_field(p: SystemParams) -> float:
    """Spin-flop field sqrt(w_an (w_an + 2)) of the equal-spin magnet.

    Always evaluated with the sublattice-A anisotropy, whatever the spin
    ratio, so field sweeps for different magnets share one axis.
    """
    w = p.anis_a
    if w < 0:
        raise ModelError(f"anisotropy must be non-negative, got {w}")
    return math.sqrt(w * (w + 2.0))


def derive_model(p: SystemParams) -> DerivedModel:
    """Map `p` onto mode frequencies and couplings.

    With s the spin ratio: the exchange parts are s (mode a) and 1 (mode b),
    the anisotropy of b scales as s * anis_a, and the Zeeman shift
    h = field_ratio * H_sp enters with opposite signs on the two sublattices.

    Raises
    ------
    ModelError
        If either magnon frequency is non-positive.
    SingularTransformError
        If omega_a + omega_b <= 2 g_ab, where no Bogoliubov transform exists.
    """
    s = p.spin_ratio
    h_sp = spin_flop_field(p)
    h = p.field_ratio * h_sp
    omega_a = s + p.anis_a + h
    omega_b = 1.0 + s * p.anis_a - h
    omega_c = p.omega_c_over_hsp * h_sp
    g_ab = math.sqrt(s)
    if p.cavity_enabled:
        g_ac = p.g_ac
        g_bc = p.g_ac * math.sqrt(s) if p.g_bc is None else p.g_bc
    else:
        g_ac = g_bc = 0.0
    if omega_a <= 0 or omega_b <= 0:
        raise ModelError(
            f"non-positive magnon frequency (omega_a={omega_a:.6g}, omega_b={omega_b:.6g})"
        )
    if omega_a + omega_b <= 2.0 * g_ab:
        raise SingularTransformError(
            f"omega_a + omega_b = {omega_a + omega_b:.6g} <= 2 g_ab = {2 * g_ab:.6g}"
        )
    return DerivedModel(omega_a, omega_b, omega_c, g_ab, g_ac, g_bc, h_sp)
