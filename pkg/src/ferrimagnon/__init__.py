"""Steady-state entanglement and EPR steering of magnons in a cavity-coupled ferrimagnet."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ConfigError,
    DegenerateSpectrumError,
    FerrimagnonError,
    InstabilityError,
    MarginalStabilityError,
    ModelError,
    SingularTransformError,
    UnphysicalStateError,
)
from .measures import MeasureSet  # noqa: E402
from .model import DerivedModel, SystemParams, derive_model, spin_flop_field  # noqa: E402
from .sweep import SweepResult, SweepSpec, evaluate_point, preset_spec, run_sweep  # noqa: E402
