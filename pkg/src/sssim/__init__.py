"""Gate-modulated superconductor/semiconductor/superconductor junction simulator."""

__version__ = "0.1.0"

from .constants import (  # noqa: E402
    CONSTANTS,
    NIOBIUM,
    BarrierParams,
    SuperconductorParams,
    builtin_material,
    critical_frequency,
    default_barrier,
)
from .errors import SSSimError  # noqa: E402
from .junction import JunctionDevice, WavefunctionState, critical_current  # noqa: E402

__all__ = [
    "CONSTANTS",
    "NIOBIUM",
    "BarrierParams",
    "JunctionDevice",
    "SSSimError",
    "SuperconductorParams",
    "WavefunctionState",
    "builtin_material",
    "critical_current",
    "critical_frequency",
    "default_barrier",
]
