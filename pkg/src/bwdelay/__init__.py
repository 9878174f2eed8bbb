"""Pair creation by a gamma quantum in two consecutive short laser pulses.

The library computes differential, spectral and total electron-positron
pair-creation probabilities for a head-on collision of a gamma quantum with
one or two linearly polarized laser pulses, including the delay-dependent
interference between the two creation pathways.
"""

from .errors import (
    BwDelayError,
    CollinearSingularity,
    DegenerateShape,
    GridUnconverged,
    ParseError,
    PhaseSpaceClosed,
    QuadratureUnderResolved,
    RegularizationSingular,
    ValidationError,
)
from .kinematics import (
    GammaProbe,
    LightConeMomentum,
    PairKinematics,
    lightcone_decompose,
    onshell_from_spherical,
    solve_partner,
)

__version__ = "0.1.0"

__all__ = [
    "BwDelayError",
    "CollinearSingularity",
    "DegenerateShape",
    "GammaProbe",
    "GridUnconverged",
    "LightConeMomentum",
    "PairKinematics",
    "ParseError",
    "PhaseSpaceClosed",
    "QuadratureUnderResolved",
    "RegularizationSingular",
    "ValidationError",
    "__version__",
    "lightcone_decompose",
    "onshell_from_spherical",
    "solve_partner",
]
