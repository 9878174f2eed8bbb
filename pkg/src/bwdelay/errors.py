"""Exception hierarchy shared by all simulator modules.

Every error raised by the library derives from BwDelayError so callers can
catch simulator failures without masking programming errors.
"""


class BwDelayError(Exception):
    """Base class for all simulator errors."""


class PhaseSpaceClosed(BwDelayError):
    """Positron momentum outside the kinematically open region (p+^- >= 2 omega_gamma)."""


class DegenerateShape(BwDelayError):
    """Pulse shape vanishes identically; a nonzero xi cannot be normalized against it."""


class CollinearSingularity(BwDelayError):
    """Lepton momentum collinear with the laser axis; Volkov coefficients diverge."""


class RegularizationSingular(BwDelayError):
    """|Q0| too small to regularize the constant matrix-element term."""


class QuadratureUnderResolved(BwDelayError):
    """Estimated oscillation count exceeds what the node budget can resolve."""


class GridUnconverged(BwDelayError):
    """Momentum-grid refinement moved a reported observable beyond tolerance."""


class ParseError(BwDelayError):
    """Malformed configuration input; message carries line and field diagnostics."""


class ValidationError(BwDelayError):
    """Structurally valid configuration violating a documented invariant."""
