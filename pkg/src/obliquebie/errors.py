"""Exception types raised by the solver.

Every error derives from :class:`ObliqueBIEError`; the CLI maps
:class:`ConfigError` to exit code 2 and the numerical/physical ones to 3.
"""


class ObliqueBIEError(Exception):
    pass


class DomainError(ObliqueBIEError, ValueError):
    """Special function evaluated outside its domain."""


class GeometryError(ObliqueBIEError, ValueError):
    """Invalid curve or inconsistent pair of boundary curves."""


class ParameterError(ObliqueBIEError, ValueError):
    """Physically infeasible or malformed scene parameters."""


class PlacementError(ObliqueBIEError, ValueError):
    """Source or target point too close to (or on) a boundary curve."""


class IrregularWavenumberError(ObliqueBIEError, ArithmeticError):
    """The collocation system is numerically singular."""


class ConfigError(ObliqueBIEError, ValueError):
    """Malformed run configuration."""


class InfeasibleAngleError(ParameterError):
    """Incidence angle with ``kappa1^2 <= 0`` (no propagating annulus wave)."""
