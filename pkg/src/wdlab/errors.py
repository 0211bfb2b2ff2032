"""Exception types shared across the library."""


class WdlabError(Exception):
    """Base class for all library errors."""


class IncompatibleMean(WdlabError):
    """Momentum handed to the -d2/dx2 inversion has a nonzero mean."""


class OutOfRange(WdlabError):
    """Rescaled time lies outside the image of the time map."""


class Breakdown(WdlabError):
    """The closed-form Hunter-Saxton denominator has (nearly) vanished."""

    def __init__(self, t, dmin):
        super().__init__(f"flow denominator min {dmin:.3e} at t={t:g}")
        self.t = t
        self.dmin = dmin


class NonMonotoneFlow(WdlabError):
    """Flow map samples are not strictly increasing over one period."""


class ConfigError(WdlabError):
    """Invalid integrator or run configuration."""


class ParseError(ConfigError):
    """A configuration line could not be parsed."""


class UnknownKey(ConfigError):
    """A configuration key is not recognized."""


class ValidationError(ConfigError):
    """A configuration value is out of its allowed range."""


class NoBlowUpObserved(WdlabError):
    """Neither run crossed the slope threshold before the time horizon."""
