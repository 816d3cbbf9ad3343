"""Exception hierarchy shared by every module of the package."""


class RadReactError(Exception):
    """Base class for all errors raised by :mod:`radreact`."""


class NumericsError(RadReactError):
    """A numerical kernel failed to reach its requested accuracy."""


class IntegrationError(NumericsError):
    """ODE integration failed; ``t_fail`` is the last time reached."""

    def __init__(self, message, t_fail):
        super().__init__(f"{message} (failure at t={t_fail!r})")
        self.t_fail = t_fail


class QuadratureError(NumericsError):
    """Adaptive quadrature did not converge.

    The best available estimate and its error bound are kept so callers can
    decide whether the value is still usable.
    """

    def __init__(self, message, estimate, error_bound):
        super().__init__(f"{message} (estimate={estimate!r}, error bound={error_bound!r})")
        self.estimate = estimate
        self.error_bound = error_bound


class ResolutionError(NumericsError):
    """A sampled signal is too coarse for the requested wavenumber."""


class SupportError(RadReactError):
    """A signal or window does not have the required compact support."""


class RegimeError(RadReactError):
    """Physical regime violated (turning point, kinetic dominance, ...)."""


class DomainError(RadReactError):
    """Query outside the domain where a quantity is defined."""


class SpanError(RadReactError):
    """Requested span would overflow an exponentially growing solution."""


class PreconditionError(RadReactError):
    """A documented precondition of an operation does not hold."""


class GridError(RadReactError):
    """A wavenumber or time grid has the wrong structure."""


class InfraredError(RadReactError):
    """Infrared-divergent quantity requested without a cutoff."""


class ConfigError(RadReactError):
    """Scenario configuration could not be parsed or validated."""
