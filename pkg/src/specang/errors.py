"""Shared exception types."""


class ValidationError(ValueError):
    """An input violates a documented invariant."""


class NumericalBreakdownError(RuntimeError):
    """A computation left its domain of validity."""


class DegenerateSpectrumError(NumericalBreakdownError):
    """Spectrum too close to degenerate for the angular coordinates."""


class CrossoverDegeneracyError(NumericalBreakdownError):
    """Some eigenvalue sits at the uniform value 1/n, so the crossover
    index (and with it the piecewise-linear purity) is ill-defined."""
