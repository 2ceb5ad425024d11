"""Exception types shared across the package."""


class WgqedError(Exception):
    """Base class for package-specific failures."""


class DispersionPole(WgqedError, ValueError):
    """Infinite-chain dispersion evaluated at a resonant wavevector k = ±k1D."""


class FlatSpectrumError(WgqedError, ValueError):
    """Fourier spectrum of a mode has no unambiguous dominant wavevector."""


class AmbiguousLabelError(WgqedError, ValueError):
    """Momentum label assignment could not be resolved to a single peak."""


class NumericalFailure(WgqedError, RuntimeError):
    """An eigensolver or integrator failed to reach the requested accuracy."""
