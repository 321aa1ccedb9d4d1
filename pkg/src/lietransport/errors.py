"""Exception types shared across the package."""

import numpy as np


class ArgumentError(ValueError):
    """Invalid argument: wrong variance, bad shape, non-positive step, ..."""


class DegenerateMapError(ArithmeticError):
    """The deformation gradient is (numerically) singular or orientation-reversing."""

    def __init__(self, det, t=None, X=None):
        self.det = det
        self.t = t
        self.X = None if X is None else np.asarray(X, dtype=float)
        super().__init__(f"degenerate map: det F = {det!r} at t={t!r}, X={self.X!r}")


class EvaluationFailure(ArithmeticError):
    """A field or velocity returned a non-finite value."""

    def __init__(self, what, t, x):
        self.what = what
        self.t = t
        self.x = np.asarray(x, dtype=float)
        super().__init__(f"non-finite {what} at t={t!r}, x={self.x.tolist()!r}")


class ConfigError(ValueError):
    """Unresolvable run configuration."""
