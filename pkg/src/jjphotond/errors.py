"""Exception types shared across the package."""

from __future__ import annotations


class ConfigError(ValueError):
    """Invalid, missing, or conflicting configuration input."""


class StiffnessError(RuntimeError):
    """Adaptive step size underflowed; the problem is too stiff for the
    explicit integrator.  Use the exact dense propagator instead."""


class IntegrationFailureError(RuntimeError):
    """A density-matrix invariant was violated beyond tolerance during
    time evolution."""


class BandwidthRangeError(RuntimeError):
    """No half-efficiency crossing found inside the scanned detuning range.

    Carries the scanned curve for diagnosis.
    """

    def __init__(self, message: str, deltas=None, etas=None):
        super().__init__(message)
        self.deltas = deltas
        self.etas = etas
