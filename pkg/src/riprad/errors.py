"""Exception and warning types shared across the package."""


class InvalidParam(ValueError):
    """A parameter violates its documented domain."""


class BelowThreshold(Exception):
    """beta <= 1: no emission. Signals zero, not a crash; density callers map it to 0."""


class NoPartnerSolution(Exception):
    """The pair constraint has no positive-wavenumber solution in the requested direction."""


class DegenerateConstraint(Exception):
    """Both photons exactly on the cone: the constraint degenerates to 0 = 0."""


class NonConvergence(RuntimeWarning):
    """Refinement budget exhausted; a best-effort value is still returned."""


class PerturbativeValidity(UserWarning):
    """eta/n0 exceeds the linearization comfort zone (0.1); results may be inaccurate."""
