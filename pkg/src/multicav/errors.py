"""Exception types raised by the multicav computations."""


class MulticavError(Exception):
    """Base class for all multicav errors."""


class InvalidInputError(MulticavError, ValueError):
    """An argument is outside the domain of the operation."""


class DegenerateResonanceError(MulticavError):
    """The denominator has non-positive curvature at the candidate minimum."""


class OverlappingResonanceError(MulticavError):
    """Half-maximum points cannot be bracketed before a neighboring resonance."""


class BranchJumpError(MulticavError):
    """Displacing an element made the tracked resonance jump to another branch."""


class OutsideValidityError(MulticavError):
    """A closed-form expression was evaluated outside its domain of validity."""


class DesignVerificationError(MulticavError):
    """A constructed stack failed its a-posteriori resonance check."""
