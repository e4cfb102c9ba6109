"""Exception types shared across the package."""


class CmcError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInput(CmcError):
    """An argument violates a documented precondition."""


class SignatureUnavailable(CmcError):
    """The ambient metric cannot supply a vector of the requested sign."""


class DegenerateComplement(CmcError):
    """Orthogonal complement construction ran out of usable directions."""


class DomainError(CmcError):
    """A closed-form curve was requested outside its domain of definition."""


class DomainExit(CmcError):
    """The profile function left its domain (g reached zero) during integration."""


class NumericalFailure(CmcError):
    """A conserved quantity drifted past the configured tolerance."""


class DegenerateSample(CmcError):
    """A finite-difference tangent basis was too degenerate to use."""
