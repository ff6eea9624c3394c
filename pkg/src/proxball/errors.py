"""Exception hierarchy shared by every module."""


class ProxballError(Exception):
    """Base class for all errors raised by proxball."""


class EmptySet(ProxballError):
    pass


class InvalidPrimitive(ProxballError):
    pass


class DegenerateProjection(ProxballError):
    pass


class NotBoundary(ProxballError):
    pass


class NoValidNormal(ProxballError):
    pass


class NotInComplement(ProxballError):
    pass


class GammaOutOfRange(ProxballError):
    pass


class NormalOracleFailure(ProxballError):
    pass


class VerificationFailure(ProxballError):
    pass


class BadT(ProxballError):
    pass


class XNotInBall(ProxballError):
    pass


class OracleDisagreement(ProxballError):
    pass


class PreconditionViolated(ProxballError):
    pass


class Unbounded(ProxballError):
    """No finite supremum was found; ``largest_radius`` is the biggest radius probed."""

    def __init__(self, message, largest_radius):
        super().__init__(message)
        self.largest_radius = largest_radius


class GenerationExhausted(ProxballError):
    pass
