"""
Exceptions raised by linmap.

Everything derives from ValueError so callers that only care about
"bad input or guard exceeded" can catch that, and the CLI can map the
whole family to exit code 1.
"""


class LinmapError(ValueError):
    """Base class for every guard or validation failure in linmap."""
    pass


class NonPrime(LinmapError):
    """Characteristic passed to a field constructor is not prime."""
    pass


class NotPrimePower(LinmapError):
    """Field size q is not a prime power."""
    pass


class TooLarge(LinmapError):
    """A desk-scale guard was exceeded."""
    pass


class ZeroModulus(LinmapError):
    """Polynomial reduction requested modulo zero or a constant."""
    pass


class DimensionMismatch(LinmapError):
    """Matrix or vector shapes do not agree."""
    pass


class NotCoprime(LinmapError):
    """Multiplicative order requested for a non-unit."""
    pass


class NotCoprimeToX(LinmapError):
    """Polynomial order requested for f with f(0) = 0."""
    pass


class NonIntegralCount(LinmapError):
    """A cycle count came out fractional; an upstream invariant is broken."""
    pass


class NotAProduct(LinmapError):
    """Cycle multiset is not a product of (C_1 + a*C_k) factors."""
    pass


class NotNilpotent(LinmapError):
    """Matrix is not nilpotent."""
    pass


class NotIrreducible(LinmapError):
    """Polynomial order requested for a reducible polynomial."""
    pass
