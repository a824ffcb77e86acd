"""Exception types raised by the numerical routines.

Input-validation problems raise plain ``ValueError``; everything below
signals a numerical failure inside an otherwise valid computation.
"""

from __future__ import annotations


class NumericalError(RuntimeError):
    """Base class for numerical failures."""


class RootBracketingError(NumericalError):
    """A root scan ended without producing the expected roots."""


class CertificationError(NumericalError):
    """An eigenfunction failed its interior zero-count certificate."""


class SingularityError(NumericalError):
    """A Cole-Hopf denominator vanished (the potential has a zero)."""


class SchemeError(NumericalError):
    """The finite-difference scheme left its stability regime."""
