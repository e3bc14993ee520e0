"""Exception hierarchy shared by every opcalc module."""

from __future__ import annotations


class OpcalcError(Exception):
    """Base class; every error the engine raises on purpose derives from it."""


class AmbientMismatch(OpcalcError):
    pass


class GradeUnderflow(OpcalcError):
    pass


class GradeMismatch(OpcalcError):
    pass


class NotRightInverse(OpcalcError):
    pass


class NotInitial(OpcalcError):
    pass


class NotCorresponding(OpcalcError):
    pass


class ZeroWitness(OpcalcError):
    pass


class ModelError(OpcalcError):
    """Bad model parameters or an operation applied to the wrong model."""


class BadTruncation(ModelError):
    pass


class BadDeformation(ModelError):
    pass


class WrongModel(ModelError):
    pass


class NotPolynomialAtGrade(OpcalcError):
    pass


class NotConstant(OpcalcError):
    pass


class NotBasisOfConstants(OpcalcError):
    pass


class WordBudgetExceeded(OpcalcError):
    pass


class SeparatingFamily(OpcalcError):
    pass


class MissingRightInverses(OpcalcError):
    pass


class NotMember(OpcalcError):
    pass


class NotSubset(OpcalcError):
    pass


class NoRegularMember(OpcalcError):
    pass
