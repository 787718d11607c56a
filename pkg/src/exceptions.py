from __future__ import annotations


class SQCQPError(Exception):
    """Base class for every error raised by the solver package."""


class DimensionMismatch(SQCQPError):
    pass


class BoxExcludesZero(SQCQPError):
    pass


class BadSparsityBound(SQCQPError):
    pass


class UnsupportedCase(SQCQPError):
    pass


class ZeroDenominator(SQCQPError):
    pass


class CapExceeded(SQCQPError):
    pass


class FactorizationFailure(SQCQPError):
    """Both the direct and the regularized reduced solve failed."""


class InvalidConfig(SQCQPError):
    pass


class InvalidStrategy(SQCQPError):
    pass


class OracleScaleExceeded(SQCQPError):
    pass


class BadDimensions(SQCQPError):
    """Generator preconditions on the requested instance shape do not hold."""


class ParseError(SQCQPError):
    pass


class ShapeMismatch(SQCQPError):
    pass


class MissingGroundTruth(SQCQPError):
    pass


__all__ = [
    "SQCQPError",
    "DimensionMismatch",
    "BoxExcludesZero",
    "BadSparsityBound",
    "UnsupportedCase",
    "ZeroDenominator",
    "CapExceeded",
    "FactorizationFailure",
    "InvalidConfig",
    "InvalidStrategy",
    "OracleScaleExceeded",
    "BadDimensions",
    "ParseError",
    "ShapeMismatch",
    "MissingGroundTruth",
]
