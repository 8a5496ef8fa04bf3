"""Exception hierarchy.

Every error carries an ``exit_code`` so the command line can map failures onto
its documented statuses without inspecting messages.
"""

from __future__ import annotations


class FinEntropyError(Exception):
    exit_code = 1


class InputError(FinEntropyError):
    """Bad input data, configuration, or arguments."""

    exit_code = 1


class NumericalError(FinEntropyError):
    """Data that is well-formed but numerically degenerate."""

    exit_code = 2


class DataIOError(FinEntropyError):
    exit_code = 3


# --- indicator model / loading -------------------------------------------

class DuplicateIndicator(InputError):
    pass


class InvalidIndicatorSpec(InputError):
    pass


class DuplicateTicker(InputError):
    pass


class UnknownIndicatorColumn(InputError):
    def __init__(self, column: str):
        super().__init__(f"unknown indicator column {column!r} (not in registry)")
        self.column = column


class ParseError(InputError):
    pass


class ShapeMismatch(InputError):
    pass


class MissingValueRejected(InputError):
    def __init__(self, row: int, col: int, ticker: str, indicator_id: str):
        super().__init__(
            f"missing value at cell (row={row}, col={col}) "
            f"ticker={ticker!r} indicator={indicator_id!r}"
        )
        self.row = row
        self.col = col


class NonFiniteValue(InputError):
    pass


class EmptyDataset(InputError):
    pass


class AllColumnsDegenerate(EmptyDataset):
    """Every indicator column is constant, so nothing is left to score."""

    exit_code = NumericalError.exit_code


class AllMissingColumn(InputError):
    pass


# --- numerical stages ----------------------------------------------------

class DegenerateColumn(NumericalError):
    pass


class BandwidthNonPositive(InputError):
    pass


class InvalidCdf(InputError):
    pass


class ProbabilitiesNotNormalized(InputError):
    pass


class NegativeProbability(InputError):
    pass


class ZeroColumnSum(NumericalError):
    pass


class ZeroEntropySum(NumericalError):
    pass


class RuleMethodMismatch(InputError):
    pass


class ColumnMismatch(InputError):
    pass


class EmptyScores(InputError):
    pass


class EmptyInput(InputError):
    pass


class ZeroVarianceColumn(NumericalError):
    def __init__(self, indicator_id: str):
        super().__init__(f"column {indicator_id!r} has zero variance")
        self.indicator_id = indicator_id


class LengthMismatch(InputError):
    pass
