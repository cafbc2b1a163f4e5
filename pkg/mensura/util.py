#!/usr/bin/env python

import logging
import math
import sys

import colorama

if "win32" in sys.platform:
    colorama.init()

log = logging.getLogger(__name__)


class MensuraError(Exception):
    """Base class for every error the library raises on purpose.

    `exit_code` is what the command line exits with when the error
    reaches it."""

    exit_code = 1


class UsageError(MensuraError):
    exit_code = 2


class UnitParseError(UsageError):
    """A unit or dimension expression could not be parsed.

    `offset` is the byte offset into the UTF-8 encoded input."""

    def __init__(self, message, text, offset):
        self.text = text
        self.offset = offset
        super().__init__(f"{message} at byte {offset} in {text!r}")


class EmptyUnitExpressionError(UnitParseError):
    pass


class UnknownUnitError(UnitParseError):
    pass


class MalformedExponentError(UnitParseError):
    pass


class DataError(MensuraError):
    exit_code = 3


class DimensionError(DataError):
    pass


class EmptyDatasetError(DataError):
    pass


class MissingColumnsError(DataError):
    pass


class NonNumericCellError(DataError):
    def __init__(self, row, column, value):
        self.row = row
        self.column = column
        self.value = value
        super().__init__(f"row {row}: column '{column}' is not numeric: {value!r}")


class InvalidMeasurementError(DataError):
    pass


class NumericalError(MensuraError):
    exit_code = 4


class RankDeficientError(NumericalError):
    pass


class DegenerateInputError(NumericalError):
    pass


class OutOfRangeError(NumericalError):
    pass


def colorize(string, color, bold=False):
    """Returns the string colored with colorama.Fore.color. If the color set by
    the user is "NONE" or the color doesn't exist in the colorama.Fore attributes,
    it returns the string without any modification."""
    color_escape = getattr(colorama.Fore, color.upper(), None)
    if not color_escape:
        return string
    elif not bold:
        return color_escape + string + colorama.Fore.RESET
    else:
        return colorama.Style.BRIGHT + color_escape + string + colorama.Style.RESET_ALL


def error_line(message, color="red"):
    return "[{}: {}]".format(colorize("ERROR", color), message)


def warning_line(message, color="yellow"):
    return "[{}: {}]".format(colorize("WARNING", color), message)


def sig(value, digits=6):
    """Formats a number to a fixed count of significant digits."""
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, int):
        return str(value)
    if math.isnan(value) or math.isinf(value):
        return str(value)
    return f"{value:.{digits}g}"


def require_positive(**values):
    """Raises InvalidMeasurementError naming the first value that is not > 0."""
    for name, value in values.items():
        if not value > 0:
            raise InvalidMeasurementError(f"{name} must be positive, got {value!r}")
