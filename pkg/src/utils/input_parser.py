"""
Parsing of command-line parameter values.

Integers are plain decimals, ranges are ``l..m`` inclusive, and element
sets are comma-separated integers (``4,6``; an empty string is the empty set).
"""

from typing import List
import logging
import re

from ..models import ElementSet

logger = logging.getLogger(__name__)

_RANGE = re.compile(r"^\s*(\d+)\s*\.\.\s*(\d+)\s*$")
_INTEGER = re.compile(r"^\s*\d+\s*$")


class InputParseError(ValueError):
    """A command-line value could not be parsed"""
    def __init__(self, message: str, value: str = None):
        self.message = message
        self.value = value
        super().__init__(self.message)


def parse_integer(value: str) -> int:
    """Parse a nonnegative decimal integer"""
    if not _INTEGER.match(value):
        raise InputParseError(f"expected a nonnegative integer, got {value!r}", value=value)
    return int(value)


def parse_int_range(value: str) -> List[int]:
    """
    Parse ``a..b`` (inclusive) or a single integer into the list of values.

    Raises:
        InputParseError: on malformed text or an empty range
    """
    match = _RANGE.match(value)
    if match is None:
        return [parse_integer(value)]
    low, high = int(match.group(1)), int(match.group(2))
    if low > high:
        raise InputParseError(f"empty range {value!r}: {low} > {high}", value=value)
    return list(range(low, high + 1))


def parse_element_set(value: str) -> ElementSet:
    """Parse comma-separated positive integers into an ElementSet"""
    tokens = [token.strip() for token in value.split(",") if token.strip()]
    numbers = [parse_integer(token) for token in tokens]
    if any(number < 1 for number in numbers):
        raise InputParseError(f"set elements must be positive, got {value!r}", value=value)
    if len(set(numbers)) != len(numbers):
        raise InputParseError(f"duplicate elements in {value!r}", value=value)
    logger.debug(f"Parsed element set {sorted(numbers)} from {value!r}")
    return ElementSet.of(numbers)
