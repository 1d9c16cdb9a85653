"""Parsing helpers for grid and list arguments."""

import math
import re

import numpy as np

_PI_TERM = re.compile(
    r"^(?P<sign>[-+]?)(?P<coef>\d+(?:\.\d*)?|\.\d+)?\s*\*?\s*pi(?:\s*/\s*(?P<den>\d+(?:\.\d*)?))?$"
)


def parse_number(text: str) -> float:
    """Parse a float, allowing multiples of pi.

    Examples:
        >>> parse_number("0.25")
        0.25
        >>> parse_number("pi/2") == math.pi / 2
        True
        >>> parse_number("-2pi") == -2 * math.pi
        True
    """
    text = text.strip().lower()
    match = _PI_TERM.match(text)
    if match:
        coef = float(match.group("coef")) if match.group("coef") else 1.0
        den = float(match.group("den")) if match.group("den") else 1.0
        if den == 0.0:
            raise ValueError(f"Division by zero in '{text}'")
        value = coef * math.pi / den
        return -value if match.group("sign") == "-" else value
    try:
        return float(text)
    except ValueError:
        raise ValueError(f"Not a number: '{text}'") from None


def parse_grid(spec: str) -> list[float]:
    """Parse an inclusive ``start:stop:count`` grid.

    A bare number is a one-point grid. Both endpoints are always included.

    Examples:
        >>> parse_grid("-1:1:5")
        [-1.0, -0.5, 0.0, 0.5, 1.0]
        >>> parse_grid("0.3")
        [0.3]
    """
    parts = spec.split(":")
    if len(parts) == 1:
        return [parse_number(parts[0])]
    if len(parts) != 3:
        raise ValueError(f"Grid must be start:stop:count, got '{spec}'")

    start = parse_number(parts[0])
    stop = parse_number(parts[1])
    try:
        count = int(parts[2])
    except ValueError:
        raise ValueError(f"Grid count must be an integer, got '{parts[2]}'") from None
    if count < 1:
        raise ValueError(f"Grid count must be >= 1, got {count}")
    if count == 1:
        if start != stop:
            raise ValueError(f"One-point grid needs start == stop, got '{spec}'")
        return [start]

    return [float(v) for v in np.linspace(start, stop, count)]


def parse_probabilities(spec: str) -> list[float]:
    """Parse a comma-separated probability list like ``0.9,0.05,0.05``."""
    items = [item for item in spec.split(",") if item.strip()]
    if not items:
        raise ValueError("Empty probability list")
    try:
        return [float(item) for item in items]
    except ValueError:
        raise ValueError(f"Probabilities must be numbers, got '{spec}'") from None
