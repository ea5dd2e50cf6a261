"""
Module for input validation. Contains functions to validate and parse command-line values:
complex numbers, scan grids, bounding boxes and ranks.
"""

import re
from typing import Tuple

_NUMBER = r'(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?'
_COMPLEX_RE = re.compile(rf'^[+-]?{_NUMBER}(?:[+-]{_NUMBER}i)?$')
_IMAGINARY_RE = re.compile(rf'^[+-]?{_NUMBER}i$')
_GRID_RE = re.compile(r'^(\d{1,5})x(\d{1,5})$')
_REAL_RE = re.compile(rf'^[+-]?{_NUMBER}$')


def validate_complex(text: str) -> Tuple[bool, str]:
    """Check that a string is a complex number written `re`, `re+imi`, `re-imi` or `imi`.

    Args:
        text (str): The value as typed, e.g. `1.5`, `0.2-0.3i`, `2i`.

    Returns:
        Tuple[bool, str]: True if the value is well formed, false and the reason otherwise.
    """
    text = text.strip()
    if _COMPLEX_RE.match(text) or _IMAGINARY_RE.match(text):
        return True, ""
    return False, f"'{text}' is not a complex number of the form re, re+imi or imi."


def parse_complex(text: str) -> complex:
    """Parse a validated complex number.

    Raises:
        ValueError: If `validate_complex` rejects the text.
    """
    ok, message = validate_complex(text)
    if not ok:
        raise ValueError(message)
    return complex(text.strip().replace('i', 'j'))


def validate_grid(text: str) -> Tuple[bool, str]:
    """Check that a grid is written NXxNY with both sides at least 1.

    Args:
        text (str): e.g. `41x41`.

    Returns:
        Tuple[bool, str]: True if the grid is valid, false and the reason otherwise.
    """
    match = _GRID_RE.match(text.strip())
    if not match:
        return False, f"Grid '{text}' must look like 41x41."
    if int(match.group(1)) < 1 or int(match.group(2)) < 1:
        return False, f"Grid '{text}' needs at least one point per side."
    return True, ""


def parse_grid(text: str) -> Tuple[int, int]:
    """Parse a validated grid into (nx, ny)."""
    ok, message = validate_grid(text)
    if not ok:
        raise ValueError(message)
    match = _GRID_RE.match(text.strip())
    return int(match.group(1)), int(match.group(2))


def validate_bbox(text: str) -> Tuple[bool, str]:
    """Check that a bounding box is written x0,x1,y0,y1 with x0 <= x1 and y0 <= y1.

    Returns:
        Tuple[bool, str]: True if the box is valid, false and the reason otherwise.
    """
    parts = [p.strip() for p in text.split(',')]
    if len(parts) != 4 or not all(_REAL_RE.match(p) for p in parts):
        return False, f"Bounding box '{text}' must be four numbers x0,x1,y0,y1."
    x0, x1, y0, y1 = (float(p) for p in parts)
    if x0 > x1 or y0 > y1:
        return False, f"Bounding box '{text}' needs x0 <= x1 and y0 <= y1."
    return True, ""


def parse_bbox(text: str) -> Tuple[float, float, float, float]:
    """Parse a validated bounding box."""
    ok, message = validate_bbox(text)
    if not ok:
        raise ValueError(message)
    x0, x1, y0, y1 = (float(p) for p in text.split(','))
    return x0, x1, y0, y1


def validate_rank(k: int, n: int) -> Tuple[bool, str]:
    """The rank must satisfy 1 <= k <= N.

    Args:
        k (int): the rank
        n (int): the matrix dimension
    Return:
        Tuple[bool, str]: True if the rank is valid, false and the reason why otherwise.
    """
    if k < 1 or k > n:
        return (False, f"Rank k={k} must satisfy 1 <= k <= {n}.")
    return True, ""
