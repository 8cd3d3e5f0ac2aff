"""
Helper utility functions for the PFS throughput oracle
"""
from typing import Iterable, List, Union
import math
import re
from pathlib import Path

import numpy as np

Number = Union[int, float]


def db_to_linear(value_db: Union[Number, np.ndarray]) -> Union[float, np.ndarray]:
    """
    Convert a power ratio from dB to linear scale

    Args:
        value_db: Value in dB (scalar or array)

    Returns:
        Linear value, same shape as the input
    """
    result = np.power(10.0, np.asarray(value_db, dtype=float) / 10.0)
    return float(result) if np.ndim(value_db) == 0 else result


def linear_to_db(value: Union[Number, np.ndarray]) -> Union[float, np.ndarray]:
    """
    Convert a linear power ratio to dB (non-positive values map to -inf)

    Args:
        value: Linear value (scalar or array)

    Returns:
        Value in dB
    """
    arr = np.asarray(value, dtype=float)
    with np.errstate(divide='ignore'):
        result = np.where(arr > 0, 10.0 * np.log10(np.where(arr > 0, arr, 1.0)), -np.inf)
    return float(result) if np.ndim(value) == 0 else result


def chunk_sizes(total: int, chunk_size: int) -> List[int]:
    """
    Split a count into chunk lengths

    Args:
        total: Number of items
        chunk_size: Size of each chunk

    Returns:
        List of chunk lengths summing to total
    """
    if chunk_size < 1:
        raise ValueError("chunk_size must be positive")
    full, rest = divmod(total, chunk_size)
    return [chunk_size] * full + ([rest] if rest else [])


def format_rate(bits_per_second: Number) -> str:
    """
    Format a throughput in human readable units

    Args:
        bits_per_second: Rate in bit/s

    Returns:
        Formatted string (e.g., "1.25 Mbit/s")
    """
    if bits_per_second is None or not math.isfinite(bits_per_second):
        return "n/a"
    value = float(bits_per_second)
    for unit in ['bit/s', 'kbit/s', 'Mbit/s', 'Gbit/s']:
        if abs(value) < 1000.0:
            return f"{value:.2f} {unit}"
        value /= 1000.0
    return f"{value:.2f} Tbit/s"


def harmonic_number(n: int) -> float:
    """H_n = Σ_{k=1}^n 1/k, summed smallest-first"""
    return math.fsum(1.0 / k for k in range(n, 0, -1))


def parse_list_option(value: Union[str, Iterable[str], None]) -> List[str]:
    """
    Split a comma separated option into trimmed, lower-case items

    Args:
        value: "a, b,c" or an iterable of strings

    Returns:
        List of non-empty items in order, duplicates removed
    """
    if value is None:
        return []
    items = value.split(',') if isinstance(value, str) else list(value)
    seen = []
    for item in items:
        item = item.strip().lower()
        if item and item not in seen:
            seen.append(item)
    return seen


def sanitize_filename(filename: str) -> str:
    """
    Sanitize filename by removing invalid characters

    Args:
        filename: Original filename

    Returns:
        Sanitized filename
    """
    sanitized = re.sub(r'[<>:"/\\|?*]', '_', filename)
    sanitized = sanitized.strip('. ')
    if len(sanitized) > 255:
        sanitized = sanitized[:255]
    return sanitized


def ensure_extension(filename: str, extension: str) -> str:
    """
    Ensure filename has the specified extension

    Args:
        filename: Original filename
        extension: Desired extension (with or without dot)

    Returns:
        Filename with extension
    """
    if not extension.startswith('.'):
        extension = f'.{extension}'
    if not filename.endswith(extension):
        filename = f'{filename}{extension}'
    return filename


def create_directory(path: Path) -> Path:
    """Create directory if it doesn't exist"""
    path.mkdir(parents=True, exist_ok=True)
    return path
