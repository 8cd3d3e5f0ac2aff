"""Utility functions"""

from .logger import get_logger
from .helpers import (
    db_to_linear,
    linear_to_db,
    chunk_sizes,
    format_rate,
    harmonic_number,
    parse_list_option,
    sanitize_filename,
    ensure_extension,
    create_directory
)

__all__ = [
    'get_logger',
    'db_to_linear',
    'linear_to_db',
    'chunk_sizes',
    'format_rate',
    'harmonic_number',
    'parse_list_option',
    'sanitize_filename',
    'ensure_extension',
    'create_directory'
]
