"""Report export utilities"""

from .file_exporter import FileExporter, format_cell, render_table, UNDEFINED, ERROR_PREFIX

__all__ = [
    'FileExporter',
    'format_cell',
    'render_table',
    'UNDEFINED',
    'ERROR_PREFIX'
]
