"""
Report export: CSV, JSON and rich terminal tables

CSV files use a header row, comma separators, '.' decimals, LF line
endings and 17 significant digits so values re-parse exactly. Undefined
values are written as 'undefined' and failed cells as 'ERROR:<name>'.
Every file is written to a temporary sibling and renamed into place.
"""
import json
import math
import os
import tempfile
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Union

import numpy as np
import pandas as pd
from rich.console import Console
from rich.table import Table

from config.settings import EXPORT_DIR, export_config
from src.utils.helpers import create_directory
from src.utils.logger import get_logger

logger = get_logger(__name__)

UNDEFINED = 'undefined'
ERROR_PREFIX = 'ERROR:'

CellErrors = Dict[Tuple[str, str], str]


def format_cell(value: Any, float_format: str = export_config.FLOAT_FORMAT) -> str:
    """Text form of one report cell"""
    if value is None:
        return UNDEFINED
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        if math.isnan(value):
            return UNDEFINED
        return format(float(value), float_format)
    return str(value)


def _mark_errors(frame: pd.DataFrame, errors: Optional[CellErrors], key: str,
                 column_for: Any) -> pd.DataFrame:
    """Replace failed (row key, model) cells with ERROR:<name> markers"""
    if not errors:
        return frame
    marked = frame.astype(object)
    for (row_key, model), name in errors.items():
        column = column_for(model)
        if column in marked.columns:
            marked.loc[marked[key] == row_key, column] = f"{ERROR_PREFIX}{name}"
    return marked


class FileExporter:
    """Write report frames to disk"""

    def __init__(self, export_dir: Optional[Path] = None):
        """
        Initialize exporter

        Args:
            export_dir: Directory for relative output names (default EXPORT_DIR)
        """
        self.export_dir = Path(export_dir or EXPORT_DIR)

    def _resolve(self, filename: Union[str, Path]) -> Path:
        path = Path(filename)
        if not path.is_absolute() and path.parent == Path('.'):
            path = self.export_dir / path
        create_directory(path.parent)
        return path

    @staticmethod
    def _write_atomic(path: Path, text: str):
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f'.{path.name}.', suffix='.tmp')
        try:
            with os.fdopen(fd, 'w', encoding='utf-8', newline='\n') as f:
                f.write(text)
            os.replace(tmp, path)
        except Exception:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    def to_csv_text(self, frame: pd.DataFrame, errors: Optional[CellErrors] = None,
                    key: str = 'terminal', column_for: Any = None) -> str:
        """
        Render a frame as CSV text

        Args:
            frame: Report frame
            errors: {(row key, model): exception name} cells to mark
            key: Column identifying rows in errors
            column_for: Maps a model name to its column (default identity)
        """
        marked = _mark_errors(frame, errors, key, column_for or (lambda m: m))
        cells = marked.map(format_cell)
        return cells.to_csv(index=False, lineterminator='\n')

    def export_csv(self, frame: pd.DataFrame, filename: Union[str, Path],
                   errors: Optional[CellErrors] = None, key: str = 'terminal',
                   column_for: Any = None) -> Path:
        """
        Export a report frame to CSV

        Returns:
            Path to exported file
        """
        filepath = self._resolve(filename)
        try:
            self._write_atomic(filepath, self.to_csv_text(frame, errors, key, column_for))
            logger.info(f"Exported {len(frame)} rows to CSV: {filepath}")
            return filepath
        except Exception as e:
            logger.error(f"Error exporting CSV: {e}")
            raise

    def export_json(self, frame: pd.DataFrame, filename: Union[str, Path], indent: int = 2) -> Path:
        """Export rows as a JSON array (NaN becomes null)"""
        filepath = self._resolve(filename)
        records = [
            {k: (None if isinstance(v, float) and math.isnan(v) else v) for k, v in row.items()}
            for row in frame.to_dict(orient='records')
        ]
        try:
            self._write_atomic(filepath, json.dumps(records, indent=indent, default=float) + '\n')
            logger.info(f"Exported {len(frame)} rows to JSON: {filepath}")
            return filepath
        except Exception as e:
            logger.error(f"Error exporting JSON: {e}")
            raise

    @staticmethod
    def load_csv(filename: Union[str, Path]) -> pd.DataFrame:
        """Read a CSV written by export_csv; 'undefined' and error markers become NaN"""
        frame = pd.read_csv(filename, na_values=[UNDEFINED], keep_default_na=False)
        for column in frame.columns:
            if frame[column].dtype == object:
                series = frame[column].astype(str)
                if series.str.startswith(ERROR_PREFIX).any():
                    frame[column] = pd.to_numeric(series.where(~series.str.startswith(ERROR_PREFIX)),
                                                  errors='coerce')
        return frame


def render_table(frame: pd.DataFrame, title: str = '', console: Optional[Console] = None,
                 errors: Optional[CellErrors] = None, key: str = 'terminal', column_for: Any = None,
                 float_format: str = '.6g'):
    """Print a frame as a rich table"""
    console = console or Console()
    marked = _mark_errors(frame, errors, key, column_for or (lambda m: m))

    table = Table(title=title or None, show_header=True, header_style="bold magenta")
    for column in marked.columns:
        table.add_column(str(column), justify="left" if column == key else "right")
    for row in marked.itertuples(index=False):
        cells = []
        for value in row:
            text = format_cell(value, float_format)
            if text.startswith(ERROR_PREFIX):
                text = f"[red]{text}[/red]"
            elif text == UNDEFINED:
                text = f"[dim]{text}[/dim]"
            cells.append(text)
        table.add_row(*cells)
    console.print(table)
