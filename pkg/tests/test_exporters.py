"""
Unit tests for report export
"""
import json
import sys
from pathlib import Path

import numpy as np
import pandas as pd
import pytest
from rich.console import Console

sys.path.insert(0, str(Path(__file__).parent.parent))

from src.exporters import FileExporter, render_table
from src.exporters.file_exporter import format_cell
from src.processors import rate_column


@pytest.fixture
def report_frame():
    """Small per-terminal report"""
    return pd.DataFrame({
        'terminal': ['a', 'b'],
        'mean_sinr_db': [12.5, np.nan],
        'ian_bps': [1.0 / 3.0, 2.5e6],
        'simple_bps': [1e6, 2e6]
    })


@pytest.fixture
def exporter(tmp_path):
    return FileExporter(export_dir=tmp_path)


class TestFormatCell:
    """Test cell rendering"""

    def test_round_trip_digits(self):
        """Test 17 significant digits re-parse exactly"""
        value = 1.0 / 3.0
        assert float(format_cell(value)) == value
        assert format_cell(0.1) == '0.10000000000000001'

    def test_undefined(self):
        """Test NaN and None"""
        assert format_cell(float('nan')) == 'undefined'
        assert format_cell(np.float64('nan')) == 'undefined'
        assert format_cell(None) == 'undefined'

    def test_other_types(self):
        """Test integers, booleans and strings"""
        assert format_cell(np.int64(42)) == '42'
        assert format_cell(True) == 'true'
        assert format_cell('ms0') == 'ms0'


class TestCsvExport:
    """Test CSV text and files"""

    def test_header_and_line_endings(self, exporter, report_frame):
        """Test header row and LF line endings"""
        text = exporter.to_csv_text(report_frame)
        lines = text.split('\n')
        assert lines[0] == 'terminal,mean_sinr_db,ian_bps,simple_bps'
        assert '\r' not in text
        assert text.endswith('\n')
        assert lines[2].startswith('b,undefined,')

    def test_error_markers(self, exporter, report_frame):
        """Test failed cells become ERROR:<name>"""
        errors = {('b', 'ian'): 'ComplexityError'}
        text = exporter.to_csv_text(report_frame, errors=errors, column_for=rate_column)
        row_b = text.split('\n')[2].split(',')
        assert row_b[2] == 'ERROR:ComplexityError'
        assert row_b[3] == '2000000'

    def test_export_and_load(self, exporter, report_frame, tmp_path):
        """Test export_csv writes into the export directory and load_csv reads it back"""
        path = exporter.export_csv(report_frame, 'report.csv', errors={('a', 'simple'): 'DomainError'},
                                   column_for=rate_column)
        assert path == tmp_path / 'report.csv'
        assert not list(tmp_path.glob('*.tmp'))

        loaded = FileExporter.load_csv(path)
        assert np.isnan(loaded.loc[1, 'mean_sinr_db'])
        assert np.isnan(loaded.loc[0, 'simple_bps'])
        assert loaded.loc[1, 'simple_bps'] == 2e6
        assert loaded.loc[0, 'ian_bps'] == pytest.approx(1.0 / 3.0, rel=1e-15)

    def test_nested_path(self, exporter, report_frame, tmp_path):
        """Test explicit paths are kept and parents created"""
        target = tmp_path / 'deep' / 'out.csv'
        assert exporter.export_csv(report_frame, target) == target
        assert target.exists()

    def test_overwrite(self, exporter, report_frame):
        """Test re-export replaces the file"""
        path = exporter.export_csv(report_frame, 'r.csv')
        exporter.export_csv(report_frame.head(1), 'r.csv')
        assert len(FileExporter.load_csv(path)) == 1


class TestJsonExport:
    """Test JSON export"""

    def test_nan_becomes_null(self, exporter, report_frame):
        """Test undefined values are null"""
        path = exporter.export_json(report_frame, 'report.json')
        records = json.loads(path.read_text(encoding='utf-8'))
        assert len(records) == 2
        assert records[1]['mean_sinr_db'] is None
        assert records[0]['terminal'] == 'a'


class TestRenderTable:
    """Test rich table output"""

    def test_render(self, report_frame):
        """Test the table lists every column and marks errors"""
        console = Console(record=True, width=200)
        render_table(report_frame, title='Report', console=console,
                     errors={('a', 'ian'): 'IllConditionedError'}, column_for=rate_column)
        text = console.export_text()
        assert 'Report' in text
        assert 'simple_bps' in text
        assert 'ERROR:IllConditionedError' in text
        assert 'undefined' in text
