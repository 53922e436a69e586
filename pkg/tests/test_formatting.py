"""
Tests for formatting utilities
"""

import io
import json

from rich.console import Console

from linmap.formatting import Report, emit, format_cell, format_number, render_csv, render_json, render_text


class TestFormatNumber:
    """Test number formatting with underscore separators"""

    def test_small_numbers(self):
        """Test numbers under 1000 remain unchanged"""
        assert format_number(0) == "0"
        assert format_number(42) == "42"
        assert format_number(999) == "999"
        assert format_number(-999) == "-999"

    def test_thousands(self):
        """Test thousands get underscore separators"""
        assert format_number(1000) == "1_000"
        assert format_number(1234567) == "1_234_567"

    def test_huge(self):
        """Test integers beyond 64 bits"""
        assert format_number(10 ** 21) == "1_000_000_000_000_000_000_000"


class TestFormatCell:
    """Test table cell text"""

    def test_values(self):
        """Test None, floats, ints and lists"""
        assert format_cell(None) == "none"
        assert format_cell(0.5) == "0.500000"
        assert format_cell(12345) == "12345"
        assert format_cell(12345, grouped=True) == "12_345"
        assert format_cell((3, 1)) == "3 1"
        assert format_cell(True) == "true"


class TestRenderers:
    """Test JSON, CSV and text rendering"""

    def setup_method(self):
        self.report = Report(title="sigma", columns=("i", "sigma"), rows=[(1, 1), (2, None)])

    def test_json_default_payload(self):
        """Test rows become objects with decimal-string integers"""
        out = render_json(self.report)
        assert out == '[{"i":"1","sigma":"1"},{"i":"2","sigma":null}]\n'

    def test_json_explicit_payload(self):
        """Test an explicit payload wins over the rows"""
        report = Report(title="t", columns=("a",), rows=[(1,)], payload={"value": "7"})
        assert json.loads(render_json(report)) == {"value": "7"}

    def test_csv(self):
        """Test header plus CRLF rows"""
        assert render_csv(self.report) == "i,sigma\r\n1,1\r\n2,none\r\n"

    def test_text(self):
        """Test the rich table contains the title and cells"""
        buf = io.StringIO()
        render_text(Report(title="Counts", columns=("n", "value"), rows=[(3, 12345)]),
                    Console(file=buf, width=80))
        text = buf.getvalue()
        assert "Counts" in text
        assert "12_345" in text

    def test_emit_json(self, capsys):
        """Test emit writes JSON to stdout"""
        emit(self.report, "json")
        assert capsys.readouterr().out == render_json(self.report)

    def test_emit_csv(self, capsys):
        """Test emit writes CSV to stdout"""
        emit(self.report, "csv")
        assert capsys.readouterr().out == render_csv(self.report)
