"""Tests for the reference-table reader and writer."""

import pytest

from proxyscat.core.exceptions import FormatError
from proxyscat.features.specfun.reference import read_reference_table, write_reference_table


class TestReferenceTable:
    """Tests for table I/O."""

    def test_write_then_read(self, tmp_path):
        """Written records are read back as floats."""
        path = write_reference_table(
            tmp_path / "table.txt",
            [(0, 1.0, "0.76519768655796655145", "0.088256964215676957983")],
        )

        records = read_reference_table(path)

        assert len(records) == 1
        assert records[0].n == 0
        assert records[0].j == pytest.approx(0.7651976865579666, rel=1e-15)

    def test_comments_and_blank_lines_skipped(self, tmp_path):
        """Comment and blank lines are ignored."""
        path = tmp_path / "table.txt"
        path.write_text("# header\n\n1 2.0 0.5767 -0.1070\n", encoding="utf-8")

        assert len(read_reference_table(path)) == 1

    def test_malformed_line(self, tmp_path):
        """A line with the wrong field count raises FormatError."""
        path = tmp_path / "table.txt"
        path.write_text("1 2.0 0.5\n", encoding="utf-8")

        with pytest.raises(FormatError):
            read_reference_table(path)

    def test_oracle_table_is_populated(self, reference_table):
        """The generated oracle contains J_0(1) at full precision."""
        rec = next(r for r in reference_table if r.n == 0 and r.x == 1.0)
        assert rec.j == pytest.approx(0.7651976865579666, rel=1e-15)
