import io

from badicdim.components.definitions import TableContents
from badicdim.components.export import format_table, write_table


def _table():
    return TableContents(["k ", "hstar"], [["1", "2"], ["2", "4"]], title="counts")


def test_format_table_is_tab_separated():
    assert format_table(_table()) == "k\thstar\n1\t2\n2\t4\n"


def test_table_without_header():
    assert format_table(TableContents(None, [["a", "b"]])) == "a\tb\n"


def test_write_table_to_stream():
    stream = io.StringIO()
    write_table(_table(), stream=stream)
    assert stream.getvalue().startswith("k\thstar\n")


def test_write_table_to_file(tmp_path):
    target = tmp_path / "report.tsv"
    write_table(_table(), str(target))
    assert target.read_text() == "k\thstar\n1\t2\n2\t4\n"
