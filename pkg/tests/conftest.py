import pytest

from badicdim.components.cubes import tree_from_digit_rule, full_tree


@pytest.fixture(autouse=True)
def project_dir(tmp_path, monkeypatch):
    """Keep config files and the log inside the test's temporary directory."""
    monkeypatch.setattr("badicdim.components.config_handler.get_project_dir", lambda: str(tmp_path))
    monkeypatch.setattr("badicdim.__main__.get_project_dir", lambda: str(tmp_path))
    return tmp_path


@pytest.fixture
def cantor_tree():
    return tree_from_digit_rule(3, 1, 8, [0, 2])


@pytest.fixture
def carpet_tree():
    return tree_from_digit_rule(3, 2, 4, [(i, j) for i in range(3) for j in range(3) if (i, j) != (1, 1)])


@pytest.fixture
def unit_square():
    return full_tree(2, 2, 5)
