from fractions import Fraction

import pytest

from badicdim.components.cubes import CubeTree, WindowedSet
from badicdim.components.errors import ParameterError
from badicdim.components.generators import GeneratorSpec, generate, integer_cantor_windows, one_over_k_tree, \
    parse_digits, random_branching_tree
from badicdim.components.set_files import format_set


@pytest.mark.parametrize("text, dim, expected", [
    ("0,2", 1, ((0,), (2,))),
    ("00, 22", 2, ((0, 0), (2, 2))),
    ("0a", 2, ((0, 10),)),
])
def test_parse_digits(text, dim, expected):
    assert parse_digits(text, dim) == expected


@pytest.mark.parametrize("text, dim", [("0,x", 1), ("012", 2), ("", 1)])
def test_parse_digits_rejects(text, dim):
    with pytest.raises(ParameterError):
        parse_digits(text, dim)


@pytest.mark.parametrize("kwargs", [
    {"family": "sierpinski"},
    {"family": "full-cube", "base": 1},
    {"family": "full-cube", "dim": 0},
    {"family": "full-cube", "depth": -1},
    {"family": "integer-cantor", "windows": 0},
])
def test_invalid_specs(kwargs):
    with pytest.raises(ParameterError):
        GeneratorSpec(**kwargs)


def test_digit_cantor_family():
    tree = generate(GeneratorSpec("digit-cantor", base=3, digits=((0,), (2,)), depth=5))
    assert isinstance(tree, CubeTree)
    assert tree.leaf_count == 32


def test_full_cube_family():
    tree = generate(GeneratorSpec("full-cube", base=2, dim=3, depth=2))
    assert tree.leaf_count == 64


def test_lattice_window_family():
    wset = generate(GeneratorSpec("lattice-window", base=2, dim=2, side_exp=3, resolution=2))
    assert isinstance(wset, WindowedSet)
    window = wset.windows[0]
    assert window.side == 8
    assert window.resolution == 2
    assert window.tree.leaf_count == 64


def test_integer_cantor_window_offsets():
    windows = integer_cantor_windows(4, 1, ((0,), (2,)), 2, 1, copies=3)
    assert [w.offset for w in windows] == [(0,), (256,), (1024,)]
    assert all(w.tree.leaf_count == 4 for w in windows)
    assert windows[0].tree is windows[1].tree


def test_integer_cantor_rejects_bad_digits():
    with pytest.raises(ParameterError):
        integer_cantor_windows(4, 1, ((5,),), 2, 1)
    with pytest.raises(ParameterError):
        integer_cantor_windows(4, 1, (), 2, 1)


def test_cantor_lattice_union_layout():
    wset = generate(GeneratorSpec("cantor-lattice-union", base=4, digits=((0,), (3,)),
                                  lattice_digits=((0,), (1,), (2,)),
                                  depth=3, side_exp=2))
    assert [(w.offset, w.side_exp) for w in wset.windows] == [((0,), 0), ((16,), 2)]
    assert wset.windows[0].tree.leaf_count == 8
    assert wset.windows[1].tree.leaf_count == 9
    assert wset.resolution == 3


def test_union_family_alias():
    spec = GeneratorSpec("prop5-union", base=4, digits=((0,), (3,)), lattice_digits=((0,), (1,), (2,)),
                         depth=3, side_exp=2)
    assert spec.family == "cantor-lattice-union"
    canonical = GeneratorSpec("cantor-lattice-union", base=4, digits=((0,), (3,)), lattice_digits=((0,), (1,), (2,)),
                              depth=3, side_exp=2)
    assert format_set(generate(spec)) == format_set(generate(canonical))


def test_one_over_k_cells():
    tree = one_over_k_tree(8, 6)
    assert [cube.index[0] for cube in tree.iter_leaves()] == [8, 9, 10, 12, 16, 21, 32, 63]
    with pytest.raises(ParameterError):
        one_over_k_tree(0, 6)
    with pytest.raises(ParameterError):
        generate(GeneratorSpec("one-over-k", dim=2))


def test_random_branching_is_seeded():
    first = random_branching_tree(3, 2, 4, 5, seed=42)
    second = random_branching_tree(3, 2, 4, 5, seed=42)
    assert first.same_set(second)
    assert 1 <= first.max_children() <= 5
    assert generate(GeneratorSpec("random-branching", base=3, dim=2, depth=4, max_children=5, seed=42)) \
        .same_set(first)


def test_random_branching_rejects_wide_nodes():
    with pytest.raises(ParameterError):
        random_branching_tree(2, 1, 3, 3)


def test_random_branching_leaves_are_reachable():
    tree = random_branching_tree(2, 2, 5, 2, seed=1)
    for leaf in tree.iter_leaves():
        assert leaf.level == 5
        assert all(0 <= x < 1 for x in leaf.corner())
        assert leaf.corner()[0] == Fraction(leaf.index[0], 32)
