from fractions import Fraction

import pytest

from badicdim.components.cubes import PointSet, full_tree, tree_from_digit_rule
from badicdim.components.errors import ParameterError, SelectionError
from badicdim.components.lower_extract import BallTree, LowerParams, candidate_centers, construct_subset_lower, \
    lower_conditions, select_packing_children, verify_lower_bounds


@pytest.fixture(scope="module")
def interval_ball_tree():
    return construct_subset_lower(full_tree(4, 1, 12), LowerParams(Fraction(1, 2), 4, 3))


@pytest.fixture(scope="module")
def cantor_ball_tree():
    return construct_subset_lower(tree_from_digit_rule(3, 1, 12, [0, 2]), LowerParams(Fraction(1, 2), 3, 4))


def _grid(count, base=2):
    return PointSet(base, 1, tuple((Fraction(i, count),) for i in range(count)))


@pytest.mark.parametrize("alpha, M, ratio", [
    (Fraction(1, 2), 4, Fraction(1, 16)),
    (Fraction(1, 2), 3, Fraction(1, 9)),
    (Fraction(2, 3), 4, Fraction(1, 8)),
    (Fraction(1), 5, Fraction(1, 5)),
])
def test_ratio_solves_scaling_equation(alpha, M, ratio):
    params = LowerParams(alpha, M, 2)
    assert params.ratio == ratio
    assert params.radius(2) == ratio ** 2


def test_irrational_ratio_is_rejected():
    with pytest.raises(ParameterError):
        LowerParams(Fraction(2, 3), 8, 2)
    with pytest.raises(ParameterError):
        LowerParams(Fraction(0), 4, 2)


def test_select_packing_children_on_grid():
    chosen = select_packing_children(_grid(16), (0,), 1, Fraction(1, 64), 4)
    assert chosen == [(Fraction(0),), (Fraction(1, 16),), (Fraction(2, 16),), (Fraction(3, 16),)]


def test_select_single_child_is_the_anchor():
    assert select_packing_children(_grid(16), (Fraction(1, 2),), 1, Fraction(1, 64), 1) == [(Fraction(1, 2),)]


def test_select_reports_shortfall():
    sparse = PointSet(2, 1, ((Fraction(0),), (Fraction(1, 2),), (Fraction(3, 4),)))
    with pytest.raises(SelectionError) as error:
        select_packing_children(sparse, (0,), 1, Fraction(1, 8), 7)
    assert error.value.achieved == 3


def test_select_rejects_bad_radii():
    with pytest.raises(ParameterError):
        select_packing_children(_grid(4), (0,), Fraction(1, 8), Fraction(1, 4), 1)


def test_candidate_centers_from_tree():
    tree = tree_from_digit_rule(3, 1, 6, [0, 2])
    found = candidate_centers(tree, (Fraction(2, 9),), Fraction(1, 9), Fraction(1, 81))
    assert found == [(Fraction(n, 81),) for n in (18, 20, 24, 26)]


def test_interval_construction(interval_ball_tree):
    assert interval_ball_tree.depth == 3
    assert len(interval_ball_tree.points) == 64
    assert interval_ball_tree.radii == [1, Fraction(1, 16), Fraction(1, 256), Fraction(1, 4096)]
    assert interval_ball_tree.levels[1] == [(Fraction(n, 8),) for n in range(4)]
    assert all(row.ok for row in interval_ball_tree.check_invariants())
    assert interval_ball_tree.shortfalls == 0


def test_interval_lower_bounds(interval_ball_tree):
    report = verify_lower_bounds(interval_ball_tree, Fraction(1, 2))
    assert report.ok
    assert report.box_ratio == Fraction(1, 2)
    assert report.table().header == ["x", "R", "r", "Nstar", "bound", "ok"]


def test_cantor_construction(cantor_ball_tree):
    assert len(cantor_ball_tree.points) == 81
    assert all(row.ok for row in cantor_ball_tree.check_invariants())
    assert cantor_ball_tree.shortfalls > 0


def test_cantor_lower_bounds_sampled(cantor_ball_tree):
    report = verify_lower_bounds(cantor_ball_tree, Fraction(1, 2), samples=100, seed=4)
    assert len(report.rows) == 100
    assert report.violations == 0
    assert report.box_ratio == Fraction(1, 2)


def test_depth_zero_is_the_anchor():
    tree = construct_subset_lower(_grid(8), LowerParams(Fraction(1, 2), 4, 0))
    assert tree.levels == [[(Fraction(0),)]]
    report = verify_lower_bounds(tree, Fraction(1, 2))
    assert report.rows == []
    assert report.ok


def test_depth_one_meets_the_trivial_bound():
    tree = construct_subset_lower(full_tree(4, 1, 6), LowerParams(Fraction(1, 2), 4, 1))
    report = verify_lower_bounds(tree, Fraction(1, 2))
    assert report.ok
    assert all(row.nstar >= 1 for row in report.rows)


def test_construction_reports_failing_word():
    with pytest.raises(SelectionError) as error:
        construct_subset_lower(tree_from_digit_rule(2, 1, 6, [0]), LowerParams(Fraction(1), 2, 2))
    assert error.value.word == ()
    assert error.value.achieved == 1


def test_conditions_are_measured_on_the_source(interval_ball_tree, cantor_ball_tree):
    assert [condition.ok for condition in interval_ball_tree.conditions] == [True, True]
    assert [condition.ok for condition in cantor_ball_tree.conditions] == [True, False]
    assert "< 6" in cantor_ball_tree.conditions[1].violation


@pytest.mark.parametrize("eps, met", [
    (Fraction(1, 4), [True, True]),
    (Fraction(1, 2), [True, False]),
    (Fraction(3, 4), [False, False]),
])
def test_eps_tightens_the_conditions(eps, met):
    params = LowerParams(Fraction(1, 2), 4, 1, eps=eps)
    assert [condition.ok for condition in lower_conditions(full_tree(4, 1, 6), params)] == met


def test_strict_construction_raises_on_unmet_conditions():
    with pytest.raises(ParameterError):
        construct_subset_lower(tree_from_digit_rule(3, 1, 8, [0, 2]), LowerParams(Fraction(1, 2), 3, 2), strict=True)
    with pytest.raises(ParameterError):
        construct_subset_lower(full_tree(4, 1, 6), LowerParams(Fraction(1, 2), 4, 1, eps=Fraction(3, 4)), strict=True)
    tree = construct_subset_lower(full_tree(4, 1, 6), LowerParams(Fraction(1, 2), 4, 1, eps=Fraction(1, 4)),
                                  strict=True)
    assert len(tree.points) == 4


def test_negative_eps_is_rejected():
    with pytest.raises(ParameterError):
        LowerParams(Fraction(1, 2), 4, 1, eps=Fraction(-1, 4))


def test_broken_tree_fails_invariants():
    radii = [Fraction(1), Fraction(1, 4)]
    broken = BallTree(2, 2, radii, [[(Fraction(0),)], [(Fraction(1, 8),), (Fraction(1, 4),)]])
    failed = {row.check for row in broken.check_invariants() if not row.ok}
    assert failed == {"disjoint", "anchor"}


def test_ball_tree_words_and_leaf_tree(interval_ball_tree):
    assert interval_ball_tree.word(2, 5) == (2, 2)
    assert interval_ball_tree.children(0, 0) == interval_ball_tree.levels[1]
    tree = interval_ball_tree.to_tree(6)
    assert tree.leaf_count == 64
