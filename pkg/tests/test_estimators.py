import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from badicdim.components.cubes import BadicCube, CubeTree, NodeFactory, PointSet, full_tree, \
    leaf_representatives, tree_from_digit_rule
from badicdim.components.definitions import ASSOUAD_BALL, LOWER_COVER, LOWER_PACK, STAR_GLOBAL, STAR_LOCAL
from badicdim.components.errors import DepthError, ParameterError
from badicdim.components.estimators import ScaleRecord, DimensionReport, ball_cover_count, best_node, \
    cell_count, cell_level, count_hit_subcubes, dimension_report, h_star, lower_count, lower_dimension_report, \
    packing_count, star_dimension_report, verify_cover_pack_sandwich
from badicdim.components.generators import GeneratorSpec, generate, random_branching_tree

CANTOR_RATIO = math.log(2) / math.log(3)


def _chain_and_full_tree():
    """Full binary subtree under '0' and a single chain under '1', depth 8."""
    factory = NodeFactory()
    full = factory.leaf()
    for _ in range(7):
        full = factory.node([((0,), full), ((1,), full)])
    chain = factory.chain([(0,)] * 7, factory.leaf())
    return CubeTree(2, 1, 8, factory.node([((0,), full), ((1,), chain)]))


def _points(base, values, exponent=0):
    return PointSet(base, 1, tuple((Fraction(v),) for v in values), exponent)


@pytest.mark.parametrize("tree, digits, k, expected", [
    (full_tree(2, 1, 3), [], 1, 2),
    (tree_from_digit_rule(3, 1, 4, [0, 2]), [], 1, 2),
    (tree_from_digit_rule(3, 1, 4, [0, 2]), [], 2, 4),
    (tree_from_digit_rule(3, 1, 4, [0, 2]), ["1"], 1, 0),
    (tree_from_digit_rule(3, 1, 4, [0, 2]), ["02"], 2, 4),
])
def test_count_hit_subcubes(tree, digits, k, expected):
    cube = BadicCube.from_digits(tree.base, digits) if digits else BadicCube.root(tree.base, tree.dim)
    assert count_hit_subcubes(tree, cube, k) == expected


def test_count_hit_subcubes_depth_overflow():
    tree = tree_from_digit_rule(3, 1, 4, [0, 2])
    with pytest.raises(DepthError):
        count_hit_subcubes(tree, BadicCube.from_digits(3, ["02"]), 3)


def test_h_star_on_cantor_witnesses_root():
    tree = tree_from_digit_rule(3, 1, 6, [0, 2])
    count, witness = h_star(tree, 3)
    assert count == 8
    assert witness == BadicCube.root(3, 1)


def test_h_star_on_single_chain():
    tree = CubeTree.from_cubes(2, 1, 5, [BadicCube(2, 5, (13,))])
    for k in range(1, 6):
        assert h_star(tree, k)[0] == 1


def test_h_star_rejects_deep_scale():
    with pytest.raises(DepthError):
        h_star(tree_from_digit_rule(3, 1, 4, [0, 2]), 5)


def test_best_node_prefers_dense_region():
    factory = NodeFactory()
    full = factory.leaf()
    for _ in range(6):
        full = factory.node([((0,), full), ((1,), full)])
    sparse = factory.chain([(1,)] * 6, factory.leaf())
    tree = CubeTree(2, 1, 7, factory.node([((0,), sparse), ((1,), full)]))
    count, cube = best_node(tree, 6, min_level=1)
    assert count == 64
    assert cube.digits() == ("1",)


def test_best_node_skips_excluded_cubes():
    tree = full_tree(2, 1, 4)
    count, cube = best_node(tree, 2, min_level=1, exclude=[BadicCube.from_digits(2, ["0"])])
    assert count == 4
    assert cube.digits() == ("1",)


@given(st.integers(min_value=0, max_value=2 ** 16), st.integers(min_value=1, max_value=4),
       st.integers(min_value=1, max_value=3))
@settings(max_examples=40, deadline=None)
def test_h_star_is_submultiplicative(seed, j, k):
    tree = random_branching_tree(2, 1, j + k, 2, seed)
    product = h_star(tree, j)[0] * h_star(tree, k)[0]
    assert h_star(tree, j + k)[0] <= product


@given(st.integers(min_value=0, max_value=2 ** 16), st.integers(min_value=1, max_value=5))
@settings(max_examples=40, deadline=None)
def test_witness_reproduces_count(seed, k):
    tree = random_branching_tree(3, 1, 6, 3, seed)
    count, witness = h_star(tree, k)
    assert count_hit_subcubes(tree, witness, k) == count
    low, low_witness = lower_count(tree, k)
    assert count_hit_subcubes(tree, low_witness, k) == low
    assert low <= count


@given(st.integers(min_value=0, max_value=2 ** 16))
@settings(max_examples=30, deadline=None)
def test_h_star_is_monotone_under_union(seed):
    first = random_branching_tree(2, 2, 4, 2, seed)
    second = random_branching_tree(2, 2, 4, 3, seed + 1)
    joined = first.union(second)
    for k in range(1, 5):
        assert h_star(first, k)[0] <= h_star(joined, k)[0]


@pytest.mark.parametrize("depth", range(1, 11))
def test_cantor_local_headline_at_every_depth(depth):
    report = star_dimension_report(tree_from_digit_rule(3, 1, depth, [0, 2]))
    assert report.k_max == depth
    assert report.headline == pytest.approx(CANTOR_RATIO, abs=1e-6)
    assert report.headline_line() == f"estimate=0.630930 kind={STAR_LOCAL} depth={depth}"


def test_cantor_records_are_exact():
    report = star_dimension_report(tree_from_digit_rule(3, 1, 8, [0, 2]))
    assert [record.count for record in report.records] == [2 ** k for k in range(1, 9)]
    low, high = report.envelope
    assert low == pytest.approx(high)


def test_full_square_headline_is_two():
    report = star_dimension_report(full_tree(2, 2, 5))
    assert all(record.log_ratio == pytest.approx(2.0) for record in report.records)


def test_one_over_k_headline_is_fractional():
    tree = generate(GeneratorSpec("one-over-k", base=2, depth=12, count=64))
    report = star_dimension_report(tree)
    assert 0 < report.headline < 1


def test_worker_count_does_not_change_report():
    tree = random_branching_tree(3, 2, 5, 5, seed=11)
    single = star_dimension_report(tree, workers=1)
    pooled = star_dimension_report(tree, workers=4)
    assert single.table().rows == pooled.table().rows


def test_lattice_window_local_zero_global_dimension():
    wset = generate(GeneratorSpec("lattice-window", base=2, dim=2, side_exp=4, resolution=3))
    local = star_dimension_report(wset, STAR_LOCAL)
    assert local.headline == 0.0
    glob = star_dimension_report(wset, STAR_GLOBAL, k_max=4)
    assert glob.headline == pytest.approx(2.0)
    assert star_dimension_report(wset, STAR_GLOBAL).headline_line() == glob.headline_line()


def test_integer_cantor_global_headline():
    wset = generate(GeneratorSpec("integer-cantor", base=4, lattice_digits=((0,), (1,), (2,)), side_exp=5,
                                  resolution=2, windows=2))
    report = star_dimension_report(wset, STAR_GLOBAL, k_max=5)
    assert report.headline == pytest.approx(math.log(3) / math.log(4), abs=1e-6)


def test_cantor_lattice_union_separates_local_and_global():
    wset = generate(GeneratorSpec("cantor-lattice-union", base=4, digits=((0,), (3,)),
                                  lattice_digits=((0,), (1,), (2,)),
                                  depth=6, side_exp=4))
    local = star_dimension_report(wset, STAR_LOCAL)
    glob = star_dimension_report(wset, STAR_GLOBAL, k_max=4)
    assert local.headline_line() == f"estimate=0.500000 kind={STAR_LOCAL} depth=6"
    assert glob.headline_line() == f"estimate=0.792481 kind={STAR_GLOBAL} depth=4"
    assert local.headline < glob.headline
    assert star_dimension_report(wset, STAR_GLOBAL).headline_line() == glob.headline_line()


def test_report_table_shape():
    report = star_dimension_report(tree_from_digit_rule(3, 1, 3, [0, 2]))
    table = report.table()
    assert table.header == ["k", "count", "logratio", "witness"]
    assert table.rows[0] == ["1", "2", "0.630930", "root"]


def test_report_rejects_unordered_records():
    witness = BadicCube.root(2, 1)
    with pytest.raises(ParameterError):
        DimensionReport(STAR_LOCAL, 2, [ScaleRecord(2, 4, 1.0, witness), ScaleRecord(1, 2, 1.0, witness)])


def test_report_k_max_beyond_depth():
    with pytest.raises(DepthError):
        star_dimension_report(full_tree(2, 1, 3), k_max=4)


def test_lower_report_on_cantor_and_interval():
    cantor = lower_dimension_report(tree_from_digit_rule(3, 1, 8, [0, 2]))
    assert all(record.log_ratio == pytest.approx(CANTOR_RATIO) for record in cantor.records)
    interval = lower_dimension_report(full_tree(2, 1, 6))
    assert interval.headline == pytest.approx(1.0)


def test_lower_report_sees_the_chain():
    report = lower_dimension_report(_chain_and_full_tree(), k_max=7)
    assert report.headline == 0.0
    assert report.kind == LOWER_COVER


@pytest.mark.parametrize("r, expected", [
    (Fraction(1, 8), 3),
    (Fraction(1, 7), 3),
    (Fraction(1, 9), 4),
    (Fraction(1), 0),
    (Fraction(3), -1),
])
def test_cell_level(r, expected):
    assert cell_level(2, r) == expected


def test_cell_count_on_cantor_corners():
    points = leaf_representatives(tree_from_digit_rule(3, 1, 8, [0, 2]))
    assert cell_count(points, 3, Fraction(1, 81)) == 16


def test_ball_cover_count():
    points = _points(2, [0, Fraction(1, 2), 1], exponent=1)
    assert ball_cover_count(points, (Fraction(1, 2),), Fraction(5, 8), Fraction(1, 8)) == 3
    single = _points(2, [Fraction(1, 4)])
    assert ball_cover_count(single, (Fraction(1, 4),), 1, Fraction(1, 16)) == 1
    cantor = leaf_representatives(tree_from_digit_rule(3, 1, 8, [0, 2]))
    assert ball_cover_count(cantor, (Fraction(0),), 1, Fraction(1, 81)) == 16


def test_ball_counts_reject_bad_radii():
    points = _points(2, [0])
    with pytest.raises(ParameterError):
        ball_cover_count(points, (0,), Fraction(1, 4), Fraction(1, 2))
    with pytest.raises(ParameterError):
        packing_count(points, (0,), 1, 0)
    with pytest.raises(ParameterError):
        packing_count(points, (Fraction(1, 2),), 1, Fraction(1, 4))


def test_packing_count():
    points = _points(10, [0, Fraction(1, 2), 1], exponent=1)
    assert packing_count(points, (Fraction(1, 2),), "0.6", "0.2") == 3
    assert packing_count(_points(2, [Fraction(3, 8)]), (Fraction(3, 8),), 1, Fraction(1, 8)) == 1
    close = _points(10, [0, Fraction(1, 10)])
    assert packing_count(close, (0,), "0.5", "0.2") == 1


def test_sandwich_on_small_sets():
    points = _points(10, [0, Fraction(1, 2), 1], exponent=1)
    rows = verify_cover_pack_sandwich(points, [((Fraction(1, 2),), 1, "0.2")])
    assert rows[0].ok
    assert rows[0].method == "exact"
    single = _points(2, [Fraction(1, 2)])
    row = verify_cover_pack_sandwich(single, [((Fraction(1, 2),), 1, Fraction(1, 4))])[0]
    assert (row.cover_2r, row.packing, row.cover_r3) == (1, 1, 1)


@given(st.integers(min_value=0, max_value=2 ** 16))
@settings(max_examples=10, deadline=None)
def test_sandwich_on_cantor_corners(seed):
    points = leaf_representatives(tree_from_digit_rule(3, 1, 6, [0, 2]))
    samples = []
    for step in range(10):
        center = points.points[(seed + 17 * step) % len(points)]
        R = Fraction(1, 3 ** ((seed + step) % 3))
        r = R / 3 ** (1 + (seed * step) % 4)
        samples.append((center, R, r))
    assert all(row.ok for row in verify_cover_pack_sandwich(points, samples))


def test_ball_reports_on_cantor():
    tree = tree_from_digit_rule(3, 1, 5, [0, 2])
    upper = dimension_report(tree, ASSOUAD_BALL, k_max=3)
    lower = dimension_report(tree, LOWER_PACK, k_max=3)
    assert upper.method == "b-adic-cells"
    assert lower.method == "greedy-packing"
    for high, low in zip(upper.records, lower.records):
        assert low.count <= high.count
        assert high.count <= 6 * 2 ** high.k


def test_ball_reports_need_a_tree():
    wset = generate(GeneratorSpec("lattice-window", base=2, side_exp=2, resolution=2))
    with pytest.raises(ParameterError):
        dimension_report(wset, ASSOUAD_BALL)
