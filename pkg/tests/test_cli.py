import pytest

from badicdim.__main__ import main


@pytest.fixture
def cantor_file(tmp_path):
    target = tmp_path / "cantor.bdt"
    assert main(["gen", "digit-cantor", "--base", "3", "--digits", "0,2", "--depth", "8",
                 "--out", str(target)]) == 0
    return target


def _lines(capsys):
    return capsys.readouterr().out.splitlines()


def test_gen_writes_file(cantor_file):
    assert cantor_file.read_text().startswith("bdt b=3 d=1 n=8\n")


def test_gen_prints_without_out(capsys):
    assert main(["gen", "full-cube", "--base", "2", "--depth", "1"]) == 0
    assert _lines(capsys)[0] == "bdt b=2 d=1 n=1"


def test_estimate_prints_report_and_headline(cantor_file, capsys):
    capsys.readouterr()
    assert main(["estimate", "--in", str(cantor_file)]) == 0
    lines = _lines(capsys)
    assert lines[0] == "k\tcount\tlogratio\twitness"
    assert lines[1] == "1\t2\t0.630930\troot"
    assert lines[-1] == "estimate=0.630930 kind=star-local depth=8"


def test_estimate_report_to_file(cantor_file, tmp_path, capsys):
    report = tmp_path / "report.tsv"
    assert main(["estimate", "--in", str(cantor_file), "--k-max", "4", "--decimals", "3",
                 "--report", str(report)]) == 0
    assert _lines(capsys)[-1] == "estimate=0.631 kind=star-local depth=4"
    assert len(report.read_text().splitlines()) == 5


def test_info(cantor_file, capsys):
    capsys.readouterr()
    assert main(["info", "--in", str(cantor_file)]) == 0
    assert _lines(capsys) == ["bdt b=3 d=1 n=8", "leaves=256", "levels=1,2,4,8,16,32,64,128,256"]


def test_info_on_windowed_set(tmp_path, capsys):
    target = tmp_path / "lattice.wdt"
    assert main(["gen", "lattice-window", "--side-exp", "3", "--resolution", "2", "--out", str(target)]) == 0
    capsys.readouterr()
    assert main(["info", "--in", str(target)]) == 0
    lines = _lines(capsys)
    assert lines[0] == "wdt b=2 d=1 windows=1"
    assert lines[1] == "window off=0 m=3 depth=5"


def test_extract_assouad(tmp_path, capsys):
    source = tmp_path / "cantor9.bdt"
    target = tmp_path / "subset.bdt"
    assert main(["gen", "digit-cantor", "--base", "3", "--digits", "0,2", "--depth", "9",
                 "--out", str(source)]) == 0
    capsys.readouterr()
    assert main(["extract", "assouad", "--alpha", "0.4", "--eps", "0.1", "--M", "27",
                 "--in", str(source), "--out", str(target)]) == 0
    assert _lines(capsys)[-1].startswith("estimate=0.333333 target=2/5 eps=1/10")
    assert target.read_text().startswith("bdt b=27 ")


def test_extract_assouad_strict_fails(tmp_path):
    source = tmp_path / "cantor9.bdt"
    assert main(["gen", "digit-cantor", "--base", "3", "--digits", "0,2", "--depth", "9",
                 "--out", str(source)]) == 0
    assert main(["extract", "assouad", "--alpha", "0.4", "--eps", "0.1", "--M", "27", "--strict",
                 "--in", str(source)]) == 1


def test_extract_lower(tmp_path, capsys):
    source = tmp_path / "interval.bdt"
    target = tmp_path / "lower.bdt"
    assert main(["gen", "full-cube", "--base", "4", "--depth", "6", "--out", str(source)]) == 0
    capsys.readouterr()
    assert main(["extract", "lower", "--alpha", "1/2", "--M", "4", "--depth", "2",
                 "--in", str(source), "--out", str(target)]) == 0
    assert _lines(capsys)[-1] == "points=16 box_ratio=1/2 violations=0"
    assert target.exists()


def test_extract_lower_irrational_ratio(cantor_file):
    assert main(["extract", "lower", "--alpha", "2/3", "--M", "8", "--depth", "2",
                 "--in", str(cantor_file)]) == 1


def test_extract_tree_verb_rejects_windowed_input(tmp_path):
    target = tmp_path / "lattice.wdt"
    assert main(["gen", "lattice-window", "--out", str(target)]) == 0
    assert main(["extract", "ladder", "--alpha", "0.5", "--M", "4", "--in", str(target)]) == 1


def test_verify(capsys):
    assert main(["verify", "ball-cube", "--samples", "5", "--seed", "3"]) == 0
    assert _lines(capsys)[-1] == "checks=3 failures=0"


def test_missing_file_exits_with_two(tmp_path):
    assert main(["info", "--in", str(tmp_path / "absent.bdt")]) == 2


def test_malformed_file_exits_with_two(tmp_path):
    broken = tmp_path / "broken.bdt"
    broken.write_text("bdt b=3 d=1 n=2\n0x\n")
    assert main(["estimate", "--in", str(broken)]) == 2


def test_usage_errors_exit_with_two():
    assert main(["estimate"]) == 2
    assert main(["frobnicate"]) == 2
    assert main(["extract", "lower", "--alpha", "half", "--M", "4", "--depth", "1", "--in", "x"]) == 2


def test_extract_lower_strict_on_unmet_conditions(tmp_path, capsys):
    source = tmp_path / "interval.bdt"
    assert main(["gen", "full-cube", "--base", "4", "--depth", "6", "--out", str(source)]) == 0
    capsys.readouterr()
    assert main(["extract", "lower", "--alpha", "1/2", "--M", "4", "--depth", "1", "--eps", "1/4", "--strict",
                 "--in", str(source)]) == 0
    assert _lines(capsys)[-1] == "points=4 box_ratio=1/2 violations=0"
    assert main(["extract", "lower", "--alpha", "1/2", "--M", "4", "--depth", "1", "--eps", "1/2", "--strict",
                 "--in", str(source)]) == 1
    assert main(["extract", "lower", "--alpha", "1/2", "--M", "4", "--depth", "1", "--eps", "1/2",
                 "--in", str(source)]) == 0
    assert "unmet condition: C*M^((s-eps)/alpha) < M+3^d" in capsys.readouterr().err


def test_global_estimate_defaults_to_window_scale(tmp_path, capsys):
    target = tmp_path / "lattice.wdt"
    assert main(["gen", "lattice-window", "--out", str(target)]) == 0
    capsys.readouterr()
    assert main(["estimate", "--in", str(target), "--kind", "star-global"]) == 0
    assert _lines(capsys)[-1] == "estimate=1.000000 kind=star-global depth=6"


@pytest.mark.parametrize("family", ["cantor-lattice-union", "prop5-union"])
def test_union_global_estimate(family, tmp_path, capsys):
    target = tmp_path / "union.wdt"
    assert main(["gen", family, "--base", "4", "--digits", "0,3", "--lattice-digits", "0,1,2",
                 "--side-exp", "4", "--depth", "4", "--out", str(target)]) == 0
    capsys.readouterr()
    assert main(["estimate", "--in", str(target), "--kind", "star-global"]) == 0
    assert _lines(capsys)[-1] == "estimate=0.792481 kind=star-global depth=4"


def test_verify_ball_cube_alias(capsys):
    assert main(["verify", "lemma21", "--samples", "5", "--seed", "3"]) == 0
    assert _lines(capsys)[-1] == "checks=3 failures=0"


def test_repeated_runs_are_byte_identical(cantor_file, tmp_path, capsys):
    capsys.readouterr()
    outputs = []
    for run in range(2):
        subset = tmp_path / f"subset{run}.bdt"
        trace = tmp_path / f"trace{run}.tsv"
        assert main(["estimate", "--in", str(cantor_file)]) == 0
        assert main(["extract", "assouad", "--alpha", "0.4", "--eps", "0.1", "--M", "9",
                     "--strategy", "random:7", "--in", str(cantor_file), "--out", str(subset),
                     "--trace", str(trace)]) == 0
        outputs.append((capsys.readouterr().out, subset.read_bytes(), trace.read_bytes()))
    assert outputs[0] == outputs[1]
    assert outputs[0][1].startswith(b"bdt b=9 ")
