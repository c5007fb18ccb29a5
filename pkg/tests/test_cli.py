"""Tests for the command-line front end: exit codes, reports and outputs."""

import json

import pytest

from cli.app import main
from cli.datasets import generate
from cli.models import ErrorCode, ExitCode, exit_code_for, to_error_code
from conftest import UNIT_STAR_TREE, write_input
from errors import (
    BudgetExceededError,
    CollapseStuckError,
    GenericityError,
    InvalidParameterError,
    MetricParseError,
)

pytestmark = pytest.mark.unit

# Lower-triangular rows of the five-point graph metric a..e
COUNTEREXAMPLE_MATRIX = "1\n1,2\n6,5,5\n16,15,15,10\n"


def run(tmp_path, *argv):
    """Run the CLI with a JSON report and return (exit code, report)."""
    report_path = tmp_path / "report.json"
    code = main([*argv, "--json", str(report_path)])
    return code, json.loads(report_path.read_text(encoding="utf-8"))


@pytest.fixture
def star_file(tmp_path):
    return write_input(tmp_path, UNIT_STAR_TREE, "star.tree")


@pytest.fixture
def counterexample_file(tmp_path):
    return write_input(tmp_path, COUNTEREXAMPLE_MATRIX, "counterexample.txt")


# === Error Code Tests ===


@pytest.mark.parametrize(
    "exc,code,exit_code",
    [
        (MetricParseError("bad token", 1, 2), ErrorCode.PARSE_ERROR, ExitCode.INPUT_ERROR),
        (GenericityError("tie", (0, 1), (0, 2)), ErrorCode.GENERICITY, ExitCode.INPUT_ERROR),
        (CollapseStuckError("stuck", remaining=[]), ErrorCode.COLLAPSE_STUCK, ExitCode.ASSERTION_FAILED),
        (BudgetExceededError("too big", limit=1, requested=2), ErrorCode.BUDGET_EXCEEDED, ExitCode.BUDGET_EXCEEDED),
        (FileNotFoundError("missing"), ErrorCode.IO_ERROR, ExitCode.INPUT_ERROR),
        (RuntimeError("boom"), ErrorCode.UNKNOWN_ERROR, ExitCode.ASSERTION_FAILED),
    ],
)
def test_error_codes(exc, code, exit_code):
    assert to_error_code(exc) is code
    assert exit_code_for(code) is exit_code


# === Analyze Tests ===


def test_analyze_star(tmp_path, star_file, capsys):
    code, report = run(tmp_path, "analyze", star_file, "--format", "tree")
    assert code == 0
    assert report["passed"]
    results = report["results"]
    assert (results["delta"], results["nu"], results["threshold"]) == (0, 0.5, 1)
    assert results["levels"] == [0, 1, 2]
    assert results["tree_metric"]
    assert len(report["input_digest"]) == 64
    assert "4d+2nu     1" in capsys.readouterr().out


def test_analyze_counterexample(tmp_path, counterexample_file):
    code, report = run(tmp_path, "analyze", counterexample_file)
    assert code == 0
    results = report["results"]
    assert (results["delta"], results["nu"], results["threshold"]) == (1, 5, 14)
    assert results["delta_witness"] == ["0", "1", "2", "3"]
    assert not results["tree_metric"]


def test_parse_error_reports_position(tmp_path):
    path = write_input(tmp_path, "1\n1,x\n")
    code, report = run(tmp_path, "analyze", path)
    assert code == 2
    assert report["error"]["error_code"] == "input.parse"
    assert report["error"]["context"]["line"] == 2
    assert not report["passed"]


def test_triangle_inequality_failure(tmp_path):
    path = write_input(tmp_path, "1\n1,3\n")
    code, report = run(tmp_path, "analyze", path)
    assert code == 2
    assert report["error"]["error_code"] == "input.metric_axiom"


def test_missing_file(tmp_path):
    code, report = run(tmp_path, "analyze", str(tmp_path / "nowhere.txt"))
    assert code == 2
    assert report["error"]["error_code"] == "input.io"


def test_decimal_mode(tmp_path):
    path = write_input(tmp_path, "0.5\n0.5,1\n")
    code, report = run(tmp_path, "analyze", path, "--mode", "decimal")
    assert code == 0
    assert report["results"]["mode"] == "decimal"


# === Complex and Gradient Tests ===


def test_vr_counts(tmp_path, star_file):
    code, report = run(tmp_path, "vr", star_file, "--format", "tree", "--t", "1")
    assert code == 0
    assert report["results"]["by_dimension"] == [4, 3]
    assert report["results"]["euler_characteristic"] == 1


def test_vr_budget_exceeded(tmp_path, star_file):
    code, report = run(tmp_path, "vr", star_file, "--format", "tree", "--budget", "5")
    assert code == 3
    assert report["error"]["error_code"] == "budget.exceeded"


def test_canonical_gradient(tmp_path, star_file):
    code, report = run(tmp_path, "gradient", star_file, "--format", "tree", "--kind", "canonical")
    assert code == 0
    results = report["results"]
    assert len(results["intervals"]) == 4
    assert results["critical_cells"][-3:] == ["{a,b}", "{b,c}", "{b,d}"]
    assert all(a["passed"] for a in report["assertions"])


def test_generic_gradient_needs_distinct_distances(tmp_path, star_file):
    code, report = run(tmp_path, "gradient", star_file, "--format", "tree", "--kind", "generic")
    assert code == 2
    assert report["error"]["error_code"] == "precondition.genericity"


def test_cone_gradient(tmp_path, star_file):
    code, report = run(
        tmp_path, "gradient", star_file, "--format", "tree", "--kind", "cone", "--t", "2", "--base-point", "b"
    )
    assert code == 0
    assert report["results"]["critical_cells"] == ["{b}"]


def test_cone_gradient_needs_scale(tmp_path, star_file):
    code, report = run(tmp_path, "gradient", star_file, "--format", "tree", "--kind", "cone")
    assert code == 2
    assert report["error"]["error_code"] == "input.invalid_parameter"


def test_cone_below_threshold(tmp_path, counterexample_file):
    code, report = run(tmp_path, "gradient", counterexample_file, "--kind", "cone", "--t", "10")
    assert code == 2
    assert report["error"]["error_code"] == "precondition.threshold"


def test_dim_cap_only_for_apparent_kinds(tmp_path, star_file):
    code, _ = run(tmp_path, "gradient", star_file, "--format", "tree", "--kind", "canonical", "--dim-cap", "2")
    assert code == 2
    code, _ = run(tmp_path, "gradient", star_file, "--format", "tree", "--kind", "apparent", "--dim-cap", "2")
    assert code == 0


# === Collapse Tests ===


def test_collapse_star_onto_tree(tmp_path, star_file, capsys):
    code, report = run(tmp_path, "collapse", star_file, "--format", "tree", "--kind", "canonical", "--from", "2")
    assert code == 0
    assert report["results"]["steps"] == 4
    assert report["results"]["end_simplices"] == 7
    assert capsys.readouterr().out.splitlines()[0] == "a c d ; a b c d"


def test_collapse_counterexample_to_point(tmp_path, counterexample_file):
    code, report = run(tmp_path, "collapse", counterexample_file, "--kind", "filtered-cone", "--from", "16")
    assert code == 0
    assert report["results"]["end_simplices"] == 1


def test_collapse_target_above_source(tmp_path, star_file):
    code, _ = run(tmp_path, "collapse", star_file, "--format", "tree", "--kind", "canonical", "--from", "1", "--to", "2")
    assert code == 2


# === Persistence Tests ===


def test_persistence_report(tmp_path, star_file, capsys):
    code, report = run(tmp_path, "persistence", star_file, "--format", "tree", "--order", "compatible")
    assert code == 0
    results = report["results"]
    assert results["order"] == ["b", "a", "c", "d"]
    assert results["barcode"]["intervals"]["0"] == [[0, 1], [0, 1], [0, 1], [0, None]]
    assert results["barcode"]["intervals"]["1"] == []
    assert results["stats"]["columns"] == 15
    assert capsys.readouterr().out.startswith("degree  birth  death")


def test_persistence_without_shortcut(tmp_path, star_file):
    _, report = run(tmp_path, "persistence", star_file, "--format", "tree", "--no-shortcut")
    assert report["results"]["stats"]["apparent_skipped"] == 0


# === Order Tests ===


def test_compatible_order(tmp_path, star_file, capsys):
    code, report = run(tmp_path, "order", star_file, "--format", "tree")
    assert code == 0
    assert capsys.readouterr().out.strip() == "b a c d"
    assert report["results"]["order"] == ["b", "a", "c", "d"]


def test_reverse_order(tmp_path, star_file):
    _, report = run(tmp_path, "order", star_file, "--format", "tree", "--reverse")
    assert report["results"]["order"] == ["d", "c", "a", "b"]


def test_incompatible_order_fails(tmp_path, star_file):
    code, report = run(tmp_path, "order", star_file, "--format", "tree", "--check", "a,b,c,d")
    assert code == 1
    assertion = report["assertions"][0]
    assert not assertion["passed"]
    assert assertion["witness"] == ["b", "a"]


def test_check_uses_the_given_root(tmp_path, star_file):
    code, report = run(tmp_path, "order", star_file, "--format", "tree", "--root", "a", "--check", "a,b,c,d")
    assert code == 0
    assert report["assertions"][0]["passed"]
    code, report = run(tmp_path, "order", star_file, "--format", "tree", "--root", "b", "--check", "a,b,c,d")
    assert code == 1
    assert report["assertions"][0]["witness"] == ["b", "a"]


def test_check_accepts_compatible_orders(tmp_path, star_file):
    code, report = run(tmp_path, "order", star_file, "--format", "tree", "--check", "b,d,c,a")
    assert code == 0
    assert report["results"]["order"] == ["b", "d", "c", "a"]


def test_order_needs_a_tree_metric(tmp_path, counterexample_file):
    code, report = run(tmp_path, "order", counterexample_file)
    assert code == 2
    assert report["error"]["error_code"] == "precondition.not_a_tree_metric"


# === Gen Tests ===


@pytest.mark.parametrize("kind", ["random-tree", "random-metric", "grid-sample-of-tree", "cycle-graph"])
def test_gen_is_deterministic(tmp_path, kind, capsys):
    assert main(["gen", kind, "--n", "5", "--seed", "3"]) == 0
    first = capsys.readouterr().out
    assert main(["gen", kind, "--n", "5", "--seed", "3"]) == 0
    assert capsys.readouterr().out == first


def test_gen_output_reads_back(tmp_path):
    out = tmp_path / "tree.txt"
    assert main(["gen", "random-tree", "--n", "6", "--seed", "1", "--out", str(out)]) == 0
    code, report = run(tmp_path, "analyze", str(out), "--format", "tree")
    assert code == 0
    assert report["results"]["points"] == 6
    assert report["results"]["delta"] == 0


def test_gen_rejects_zero_weights(tmp_path):
    code, report = run(tmp_path, "gen", "random-tree", "--n", "4", "--low", "0")
    assert code == 2
    assert report["error"]["error_code"] == "input.invalid_parameter"
    with pytest.raises(InvalidParameterError):
        generate("random-metric", 4, 0, low=0)


def test_gen_keeps_explicit_weights():
    dataset = generate("random-tree", 5, 2, low=3, high=3)
    assert "[3, 3]" in dataset.description["distribution"]
    assert all(line.split()[-1] == "3" for line in dataset.text.splitlines() if not line.startswith("root"))


def test_gen_rejects_bad_step(tmp_path):
    code, report = run(tmp_path, "gen", "grid-sample-of-tree", "--n", "3", "--step", "x")
    assert code == 2


# === Verify Tests ===


@pytest.mark.parametrize("pipeline", ["theorem1", "theorem2", "canonical", "perturbed", "refinement", "h1-surjectivity"])
def test_pipelines_pass_on_star(tmp_path, star_file, pipeline):
    code, report = run(tmp_path, "verify", star_file, pipeline, "--format", "tree")
    failed = [a["name"] for a in report["assertions"] if not a["passed"]]
    assert code == 0, failed
    assert report["command"] == f"verify {pipeline}"
    assert report["assertions"]


def test_theorem2_uses_the_supplied_order(tmp_path, star_file):
    code, report = run(tmp_path, "verify", star_file, "theorem2", "--format", "tree", "--order", "b,d,c,a")
    failed = [a["name"] for a in report["assertions"] if not a["passed"]]
    assert code == 0, failed
    assert report["results"]["order"] == ["b", "d", "c", "a"]


@pytest.mark.parametrize(
    "argv",
    [
        ("verify", "theorem2"),
        ("verify", "refinement"),
        ("verify", "perturbed"),
        ("collapse", "--kind", "apparent-zero", "--from", "2"),
        ("collapse", "--kind", "perturbed", "--from", "2"),
        ("gradient", "--kind", "perturbed"),
    ],
    ids=lambda argv: "-".join(a for a in argv if not a.startswith("-")),
)
def test_incompatible_order_is_a_precondition_error(tmp_path, star_file, argv):
    command, *rest = argv
    code, report = run(tmp_path, command, star_file, *rest, "--format", "tree", "--order", "c,d,a,b")
    assert code == 2
    assert report["error"]["error_code"] == "precondition.compatibility"
    assert report["error"]["context"]["parent"] == "b"


def test_allow_incompatible_runs_on_the_supplied_order(tmp_path, star_file):
    code, report = run(
        tmp_path, "verify", star_file, "theorem2", "--format", "tree", "--order", "c,d,a,b", "--allow-incompatible"
    )
    assert code in (0, 1)
    assert report["error"] is None
    assert report["results"]["order"] == ["c", "d", "a", "b"]


def test_theorem1_on_counterexample(tmp_path, counterexample_file):
    code, report = run(tmp_path, "verify", counterexample_file, "theorem1", "--t", "14")
    failed = [a["name"] for a in report["assertions"] if not a["passed"]]
    assert code == 0, failed
    assert report["results"]["threshold"] == 14


def test_apparent_pairs_miss_the_counterexample(tmp_path, counterexample_file):
    code, report = run(tmp_path, "verify", counterexample_file, "apparent-collapse", "--u", "15", "--t", "14")
    assert code == 1
    covers = next(a for a in report["assertions"] if a["name"] == "apparent.covers")
    assert covers["witness"] == [["1", "4"], ["1", "3", "4"]]
    assert report["results"]["uncovered"] == ["{1,4}", "{1,3,4}"]


def test_apparent_collapse_needs_both_scales(tmp_path, counterexample_file):
    code, _ = run(tmp_path, "verify", counterexample_file, "apparent-collapse", "--u", "15")
    assert code == 2
