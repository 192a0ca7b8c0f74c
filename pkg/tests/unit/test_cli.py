import json

import pytest

from holoquot.cli import EXIT_FAILED, EXIT_OK, EXIT_USAGE, main
from holoquot.serialization import export_algebra, write
from tests.utils import hyperbolic_plane

BROKEN = {
    "dim": 4,
    "coframe": ["a", "b", "c", "d"],
    "structure": {"d": [["1", [1, 2]]], "b": [["1", [3, 4]]]},
    "orientation": [1, 2, 3, 4],
}


@pytest.mark.unit
class TestCommands:
    """``holoquot`` subcommands and their exit codes."""

    def test_list(self, capsys):
        assert main(["list"]) == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert len(lines) == 13
        assert lines[0].startswith("balanced_b5t2_a\t")

    def test_run_prints_the_report(self, capsys):
        assert main(["run", "flat_T7", "--suite", "algebra", "--points", "4"]) == EXIT_OK
        captured = capsys.readouterr()
        report = json.loads(captured.out)
        assert report["passed"] is True
        assert report["points"] == 4
        assert "✅ flat_T7 [algebra]" in captured.err

    def test_run_writes_the_report_file(self, capsys, report_path):
        code = main(["run", "flat_T7", "--suite", "algebra", "--report", str(report_path)])
        assert code == EXIT_OK
        assert capsys.readouterr().out == ""
        assert json.loads(report_path.read_text(encoding="utf-8"))["target"] == "flat_T7"

    def test_failing_run(self, capsys, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text(json.dumps(BROKEN), encoding="utf-8")
        assert main(["run", str(path), "--suite", "algebra"]) == EXIT_FAILED
        assert "❌ broken [algebra]" in capsys.readouterr().err

    def test_eval(self, capsys, tmp_path):
        path = write(export_algebra(hyperbolic_plane()), tmp_path / "h2.json")
        assert main(["eval", "scal", str(path), "--point", "y=2"]) == EXIT_OK
        result = json.loads(capsys.readouterr().out)
        assert result["value"] == pytest.approx(-2.0)
        assert result["point"] == {"y": 2.0}

    def test_export(self, tmp_path):
        target = tmp_path / "out.json"
        assert main(["export", "flat_T7", "-o", str(target)]) == EXIT_OK
        assert json.loads(target.read_text(encoding="utf-8"))["dim"] == 7


@pytest.mark.unit
class TestUsageErrors:
    def test_unknown_target(self, capsys):
        assert main(["run", "no_such_entry"]) == EXIT_USAGE
        assert "unknown target" in capsys.readouterr().err

    def test_unknown_suite(self):
        assert main(["run", "flat_T7", "--suite", "everything"]) == EXIT_USAGE

    def test_parse_error(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{", encoding="utf-8")
        assert main(["export", str(path)]) == EXIT_USAGE

    def test_unknown_generator_in_eval(self):
        assert main(["eval", "(* 2 zeta)", "flat_T7"]) == EXIT_USAGE

    def test_point_with_unknown_generator(self, capsys, tmp_path):
        path = write(export_algebra(hyperbolic_plane()), tmp_path / "h2.json")
        assert main(["eval", "scal", str(path), "--point", "zeta=1"]) == EXIT_USAGE
        assert "zeta" in capsys.readouterr().err

    def test_point_leaving_a_generator_unassigned(self, tmp_path):
        path = write(export_algebra(hyperbolic_plane()), tmp_path / "h2.json")
        assert main(["eval", "(* 2 y)", str(path), "--point", ""]) == EXIT_USAGE

    def test_invalid_settings(self, capsys):
        assert main(["run", "flat_T7", "--tol=-1"]) == EXIT_USAGE
        assert "tol must be positive" in capsys.readouterr().err

    def test_bad_point(self):
        with pytest.raises(SystemExit) as excinfo:
            main(["eval", "scal", "flat_T7", "--point", "y"])
        assert excinfo.value.code == 2

    def test_missing_command(self):
        with pytest.raises(SystemExit) as excinfo:
            main([])
        assert excinfo.value.code == 2
