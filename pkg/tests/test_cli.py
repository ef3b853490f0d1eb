import pytest

from gid_bribery.cli import EXIT_INFEASIBLE, EXIT_INPUT, EXIT_OK, EXIT_UNSUPPORTED, main
from gid_bribery.fileio import parse_instance

EXAMPLE = """\
agents 5
rule lsr
cost link
goal constructive 1 5
goal destructive 1 3
profile
11000
10000
11000
10010
11110
"""


@pytest.fixture
def example_file(tmp_path):
    path = tmp_path / "example.txt"
    path.write_text(EXAMPLE)
    return path


class TestEval:
    def test_prints_qualified_set(self, example_file, capsys):
        assert main(["eval", str(example_file)]) == EXIT_OK
        assert capsys.readouterr().out.splitlines()[0] == "qualified 3 1 2 4"

    def test_table_and_html(self, example_file, tmp_path, capsys):
        report = tmp_path / "table.html"
        assert main(["eval", str(example_file), "--table", "--html", str(report)]) == EXIT_OK
        assert "qualified" in capsys.readouterr().out
        assert "Socially qualified" in report.read_text()


class TestSolveAndCheck:
    def test_solve_then_check(self, example_file, tmp_path, capsys):
        assert main(["solve", str(example_file)]) == EXIT_OK
        report = capsys.readouterr().out
        assert report.startswith("status OPTIMAL\ncost 2\n")

        solution = tmp_path / "solution.txt"
        solution.write_text(report)
        assert main(["check", str(example_file), str(solution)]) == EXIT_OK
        assert capsys.readouterr().out.strip() == "ok"

    def test_check_catches_a_wrong_cost(self, example_file, tmp_path, capsys):
        solution = tmp_path / "solution.txt"
        solution.write_text("status OPTIMAL\ncost 3\nflips 1\n5 5 +\nqualified 0\n")
        assert main(["check", str(example_file), str(solution)]) == EXIT_INFEASIBLE
        assert capsys.readouterr().out.startswith("cost_mismatch")

    def test_check_reports_goal_violation(self, example_file, tmp_path, capsys):
        solution = tmp_path / "solution.txt"
        solution.write_text("status OPTIMAL\ncost 1\nflips 1\n5 5 +\n")
        assert main(["check", str(example_file), str(solution)]) == EXIT_INFEASIBLE
        assert capsys.readouterr().out.strip() == "goal_violated"

    def test_infeasible(self, tmp_path, capsys):
        path = tmp_path / "boundary.txt"
        path.write_text("agents 2\nrule consent 3 1\ncost agent\ngoal constructive 1 1\nprofile\n10\n01\n")
        assert main(["solve", str(path)]) == EXIT_INFEASIBLE
        assert capsys.readouterr().out == "status INFEASIBLE\n"

    def test_named_solver_outside_its_cell(self, example_file, capsys):
        assert main(["solve", str(example_file), "--algorithm", "consent-link", "--single-thread"]) == EXIT_UNSUPPORTED
        assert capsys.readouterr().out == "status UNSUPPORTED\n"


class TestOracle:
    def test_all_witnesses(self, tmp_path, capsys):
        path = tmp_path / "const.txt"
        path.write_text(EXAMPLE.replace("goal constructive 1 5\ngoal destructive 1 3\n", "goal constructive 5 1 2 3 4 5\n"))
        assert main(["oracle", str(path), "--all-witnesses"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "cost 1\n" in out
        assert "witnesses 4\n" in out

    def test_size_guard(self, example_file, capsys):
        assert main(["oracle", str(example_file), "--max-n", "3"]) == EXIT_UNSUPPORTED
        assert capsys.readouterr().out == "status UNSUPPORTED\n"


class TestGenAndReduce:
    def test_gen_is_reproducible(self, tmp_path):
        first, second = tmp_path / "a.txt", tmp_path / "b.txt"
        args = ["gen", "--n", "6", "--rule", "consent", "--s", "2", "--t", "3", "--cost", "link", "--seed", "17"]
        assert main(args + ["-o", str(first)]) == EXIT_OK
        assert main(args + ["-o", str(second)]) == EXIT_OK
        assert first.read_text() == second.read_text()
        instance = parse_instance(first.read_text())
        assert instance.n == 6 and str(instance.rule) == "consent(2,3)"

    def test_gen_reduction_input_then_reduce(self, tmp_path):
        data, out = tmp_path / "cover.txt", tmp_path / "instance.txt"
        assert main(["gen", "--reduction-input", "setcover", "--seed", "4", "-o", str(data)]) == EXIT_OK
        assert main(["reduce", "setcover", str(data), "--rule", "csr", "-o", str(out)]) == EXIT_OK
        assert str(parse_instance(out.read_text()).rule) == "csr"

    def test_seed_out_of_range(self):
        with pytest.raises(SystemExit):
            main(["gen", "--n", "3", "--seed", "-1"])


class TestInputErrors:
    def test_missing_file(self, tmp_path, capsys):
        assert main(["eval", str(tmp_path / "absent.txt")]) == EXIT_INPUT
        assert capsys.readouterr().err.startswith("error:")

    def test_malformed_instance(self, tmp_path, capsys):
        path = tmp_path / "bad.txt"
        path.write_text("agents 2\nrule lsr\ncost agent\nprofile\n10\n2x\n")
        assert main(["eval", str(path)]) == EXIT_INPUT
        assert "line 6" in capsys.readouterr().err

    def test_consent_rule_needs_parameters(self, capsys):
        assert main(["gen", "--n", "3", "--rule", "consent"]) == EXIT_INPUT
