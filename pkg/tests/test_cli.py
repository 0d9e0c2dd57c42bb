from __future__ import annotations

import json

import pytest
from click.testing import CliRunner

from hitstand.cli import cli


@pytest.fixture
def run():
    runner = CliRunner(mix_stderr=False) if "mix_stderr" in CliRunner.__init__.__code__.co_varnames else CliRunner()

    def invoke(*args):
        return runner.invoke(cli, list(args))

    return invoke


class TestCommands:
    def test_strategy_no_up(self, run):
        res = run("strategy", "--visibility", "no-up")
        assert res.exit_code == 0, res.output
        assert "| Hard 15 - 20 | S |" in res.output

    def test_strategy_csv(self, run):
        res = run("strategy", "--visibility", "one-up", "--format", "csv")
        assert res.exit_code == 0
        assert len(res.output.strip().splitlines()) == 261

    def test_cell(self, run):
        res = run("cell", "--player", "soft13", "--dealer", "hard14")
        assert res.exit_code == 0, res.output
        assert "27679/115056" in res.output and "-2/51" in res.output

    def test_cell_one_up_jsonl(self, run):
        res = run("cell", "--visibility", "one-up", "--player", "hard16", "--dealer", "A", "--format", "jsonl")
        row = json.loads(res.output)
        assert row["dealer"] == "11" and row["decision"] == "S"

    def test_cell_needs_dealer_info(self, run):
        assert run("cell", "--player", "hard16").exit_code == 2

    def test_stage1(self, run):
        res = run("stage1", "--player-layout", "A,2", "--dealer-layout", "6,8", "--format", "csv")
        assert res.exit_code == 0
        assert "23/48" in res.output and "89/2256" in res.output

    def test_stage1_natural_is_usage_error(self, run):
        assert run("stage1", "--player-layout", "A,K", "--dealer-layout", "6,8").exit_code == 2

    def test_overall(self, run):
        res = run("overall", "--visibility", "no-up", "--format", "jsonl", "--precision", "7")
        row = json.loads(res.output)
        assert row["E[X]"] == "0.0089019"

    def test_simulate(self, run):
        res = run("simulate", "--visibility", "no-up", "--trials", "5000", "--seed", "3", "--format", "jsonl")
        row = json.loads(res.output)
        assert row["trials"] == 5000 and row["seed"] == 3

    def test_verify_pass_and_list(self, run):
        assert run("verify-paper", "--suite", "replacement-diffs").exit_code == 0
        listed = run("verify-paper", "--list").output.split()
        assert "overall" in listed and "dealer-rules" in listed

    def test_verify_failure_exit(self, run):
        # The printed stand expectation of the worked cell does not follow
        # from its own terms, so this suite has a mismatch.
        assert run("verify-paper", "--suite", "worked-example").exit_code == 1

    def test_sweep_rules_figure(self, run, tmp_path):
        res = run("sweep-rules", "--visibility", "no-up", "--format", "csv", "--figures", str(tmp_path))
        assert res.exit_code == 0
        assert (tmp_path / "rule-sweep.png").stat().st_size > 0
        assert res.output.count("no-up") == 10

    def test_sweep_decks_figure(self, run, tmp_path):
        res = run("sweep-decks", "--visibility", "no-up", "--n-list", "1,2,4", "--figures", str(tmp_path), "-o", str(tmp_path / "s.csv"), "--format", "csv")
        assert res.exit_code == 0
        lines = (tmp_path / "s.csv").read_text().splitlines()
        assert len(lines) == 5 and lines[-1].startswith("no-up,inf")
        assert (tmp_path / "deck-sweep.png").exists()

    def test_report(self, run, tmp_path):
        res = run("report", "--visibility", "no-up", "--n-list", "1,2", "--out", str(tmp_path))
        assert res.exit_code == 0, res.output
        names = {p.name for p in tmp_path.iterdir()}
        assert {"overall.csv", "sweep-rules.csv", "sweep-decks.csv", "strategy-no-up.csv", "rule-sweep.png", "deck-sweep.png"} <= names


class TestUsageErrors:
    def test_sweep_decks_rejects_decks(self, run):
        res = run("sweep-decks", "--decks", "inf")
        assert res.exit_code == 2

    @pytest.mark.parametrize("args", [["strategy", "--decks", "0"], ["strategy", "--visibility", "three-up"], ["strategy", "--dealer", "Z9"], ["sweep-decks", "--n-list", "4,2"], ["verify-paper", "--suite", "nope"]])
    def test_bad_values(self, run, args):
        assert run(*args).exit_code == 2


class TestConfigFile:
    def test_defaults_and_sections(self, run, tmp_path):
        ini = tmp_path / "run.ini"
        ini.write_text("[defaults]\nprecision = 3\nformat = jsonl\n[overall]\nvisibility = no-up\n")
        res = run("--config", str(ini), "overall")
        assert res.exit_code == 0, res.output
        assert json.loads(res.output)["E[X]"] == "0.009"

    def test_flags_override_file(self, run, tmp_path):
        ini = tmp_path / "run.ini"
        ini.write_text("[defaults]\nformat = jsonl\nvisibility = no-up\n")
        res = run("--config", str(ini), "strategy", "--format", "markdown")
        assert "| Soft 18 - 20 | S |" in res.output

    def test_dealer_default_means_the_rule(self, run, tmp_path):
        ini = tmp_path / "run.ini"
        ini.write_text("[defaults]\ndealer = S17\npeek = false\n[cell]\nvisibility = one-up\n")
        res = run("--config", str(ini), "cell", "--player", "hard16", "--dealer", "10", "--format", "jsonl")
        assert res.exit_code == 0, res.output
        row = json.loads(res.output)
        assert row["dealer_rule"] == "S17" and row["dealer"] == "10" and row["peek"] == "false"

    @pytest.mark.parametrize("text", ["[defaults]\nbogus = 1\n", "[strategy]\ntrials = 5\n", "[nosuch]\nx = 1\n", "not ini"])
    def test_unknown_keys_rejected(self, run, tmp_path, text):
        ini = tmp_path / "bad.ini"
        ini.write_text(text)
        assert run("--config", str(ini), "strategy").exit_code == 2
