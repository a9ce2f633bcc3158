"""
End-to-end tests through the command-line entry point
"""

import json

import pandas as pd
import pytest

from mapsplit.cli import main
from mapsplit.config import PROJECT_VERSION


def _data_flags(data):
    return ["--units", str(data["units"]), "--adjacency", str(data["adjacency"])]


class TestCount:
    """Tests for mapsplit count"""

    def test_prints_count(self, isolated, toy_data, capsys):
        """Should print the 3 balanced splits of the toy map on stdout"""
        code = main(["count", *_data_flags(toy_data), "--max-pop-dev", "0.01"])

        assert code == 0
        assert capsys.readouterr().out.strip() == "3"
        assert (isolated / "results" / "count.txt").read_text() == "3\n"

    def test_two_units(self, isolated, pair_data, capsys):
        assert main(["count", *_data_flags(pair_data)]) == 0
        assert capsys.readouterr().out.strip() == "1"

    def test_count_matches_enumerate(self, isolated, toy_data, capsys):
        """Should agree with the number of plans written by enumerate"""
        main(["count", *_data_flags(toy_data), "--max-er", "4"])
        counted = capsys.readouterr().out.strip()
        main(["enumerate", *_data_flags(toy_data), "--max-er", "4", "-o", "enum"])
        emitted = capsys.readouterr().out.strip()

        lines = (isolated / "enum" / "plans.pbm1").read_text().splitlines()
        assert counted == emitted == str(len(lines) - 1)
        assert lines[0].endswith(" source=enumerated")

    def test_missing_column_is_a_data_error(self, isolated, toy_data):
        units = toy_data["units"]
        units.write_text(units.read_text().replace("population", "people"))
        assert main(["count", *_data_flags(toy_data)]) == 2

    def test_missing_units_is_a_config_error(self, isolated):
        assert main(["count"]) == 3

    def test_unwritable_output_exits_1(self, isolated, toy_data):
        """Should exit 1 when the output directory is a regular file"""
        blocker = isolated / "blocker"
        blocker.write_text("")
        assert main(["count", *_data_flags(toy_data), "-o", str(blocker)]) == 1


class TestChain:
    """Tests for mapsplit chain"""

    def test_single_step(self, isolated, run_config_file, capsys):
        """Should record exactly one plan after the header"""
        assert main(["chain", "--steps", "1"]) == 0

        lines = (isolated / "out" / "plans.pbm1").read_text().splitlines()
        assert len(lines) == 2
        assert lines[0].startswith("#pbm1 n=6 graph=")
        assert lines[0].endswith(" source=chain")
        assert capsys.readouterr().out.split()[0] == "1"

    def test_manifest(self, isolated, run_config_file):
        assert main(["chain"]) == 0
        manifest = json.loads((isolated / "out" / "manifest.json").read_text())

        results = manifest["results"]
        assert results["plans"] == 20
        assert results["rng_seed"] == 11
        counters = results["counters"]
        steps = counters.get("accepted", 0) + counters.get("rejected", 0)
        assert steps + counters.get("no_cut", 0) == 20

    def test_repeatable(self, isolated, run_config_file):
        """Should write byte-identical plan files for the same rng_seed"""
        assert main(["chain", "-o", "first"]) == 0
        assert main(["chain", "-o", "second"]) == 0
        first = (isolated / "first" / "plans.pbm1").read_bytes()
        assert first == (isolated / "second" / "plans.pbm1").read_bytes()

    def test_seed_violating_constraints(self, isolated, run_config_file):
        """Should exit 3 when the seed cuts too many edges"""
        assert main(["chain", "--max-er", "3"]) == 3

    def test_missing_rng_seed(self, isolated, toy_data):
        args = ["chain", *_data_flags(toy_data), "--steps", "5", "--seed", str(toy_data["seed"])]
        assert main(args) == 3


class TestAnalyze:
    """Tests for mapsplit analyze"""

    def test_chain_then_analyze(self, isolated, run_config_file, toy_data):
        """Should score every recorded plan and the reference plan"""
        assert main(["chain"]) == 0
        code = main(
            [
                "analyze",
                "--plans",
                "out/plans.pbm1",
                "--reference",
                str(toy_data["seed"]),
                "--mode",
                "two_party",
                "--mode",
                "augmented",
            ]
        )
        assert code == 0

        out = isolated / "out"
        metrics = pd.read_csv(out / "metrics.csv")
        assert len(metrics) == 20
        assert (metrics["pop_dev"] < 0.2).all()

        outcomes = pd.read_csv(out / "outcomes_gov.csv")
        assert set(outcomes["mode"]) == {"two_party", "augmented"}
        assert len(outcomes) == 40

        summary = json.loads((out / "summary.json").read_text())
        assert summary["plans"] == 20
        assert summary["reference"]["plan"] == "7"
        assert summary["elections"]["gov"]["two_party"]["reference"]["dem_seats"] == 1
        assert (out / "hist_er.csv").is_file()

    def test_header_only_plan_file(self, isolated, run_config_file):
        """Should exit 3 for an empty ensemble"""
        (isolated / "empty.pbm1").write_text("#pbm1 n=6\n")
        assert main(["analyze", "--plans", "empty.pbm1"]) == 3

    def test_unknown_contest(self, isolated, run_config_file):
        assert main(["chain"]) == 0
        assert main(["analyze", "--plans", "out/plans.pbm1", "--contest", "senate"]) == 2


class TestTreeprob:
    """Tests for mapsplit treeprob"""

    def test_single_plan(self, isolated, pair_data):
        """Should give the only plan probability 1"""
        assert main(["enumerate", *_data_flags(pair_data)]) == 0
        assert main(["treeprob", *_data_flags(pair_data), "--plans", "results/plans.pbm1"]) == 0

        frame = pd.read_csv(isolated / "results" / "treeprob.csv")
        assert frame.to_dict("records") == [{"er_score": 1, "probability": 1.0, "num_plans": 1}]


class TestBorders:
    """Tests for mapsplit borders"""

    def test_lists_every_border(self, isolated, toy_data):
        assert main(["borders", *_data_flags(toy_data), "--max-length", "0"]) == 0

        frame = pd.read_csv(isolated / "results" / "borders.csv")
        assert len(frame) == 8
        assert frame["removed"].sum() == 1
        shortest = frame.iloc[0]
        assert {shortest["unit_a"], shortest["unit_b"]} == {"B", "D"}
        assert bool(shortest["removed"])


class TestGlobalOptions:
    """Tests for the top-level parser"""

    def test_version(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(["--version"])
        assert info.value.code == 0
        assert PROJECT_VERSION in capsys.readouterr().out

    def test_command_required(self):
        with pytest.raises(SystemExit) as info:
            main([])
        assert info.value.code == 2

    def test_explicit_config(self, isolated, run_config_file, capsys, monkeypatch, empty_dir):
        """Should read --config from anywhere"""
        monkeypatch.chdir(empty_dir)
        assert main(["--config", str(run_config_file), "count"]) == 0
        assert int(capsys.readouterr().out.strip()) > 0
