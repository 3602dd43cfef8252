import json

import pytest

from idealgames import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    return code, capsys.readouterr().out


class TestClassify:
    def test_evens_density(self, capsys):
        code, out = run(capsys, "classify", "--ideal", "density0", "--set", "ap(2,2)")
        payload = json.loads(out)
        assert code == 0
        assert payload["verdict"]["value"] == "NotInIdeal"

    def test_undecided_exit_two(self, capsys):
        code, out = run(
            capsys, "classify", "--ideal", "fin", "--set", "finite{1}",
            "--mode", "horizon", "-N", "100",
        )
        assert code == 2
        assert json.loads(out)["verdict"]["value"] == "Undecided"

    def test_parse_error_exit_one(self, capsys):
        code = cli.main(["classify", "--ideal", "fin", "--set", "ap(2"])
        assert code == 1

    def test_horizon_cap(self, capsys, monkeypatch):
        monkeypatch.setenv("IDEALGAMES_HORIZON_CAP", "1000")
        code = cli.main(
            ["classify", "--ideal", "fin", "--set", "tail(1)",
             "--mode", "horizon", "-N", "2000"]
        )
        assert code == 1


class TestCluster:
    def test_alternating(self, capsys):
        code, out = run(
            capsys, "cluster", "--seq", "alt(0,1)", "--ideal", "density0",
            "-N", "10000", "--eps", "0.05",
        )
        payload = json.loads(out)
        assert code == 0
        assert payload["points"] == [0.0, 1.0]
        assert payload["flags"] == []

    def test_undecided_dominated_exit(self, capsys):
        code, out = run(
            capsys, "cluster", "--seq", "ratenum", "--ideal", "summable",
            "-N", "10000",
        )
        assert code == 2

    def test_limit(self, capsys):
        code, out = run(
            capsys, "limit", "--seq", "alt(0,1)", "--ideal", "density0",
            "-N", "10000",
        )
        assert code == 0
        assert json.loads(out)["points"] == [0.0, 1.0]


class TestPreserve:
    def test_evens_break_preservation(self, capsys):
        code, out = run(
            capsys, "preserve", "--seq", "alt(0,1)", "--ideal", "density0",
            "--kind", "gamma", "--transform", "set(ap(2,2))", "-N", "10000",
        )
        payload = json.loads(out)
        assert code == 0
        assert payload["preserved"] is False and payload["decided"] is True

    def test_perm_transform(self, capsys):
        code, out = run(
            capsys, "preserve", "--seq", "alt(0,1)", "--ideal", "fin",
            "--transform", "perm-stem[2,1]", "-N", "10000",
        )
        assert code == 0
        assert json.loads(out)["preserved"] is True


class TestGameAndVerify:
    def test_transcript_file_and_verify(self, capsys, tmp_path):
        path = tmp_path / "t.jsonl"
        code = cli.main(
            ["game", "--ideal", "summable", "--strat-i", "exp",
             "--rounds", "50", "--out", str(path)]
        )
        assert code == 0
        final = json.loads(path.read_text().splitlines()[-1])
        assert final["verdict"]["value"] == "NotInIdeal"
        code2, out = run(capsys, "verify", "--transcript", str(path))
        assert code2 == 0
        assert json.loads(out)["ok"] is True

    def test_randjump_requires_seed(self, capsys):
        assert cli.main(["game", "--ideal", "fin", "--strat-i", "randjump"]) == 1

    def test_tamper_detected(self, capsys, tmp_path):
        path = tmp_path / "t.jsonl"
        cli.main(["game", "--ideal", "fin", "--rounds", "5", "--out", str(path)])
        lines = path.read_text().splitlines()
        round0 = json.loads(lines[0])
        round0["F"] = [[round0["c"] + 5, round0["c"] + 9]]
        lines[0] = json.dumps(round0)
        path.write_text("\n".join(lines) + "\n")
        code, out = run(capsys, "verify", "--transcript", str(path))
        assert code == 1
        assert json.loads(out)["problems"]


class TestGeneric:
    def test_witness_mode(self, capsys, tmp_path):
        path = tmp_path / "w.jsonl"
        code = cli.main(
            ["generic", "--mode", "sigma-witness", "--seq", "alt(0,1)",
             "--ideal", "density0", "--rounds", "12", "--out", str(path)]
        )
        assert code == 0
        code2, out = run(capsys, "verify", "--transcript", str(path))
        assert code2 == 0

    def test_game_mode_random_needs_seed(self, capsys):
        code = cli.main(
            ["generic", "--mode", "sigma-game", "--seq", "alt(0,1)",
             "--ideal", "density0", "--oracles", "random"]
        )
        assert code == 1

    def test_pi_mode_round_trip(self, capsys, tmp_path):
        path = tmp_path / "p.jsonl"
        code = cli.main(
            ["generic", "--mode", "pi-game", "--seq", "alt(0,1)",
             "--ideal", "density0", "--rounds", "5", "--oracles", "random",
             "--seed", "7", "--out", str(path)]
        )
        assert code == 0
        code2, _ = run(capsys, "verify", "--transcript", str(path))
        assert code2 == 0


class TestSeriesCommand:
    def test_steering_transcript(self, capsys, tmp_path):
        path = tmp_path / "s.jsonl"
        code = cli.main(
            ["series", "--seq", "ratenum-signed", "--rounds", "10",
             "--c-step", "20", "--out", str(path)]
        )
        assert code == 0
        code2, out = run(capsys, "verify", "--transcript", str(path))
        assert code2 == 0

    def test_sigma_verdict(self, capsys):
        code, out = run(
            capsys, "series", "--seq", "alt(1,-1)", "--ideal", "density0",
            "--sigma", "stem[1,2,3]", "-N", "1000",
        )
        assert code == 0
        assert json.loads(out)["verdict"]["value"] == "InIdeal"

    def test_sigma_from_file(self, capsys, tmp_path):
        stem_file = tmp_path / "stem.json"
        stem_file.write_text("[2, 4, 6, 8]")
        code, out = run(
            capsys, "series", "--seq", "alt(1,-1)", "--ideal", "fin",
            "--sigma", f"stem@{stem_file}", "-N", "500",
        )
        assert code == 0


class TestMcCommand:
    def test_report_and_csv(self, capsys, tmp_path):
        out_file = tmp_path / "rep.json"
        csv_file = tmp_path / "batches.csv"
        code = cli.main(
            ["mc", "--seq", "alt(0,1)", "--ideal", "fin", "--kind", "gamma",
             "--samples", "100", "-N", "2000", "--seed", "7",
             "--out", str(out_file), "--csv", str(csv_file),
             "--batch-size", "25"]
        )
        assert code == 0
        payload = json.loads(out_file.read_text())
        assert payload["samples"] == 100
        rows = csv_file.read_text().splitlines()
        assert rows[0].startswith("batch_end")
        assert len(rows) == 5

    def test_seed_required(self, capsys):
        with pytest.raises(SystemExit):
            cli.main(["mc", "--seq", "alt(0,1)", "--ideal", "fin",
                      "--samples", "100"])


class TestWitnessCommand:
    def test_report(self, capsys):
        code, out = run(
            capsys, "witness", "--ideal", "density0", "--trials", "10",
            "--seed", "3", "-N", "100000",
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["fraction"] == 1.0
        assert payload["iota_prefix"][:4] == [2, 4, 8, 16]


class TestDeterminism:
    def test_identical_seeds_identical_bytes(self, tmp_path):
        paths = []
        for name in ("a", "b"):
            p = tmp_path / f"{name}.jsonl"
            cli.main(
                ["generic", "--mode", "sigma-game", "--seq", "alt(0,1)",
                 "--ideal", "density0", "--rounds", "8", "--oracles", "random",
                 "--seed", "123", "--strat-i", "linear:10", "--out", str(p)]
            )
            paths.append(p.read_bytes())
        assert paths[0] == paths[1]
