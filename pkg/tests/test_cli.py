import json
import os
import shutil

from conftest import FIXTURE_DIR
from triplecheck.cli import build_parser, cmd_check_tables, main

GOLDEN_TSV = os.path.join(FIXTURE_DIR, "golden20.tsv")
GOLDEN_SCRIPT = os.path.join(FIXTURE_DIR, "golden20_script.jsonl")


def run_evaluate(tmp_path, out_name="results.jsonl", extra=()):
    out = str(tmp_path / out_name)
    code = main(
        [
            "evaluate",
            "--dataset", GOLDEN_TSV,
            "--mock-script", GOLDEN_SCRIPT,
            "--sample-n", "150",
            "--seed", "42",
            "--validator", "world",
            "--abstain", "exclude",
            "--concurrency", "1",
            "--out", out,
            *extra,
        ]
    )
    return code, out


class TestCheckTables:
    def test_reports_known_violations_and_exits_nonzero(self, capsys):
        code = cmd_check_tables({})
        out = capsys.readouterr().out
        assert code == 1
        assert "65 rows checked, 15 violations" in out
        assert "GPT 3.5 Web" in out

    def test_clean_fixture_exits_zero(self, capsys, monkeypatch):
        import triplecheck.cli as cli_module
        from triplecheck.tables import ReportedRow

        clean = (ReportedRow(1, "d", "m", "v", 0.5, 0.5, 0.5, 0.5),)
        monkeypatch.setattr(cli_module, "REPORTED_ROWS", clean)
        assert cmd_check_tables({}) == 0
        assert "1 rows checked, 0 violations" in capsys.readouterr().out

    def test_corrupted_row_is_listed(self, capsys, monkeypatch):
        import triplecheck.cli as cli_module
        from triplecheck.tables import ReportedRow

        rows = (
            ReportedRow(1, "d", "m", "good", 0.5, 0.5, 0.5, 0.5),
            ReportedRow(1, "d", "m", "corrupted", 0.5, 0.5, 0.9, 0.5),
        )
        monkeypatch.setattr(cli_module, "REPORTED_ROWS", rows)
        assert cmd_check_tables({}) == 1
        out = capsys.readouterr().out
        assert "corrupted" in out and "good row" not in out

    def test_empty_fixture_exits_zero(self, capsys, monkeypatch):
        import triplecheck.cli as cli_module

        monkeypatch.setattr(cli_module, "REPORTED_ROWS", ())
        assert cmd_check_tables({}) == 0

    def test_main_dispatches(self):
        assert main(["check-tables"]) == 1


class TestValidate:
    def test_jsonl_in_jsonl_out(self, tmp_path):
        triples = tmp_path / "in.jsonl"
        triples.write_text(
            json.dumps(
                {
                    "predicted_subject_name": "anaheim_ducks",
                    "predicted_relation": "teamplaysport",
                    "predicted_object_name": "football",
                }
            )
            + "\n"
        )
        script = tmp_path / "script.jsonl"
        script.write_text(
            json.dumps(
                {
                    "response": json.dumps(
                        {
                            "predicted_subject_name": "anaheim_ducks",
                            "predicted_relation": "teamplaysport",
                            "predicted_object_name": "football",
                            "triple_is_valid": False,
                            "reason": "Ice hockey, not football.",
                        }
                    )
                }
            )
            + "\n"
        )
        out = tmp_path / "out.jsonl"
        code = main(
            [
                "validate",
                "--triples", str(triples),
                "--mock-script", str(script),
                "--validator", "world",
                "--concurrency", "1",
                "--out", str(out),
            ]
        )
        assert code == 0
        rows = [json.loads(line) for line in out.read_text().splitlines()]
        assert rows[0]["triple_is_valid"] is False
        assert rows[0]["fallback_used"] is False

    def test_stdin_to_stdout(self, tmp_path, monkeypatch, capsys):
        import io

        monkeypatch.setattr(
            "sys.stdin",
            io.StringIO(
                json.dumps(
                    {
                        "predicted_subject_name": "paris",
                        "predicted_relation": "capital_of",
                        "predicted_object_name": "france",
                    }
                )
                + "\n"
            ),
        )
        script = tmp_path / "script.jsonl"
        script.write_text(
            json.dumps(
                {
                    "response": json.dumps(
                        {
                            "predicted_subject_name": "paris",
                            "predicted_relation": "capital_of",
                            "predicted_object_name": "france",
                            "triple_is_valid": True,
                            "reason": "Paris is the capital of France.",
                        }
                    )
                }
            )
            + "\n"
        )
        code = main(
            [
                "validate",
                "--mock-script", str(script),
                "--validator", "world",
                "--concurrency", "1",
            ]
        )
        assert code == 0
        printed = json.loads(capsys.readouterr().out.strip())
        assert printed["triple_is_valid"] is True

    def test_invalid_verdicts_do_not_fail_the_run(self, tmp_path):
        # exit 0 even when every verdict is INVALID
        code, out = run_evaluate(tmp_path)
        assert code == 0

    def test_exit_2_when_too_many_retry_exhaustions(self, tmp_path):
        triples = tmp_path / "in.jsonl"
        triples.write_text(
            json.dumps(
                {
                    "predicted_subject_name": "s",
                    "predicted_relation": "r",
                    "predicted_object_name": "o",
                }
            )
            + "\n"
        )
        script = tmp_path / "script.jsonl"
        script.write_text(
            "\n".join(json.dumps({"response": "still not json"}) for _ in range(3)) + "\n"
        )
        code = main(
            [
                "validate",
                "--triples", str(triples),
                "--mock-script", str(script),
                "--validator", "world",
                "--concurrency", "1",
                "--out", str(tmp_path / "out.jsonl"),
            ]
        )
        assert code == 2

    def test_missing_dataset_is_config_error(self, tmp_path, capsys):
        code = main(["evaluate", "--mock-script", GOLDEN_SCRIPT])
        assert code == 1
        assert "error:" in capsys.readouterr().err


class TestEvaluate:
    def test_summary_line_in_table_column_order(self, tmp_path, capsys):
        code, out = run_evaluate(tmp_path)
        assert code == 0
        summary = capsys.readouterr().out.strip().splitlines()[-1]
        assert summary.startswith("P=0.78 R=0.70 F1=0.74 Acc=0.72")

    def test_report_and_jsonl_written(self, tmp_path):
        code, out = run_evaluate(tmp_path)
        report_path = os.path.splitext(out)[0] + ".report.json"
        report = json.loads(open(report_path).read())
        assert report["counts"] == {"tp": 7, "fp": 2, "tn": 6, "fn": 3}
        assert report["abstained"] == 2
        assert report["metrics"]["precision"] == 7 / 9
        assert report["metrics"]["recall"] == 7 / 10
        assert report["metrics"]["accuracy"] == 13 / 18
        lines = open(out).read().splitlines()
        assert len(lines) == 20
        first = json.loads(lines[0])
        assert first["record_id"] == "golden20:1"
        assert first["gold"] is True

    def test_sample_n_limits_records(self, tmp_path, capsys):
        out = str(tmp_path / "r.jsonl")
        # n=3 seed=7 over these 20 records selects lines 6, 11 and 15
        script = tmp_path / "s.jsonl"
        responses = []
        for subject, relation, obj in [
            ("shakespeare", "author_of", "hamlet"),
            ("ricky_jay", "occupation", "magician"),
            ("moon", "made_of", "cheese"),
        ]:
            responses.append(
                json.dumps(
                    {
                        "response": json.dumps(
                            {
                                "predicted_subject_name": subject,
                                "predicted_relation": relation,
                                "predicted_object_name": obj,
                                "triple_is_valid": True,
                                "reason": "Accepted for the test run.",
                            }
                        )
                    }
                )
            )
        script.write_text("\n".join(responses) + "\n")
        code = main(
            [
                "evaluate",
                "--dataset", GOLDEN_TSV,
                "--mock-script", str(script),
                "--sample-n", "3",
                "--seed", "7",
                "--validator", "world",
                "--concurrency", "1",
                "--out", out,
            ]
        )
        assert code == 0
        lines = [json.loads(line) for line in open(out).read().splitlines()]
        assert [row["record_id"] for row in lines] == ["golden20:6", "golden20:11", "golden20:15"]


class TestConfigPrecedence:
    def test_flags_beat_env_beat_file(self, tmp_path, monkeypatch, capsys):
        config = tmp_path / "conf"
        config.write_text("model=from-file\nendpoint=http://file\n")
        monkeypatch.setenv("LLM_MODEL", "from-env")
        code, out = run_evaluate(tmp_path, extra=["--config", str(config), "--model", "from-flag"])
        assert code == 0
        report = json.loads(open(os.path.splitext(out)[0] + ".report.json").read())
        assert report["model"] == "from-flag"

    def test_env_beats_file(self, tmp_path, monkeypatch):
        config = tmp_path / "conf"
        config.write_text("model=from-file\n")
        monkeypatch.setenv("LLM_MODEL", "from-env")
        code, out = run_evaluate(tmp_path, extra=["--config", str(config)])
        report = json.loads(open(os.path.splitext(out)[0] + ".report.json").read())
        assert report["model"] == "from-env"

    def test_file_beats_default(self, tmp_path, monkeypatch):
        monkeypatch.delenv("LLM_MODEL", raising=False)
        config = tmp_path / "conf"
        config.write_text("# comment line\nmodel=from-file\n")
        code, out = run_evaluate(tmp_path, extra=["--config", str(config)])
        report = json.loads(open(os.path.splitext(out)[0] + ".report.json").read())
        assert report["model"] == "from-file"

    def test_malformed_config_is_config_error(self, tmp_path, capsys):
        config = tmp_path / "conf"
        config.write_text("just words\n")
        code, _ = run_evaluate(tmp_path, extra=["--config", str(config)])
        assert code == 1

    def test_format_sniffing_rejects_unknown_suffix(self, tmp_path, capsys):
        data = tmp_path / "data.unknown"
        shutil.copyfile(GOLDEN_TSV, data)
        code = main(
            [
                "evaluate",
                "--dataset", str(data),
                "--mock-script", GOLDEN_SCRIPT,
                "--validator", "world",
                "--out", str(tmp_path / "o.jsonl"),
            ]
        )
        assert code == 1


def test_parser_accepts_documented_flags():
    parser = build_parser()
    args = parser.parse_args(
        [
            "evaluate",
            "--dataset", "d.tsv",
            "--format", "tsv",
            "--sample-n", "150",
            "--seed", "42",
            "--validator", "wikidata-web",
            "--model", "m",
            "--endpoint", "http://e",
            "--k", "4",
            "--web-results", "5",
            "--abstain", "invalid",
            "--cache-dir", "/tmp/c",
            "--out", "o.jsonl",
            "--concurrency", "4",
        ]
    )
    assert args.validator == "wikidata-web"
    assert args.sample_n == 150
