"""Command-line harness: output contract, reproducibility, exit codes."""

import csv
import json
import re

import pytest

from rmtlab.cli import ACCEPTANCE_CRITERIA, build_parser, main

ALL_SUBCOMMANDS = ("sample-gue", "correlator", "hciz", "dh-check",
                   "kernel-check", "theorem1", "acceptance")


def run_cli(args, capsys):
    code = main(args)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def parse_record(out: str) -> dict:
    return json.loads(out[out.index("{"):])


class TestHelpAndStructure:
    def test_all_subcommands_registered(self):
        text = build_parser().format_help()
        for name in ALL_SUBCOMMANDS:
            assert name in text

    def test_help_describes_each_check(self):
        # --help must map each subcommand to the check it drives
        text = build_parser().format_help()
        for fragment in ("semicircle", "determinant", "fixed-point",
                         "heat-equation", "Gram", "acceptance criterion"):
            assert fragment in text


class TestOutputContract:
    def test_csv_header_and_error_column(self, capsys):
        code, out, _ = run_cli(["dh-check", "--space", "cp1", "--t", "1.0"], capsys)
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "quantity,re,im,error,error_kind"
        rows = list(csv.DictReader(out[:out.index("{")].strip().splitlines()))
        assert all(r["error_kind"] for r in rows)  # every number is annotated

    def test_localization_example_value(self, capsys):
        code, out, _ = run_cli(["dh-check", "--space", "cp1", "--t", "1.0"], capsys)
        record = parse_record(out)
        numeric = next(r for r in record["rows"] if r["quantity"] == "numeric_integral")
        assert numeric["re"] == pytest.approx(0.841471, abs=1e-6)
        assert abs(numeric["error"]) <= 1e-6

    def test_trivial_correlator_is_exact_one(self, capsys):
        code, out, _ = run_cli(["correlator", "--mode", "mc", "--size", "1",
                                "--samples", "1000"], capsys)
        assert code == 0
        record = parse_record(out)
        mean = next(r for r in record["rows"] if r["quantity"] == "correlator_mc")
        assert (mean["re"], mean["im"], mean["error"]) == (1.0, 0.0, 0.0)

    def test_out_files_written(self, tmp_path, capsys):
        base = str(tmp_path / "run")
        code, _, _ = run_cli(["theorem1", "--size", "4", "--m", "2",
                              "--samples", "20000", "--out", base], capsys)
        assert code == 0
        record = json.loads((tmp_path / "run.json").read_text())
        assert record["ok"] is True
        with open(base + ".csv") as fh:
            rows = list(csv.DictReader(fh))
        assert {"gaussian_lhs", "trace_mean"} <= {r["quantity"] for r in rows}


class TestReproducibility:
    def test_identical_runs_identical_records(self, capsys):
        args = ["correlator", "--mode", "mc", "--size", "4",
                "--mu1b", "0.1+1j", "--mu2b=-0.1-1j",
                "--samples", "5000", "--seed", "3"]
        _, out1, _ = run_cli(args, capsys)
        _, out2, _ = run_cli(args, capsys)
        strip = lambda s: re.sub(r'"wall_time_s": [0-9.e-]+', "", s)
        assert strip(out1) == strip(out2)

    def test_thread_count_does_not_change_results(self, capsys):
        base = ["correlator", "--mode", "mc", "--size", "4",
                "--mu1b", "0.1+1j", "--mu2b=-0.1-1j",
                "--samples", "5000", "--seed", "3"]
        _, out1, _ = run_cli(base + ["--threads", "1"], capsys)
        _, out4, _ = run_cli(base + ["--threads", "4"], capsys)
        assert parse_record(out1)["rows"] == parse_record(out4)["rows"]


class TestExitCodes:
    def test_usage_error_is_two(self, capsys):
        code, _, err = run_cli(["kernel-check", "--alpha", "0.8,-0.5,0.1",
                                "--beta", "0.7,-0.6,0.2", "--t=-1.0"], capsys)
        assert code == 2 and "error" in err

    def test_unsupported_route_is_two(self, capsys):
        code, _, _ = run_cli(["hciz", "--group", "unitary", "--method", "quad",
                              "--x", "1,2", "--y", "0.5,1.5"], capsys)
        assert code == 2

    def test_numeric_failure_is_one(self, capsys):
        # force an unconverged quadrature via an unreachable tolerance
        code, out, _ = run_cli(["correlator", "--mode", "exact", "--size", "8",
                                "--mu1b", "0.4+1j", "--mu2b=-0.2-1j",
                                "--tol", "1e-30"], capsys)
        assert code == 1
        assert parse_record(out)["ok"] is False

    def test_unknown_subcommand_is_two(self):
        with pytest.raises(SystemExit) as exc:
            main(["no-such-command"])
        assert exc.value.code == 2


class TestAcceptanceWiring:
    def test_twelve_criteria_registered(self):
        assert len(ACCEPTANCE_CRITERIA) == 12
        names = [name for name, _ in ACCEPTANCE_CRITERIA]
        assert len(set(names)) == 12

    def test_negative_control_fixture_fails_the_row(self):
        # breaking the stored measure constant must flip the quadrature row
        from rmtlab.cli import _criterion_3
        passed, margin = _criterion_3(break_disk_factor=True)
        assert not passed
        assert "limit" in margin
