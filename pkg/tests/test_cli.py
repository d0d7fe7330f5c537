import os

import pytest

from csma_backoff.cli import main, parse_int_list


def read(path):
    with open(path, "rb") as fh:
        return fh.read()


class TestParsing:
    def test_range(self):
        assert parse_int_list("5..8") == [5, 6, 7, 8]

    def test_comma_list(self):
        assert parse_int_list("3,5,7") == [3, 5, 7]

    def test_single(self):
        assert parse_int_list("50") == [50]


class TestExitCodes:
    def test_unknown_flag(self, capsys):
        assert main(["analytic", "--bogus"]) == 1

    def test_unknown_subcommand(self, capsys):
        assert main(["frobnicate"]) == 1

    def test_malformed_config(self, tmp_path, capsys):
        conf = tmp_path / "bad.ini"
        conf.write_text("[mac]\nnope = 1\n")
        assert main(["analytic", "--config", str(conf),
                     "--out", str(tmp_path / "out")]) == 1


class TestAnalytic:
    def test_cardinality(self, tmp_path, capsys):
        out = tmp_path / "out"
        code = main(["analytic", "--strategy", "both", "--n", "5..7",
                     "--m", "3,5", "--out", str(out)])
        assert code == 0
        lines = read(out / "analytic.csv").decode().strip().splitlines()
        assert len(lines) == 1 + 2 * 3 * 2

    def test_determinism(self, tmp_path, capsys):
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        argv = ["analytic", "--strategy", "proposed", "--n", "5,10",
                "--m", "3"]
        assert main(argv + ["--out", str(out_a)]) == 0
        assert main(argv + ["--out", str(out_b)]) == 0
        assert read(out_a / "analytic.csv") == read(out_b / "analytic.csv")

    def test_gnuplot_flag(self, tmp_path, capsys):
        out = tmp_path / "out"
        assert main(["analytic", "--n", "5", "--m", "3", "--out", str(out),
                     "--gnuplot"]) == 0
        assert (out / "analytic.dat").exists()


class TestSimulate:
    def test_outputs_and_determinism(self, tmp_path, capsys):
        argv = ["simulate", "--strategy", "proposed", "--n", "3", "--m", "3",
                "--slots", "20000", "--warmup", "1000", "--seed", "9",
                "--runs", "2"]
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        assert main(argv + ["--out", str(out_a)]) == 0
        assert main(argv + ["--out", str(out_b)]) == 0
        for name in ("metrics.csv", "delays_proposed_N3_m3_seed9.csv",
                     "delays_proposed_N3_m3_seed10.csv"):
            assert read(out_a / name) == read(out_b / name)
        header = read(out_a / "metrics.csv").decode().splitlines()[0]
        assert header == ("strategy,N,m,W,seed,slots,idle,success,collision,"
                          "sim_time_s,throughput_bps")

    def test_delay_file_header(self, tmp_path, capsys):
        out = tmp_path / "out"
        assert main(["simulate", "--strategy", "classical", "--n", "2",
                     "--m", "3", "--slots", "5000", "--warmup", "500",
                     "--seed", "1", "--out", str(out)]) == 0
        lines = read(
            out / "delays_classical_N2_m3_seed1.csv").decode().splitlines()
        assert lines[0] == "delay_s"
        assert len(lines) > 1


class TestValidate:
    def test_small_grid(self, tmp_path, capsys):
        out = tmp_path / "out"
        assert main(["validate", "--strategy", "proposed", "--n", "5",
                     "--m", "3", "--slots", "200000", "--warmup", "1000",
                     "--seed", "1", "--out", str(out)]) == 0
        lines = read(out / "validation.csv").decode().strip().splitlines()
        assert len(lines) == 2
        err = float(lines[1].split(",")[-1])
        assert err < 0.02


class TestDelayCdf:
    def test_gain_table(self, tmp_path, capsys):
        out = tmp_path / "out"
        assert main(["delay-cdf", "--strategy", "both", "--n", "5",
                     "--m", "3", "--slots", "50000", "--warmup", "1000",
                     "--runs", "2", "--seed", "3", "--out", str(out)]) == 0
        assert (out / "quantiles.csv").exists()
        lines = read(out / "gains_N5_m3.csv").decode().strip().splitlines()
        assert lines[0] == "q,proposed_ms,classical_ms,gain_pct"
        assert len(lines) == 5


class TestOccupancy:
    def test_rows_per_stage(self, tmp_path, capsys):
        out = tmp_path / "out"
        assert main(["occupancy", "--strategy", "both", "--n", "5",
                     "--m", "3", "--slots", "100000", "--warmup", "1000",
                     "--seed", "2", "--out", str(out)]) == 0
        lines = read(out / "occupancy.csv").decode().strip().splitlines()
        assert len(lines) == 1 + 2 * 4
