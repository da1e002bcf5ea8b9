"""Command-line behavior: exit codes, schemas, determinism, config files."""

import json

import numpy as np
import pytest

from trihive.cli import (ExperimentConfig, KNOWN_STATISTICS, build_parser,
                         main, run_concentration)
from trihive.errors import TrihiveError


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_no_command_prints_help_and_fails(capsys):
    code, out, _ = run(capsys, )
    assert code == 1
    assert "usage:" in out


def test_usage_error_exit_code(capsys):
    code, _, err = run(capsys, "sample", "--n", "3")   # missing --seed
    assert code == 1


def test_domain_error_exit_code(capsys):
    code, _, err = run(capsys, "lr", "--lam", "9,9", "--mu", "9,9",
                       "--nu", "9,9,9,9,9,9,9")
    assert code == 2
    assert "error:" in err


def test_help_exits_cleanly(capsys):
    assert run(capsys, "--help")[0] == 0


def test_sample_csv_roundtrip_and_determinism(capsys):
    args = ("sample", "--n", "2", "--seed", "5", "--samples", "4",
            "--burn-in", "50", "--thin", "2")
    code, out1, _ = run(capsys, *args)
    assert code == 0
    assert out1.startswith("# schema=trihive.samples.v1")
    code, out2, _ = run(capsys, *args)
    assert out1 == out2
    assert len(out1.strip().splitlines()) == 1 + 4


def test_spectrum_json_fields(capsys):
    code, out, _ = run(capsys, "spectrum", "--n", "3", "--seed", "2",
                       "--burn-in", "200", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["schema"] == "trihive.spectrum.v1"
    assert len(payload["dominant_mode"]) == 2
    assert 0.0 <= payload["mode_mass"] <= 1.0


def test_witness_json_at_n4(capsys):
    code, out, _ = run(capsys, "witness", "--n", "4", "--s", "2,2,2", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["schema"] == "trihive.witness.v1"
    assert payload["member"] is True
    assert payload["linf"] >= 4.0
    assert payload["bound"] == pytest.approx(4.0)


def test_exact_volume_json_matches_golden(capsys):
    code, out, _ = run(capsys, "volume", "--n", "2", "--method", "exact")
    assert code == 0
    payload = json.loads(out)
    assert payload["schema"] == "trihive.volume.v1"
    assert payload["method"] == "exact3d"
    assert payload["volume"] == pytest.approx(8.0, rel=1e-9)


def test_exact_volume_rejected_above_n2(capsys):
    code, _, err = run(capsys, "volume", "--n", "3", "--method", "exact")
    assert code == 2


def test_mc_volume_needs_a_seed(capsys):
    code, _, err = run(capsys, "volume", "--n", "3")
    assert code == 2
    assert "seed" in err


def test_lr_prints_the_count(capsys):
    code, out, _ = run(capsys, "lr", "--lam", "2,1", "--mu", "2,1",
                       "--nu", "3,2,1")
    assert code == 0
    assert out.strip() == "2"
    code, out, _ = run(capsys, "lr", "--lam", "2,1", "--mu", "2,1",
                       "--nu", "3,2,1", "--json")
    payload = json.loads(out)
    assert payload["schema"] == "trihive.lr.v1"
    assert payload["count"] == 2


def test_honeycomb_outputs(tmp_path, capsys):
    svg = tmp_path / "d.svg"
    code, out, _ = run(capsys, "honeycomb", "--n", "3", "--svg", str(svg),
                       "--json")
    assert code == 0
    assert svg.exists()
    payload = json.loads(out)
    assert payload["schema"] == "trihive.honeycomb.v1"
    assert len(payload["points"]) == 18


def test_out_directory_collects_files(tmp_path, capsys):
    code, out, _ = run(capsys, "sample", "--n", "2", "--seed", "1",
                       "--samples", "2", "--burn-in", "20",
                       "--out", str(tmp_path / "res"))
    assert code == 0
    assert out == ""
    assert (tmp_path / "res" / "samples_n2.csv").exists()


class TestConcentrate:

    def test_config_validation(self):
        with pytest.raises(TrihiveError):
            ExperimentConfig(n_list=())
        with pytest.raises(TrihiveError):
            ExperimentConfig(n_list=(8, 4))
        with pytest.raises(TrihiveError):
            ExperimentConfig(n_list=(4,), samples=0)
        with pytest.raises(TrihiveError):
            ExperimentConfig(n_list=(4,), statistics=("entropy",))

    def test_rerun_is_identical_and_time_goes_to_stderr(self, capsys):
        argv = ("concentrate", "--n-list", "2,3", "--samples", "5",
                "--seed", "9", "--burn-in-factor", "1", "--stats",
                "linf_over_n2,l2_over_n3")
        code, out1, err1 = run(capsys, *argv)
        assert code == 0
        code, out2, _ = run(capsys, *argv)
        assert out1 == out2
        assert "wall_time_s" in err1
        lines = out1.strip().splitlines()
        assert lines[0] == "# schema=trihive.concentration.v1"
        assert lines[1] == ("n,samples,linf_over_n2_median,"
                            "linf_over_n2_q90,l2_over_n3_mean")
        assert len(lines) == 2 + 2

    def test_flags_override_the_config_file(self, tmp_path, capsys):
        cfg = tmp_path / "sweep.cfg"
        cfg.write_text("# comment line\nn_list = 2\nseed = 4\nsamples = 3\n"
                       "burn_in_factor = 1\nstats = sobolev\n")
        code, out, _ = run(capsys, "concentrate", "--config", str(cfg))
        assert code == 0
        assert out.splitlines()[1] == "n,samples,sobolev_over_n_mean"
        code, out, _ = run(capsys, "concentrate", "--config", str(cfg),
                           "--stats", "dominant_mode_mass")
        assert out.splitlines()[1] == "n,samples,dominant_mode_mass_mean"

    def test_malformed_config_line(self, tmp_path, capsys):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("n_list 2,3\n")
        code, _, err = run(capsys, "concentrate", "--config", str(cfg))
        assert code == 2

    def test_statistic_columns_match_the_request(self):
        cfg = ExperimentConfig(n_list=(2,), samples=4, seed=0,
                               burn_in_factor=1.0,
                               statistics=KNOWN_STATISTICS)
        text = run_concentration(cfg)
        header = text.splitlines()[1].split(",")
        assert header == ["n", "samples", "linf_over_n2_median",
                          "linf_over_n2_q90", "l2_over_n3_mean",
                          "sobolev_over_n_mean", "dominant_mode_mass_mean"]


def test_parser_lists_all_subcommands():
    text = build_parser().format_help()
    for sub in ("sample", "spectrum", "volume", "witness", "honeycomb",
                "lr", "concentrate"):
        assert sub in text
