import dataclasses
import json
import os

import numpy as np
import pytest

from quartetsim.cli import (
    ConfigError,
    RunConfig,
    fmt,
    load_config,
    main,
    parse_config_text,
    serialize_config,
)

PAPER_CFG = """
# experimental reference configuration
dgs_mhz = 2.25
delta_mhz = -4
omega1_mhz = 3.125
pulse_ns = 80
dtau_ns = 60
"""


@pytest.fixture
def paper_config_path(tmp_path):
    path = tmp_path / "paper.cfg"
    path.write_text(PAPER_CFG, encoding="utf-8")
    return str(path)


def run(*argv):
    return main(list(argv))


class TestConfigParsing:
    def test_paper_configuration_defaults(self):
        config = parse_config_text(PAPER_CFG)
        assert config.dgs_mhz == 2.25
        assert config.delta_mhz == -4.0
        assert config.omega1_mhz == 3.125
        assert config.pulse_ns == 80.0
        assert config.dtau_ns == 60.0
        # defaults that complete the experimental configuration
        assert config.n_samples == 512
        assert config.initial_state == "mixed_half"
        assert config.observable == "o2"
        assert config.pulse_model == "exact"
        assert config.pulse_phase_rad == 0.0
        assert config.t2star_us is None

    def test_round_trip(self):
        config = parse_config_text(PAPER_CFG)
        assert parse_config_text(serialize_config(config)) == config
        full = dataclasses.replace(
            config, t2star_us=3.5, assign_tol_mhz=0.03255208333333333, mean_subtract=False
        )
        assert parse_config_text(serialize_config(full)) == full

    @pytest.mark.parametrize(
        "line,match",
        [
            ("unknown_key = 1", "unknown key"),
            ("dgs_mhz = 2.25\ndgs_mhz = 3", "duplicate"),
            ("dgs_mhz == 1", "invalid value"),
            ("dgs_mhz", "expected 'key = value'"),
            ("dtau_ns = 0", "dtau_ns"),
            ("pulse_ns = -5", "pulse_ns"),
            ("delta_step_mhz = 0", "delta_step_mhz"),
            ("n_samples = 1", "n_samples"),
            ("zero_pad = 0", "zero_pad"),
            ("mean_subtract = yes", "true"),
            ("pulse_model = soft", "pulse_model"),
            ("observable = o3", "observable"),
            ("t2star_us = -1", "t2star_us"),
        ],
    )
    def test_rejections(self, line, match):
        with pytest.raises(ConfigError, match=match):
            parse_config_text(line)

    def test_flag_overrides_file(self, tmp_path):
        path = tmp_path / "c.cfg"
        path.write_text("dgs_mhz = 2.25\ndelta_mhz = -4\n", encoding="utf-8")
        config = load_config(str(path), {"delta_mhz": 1.5})
        assert config.delta_mhz == 1.5
        assert config.dgs_mhz == 2.25

    def test_fmt_is_12_significant_digits(self):
        assert fmt(0.1234567890123456) == "0.123456789012"
        assert fmt(-0.0) == "0"
        assert fmt(4) == "4"
        assert fmt("") == ""


class TestBranchesCommand:
    def test_single_detuning_rows(self, paper_config_path, tmp_path):
        out = tmp_path / "branches.csv"
        assert run("branches", "--config", paper_config_path, "--out", str(out)) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == (
            "delta_mhz,branch_id,pair,slope,intercept_mhz,freq_unfolded_mhz,freq_folded_mhz"
        )
        assert len(lines) == 7
        unfolded = [float(line.split(",")[5]) for line in lines[1:]]
        assert unfolded == pytest.approx([4.0, 0.5, 3.5, 5.0, 5.5, 1.5])

    def test_empty_sweep_range_gives_header_only(self, paper_config_path, tmp_path):
        out = tmp_path / "branches.csv"
        code = run(
            "branches", "--config", paper_config_path, "--out", str(out),
            "--delta-min-mhz", "2", "--delta-max-mhz", "1", "--delta-step-mhz", "0.5",
        )
        assert code == 0
        assert out.read_text().splitlines() == [
            "delta_mhz,branch_id,pair,slope,intercept_mhz,freq_unfolded_mhz,freq_folded_mhz"
        ]

    def test_folded_column_is_continuous_across_a_fold(self, paper_config_path, tmp_path):
        out = tmp_path / "branches.csv"
        assert run(
            "branches", "--config", paper_config_path, "--out", str(out),
            "--delta-min-mhz", "-4", "--delta-max-mhz", "4", "--delta-step-mhz", "0.1",
        ) == 0
        rows = [line.split(",") for line in out.read_text().splitlines()[1:]]
        for branch_id in range(1, 7):
            picked = [r for r in rows if int(r[1]) == branch_id]
            slope = int(picked[0][3])
            unfolded = np.array([float(r[5]) for r in picked])
            folded = np.array([float(r[6]) for r in picked])
            # unfolded piecewise-linear with |slope|; folded continuous
            assert np.max(np.abs(np.diff(folded))) <= slope * 0.1 + 1e-9
            assert np.max(np.abs(np.diff(unfolded))) <= slope * 0.1 + 1e-9
            assert folded.max() <= 0.5 / 0.06e-3 * 1e-3  # f_N in MHz


class TestSimulateCommand:
    def test_no_drive_means_zero_signal(self, paper_config_path, tmp_path):
        out = tmp_path / "trace.csv"
        assert run(
            "simulate", "--config", paper_config_path, "--out", str(out),
            "--omega1-mhz", "0", "--n-samples", "16",
        ) == 0
        rows = out.read_text().splitlines()[1:]
        assert all(float(r.split(",")[1]) == 0.0 for r in rows)

    def test_trace_and_spectrum(self, paper_config_path, tmp_path):
        out = tmp_path / "trace.csv"
        spec_out = tmp_path / "spec.csv"
        assert run(
            "simulate", "--config", paper_config_path, "--out", str(out),
            "--spectrum-out", str(spec_out),
        ) == 0
        rows = out.read_text().splitlines()
        assert rows[0] == "tau_ns,signal"
        assert len(rows) == 513
        values = [float(r.split(",")[1]) for r in rows[1:]]
        assert min(values) >= 0.0 and max(values) <= 1.0
        spec_rows = spec_out.read_text().splitlines()
        assert spec_rows[0] == "freq_mhz,magnitude"

    def test_byte_identical_runs(self, paper_config_path, tmp_path):
        out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
        for out in (out1, out2):
            assert run("simulate", "--config", paper_config_path, "--out", str(out)) == 0
        assert out1.read_bytes() == out2.read_bytes()


class TestSweepCommand:
    def sweep_args(self, config, out, *extra):
        return [
            "sweep", "--config", config, "--out", str(out),
            "--delta-min-mhz", "-1", "--delta-max-mhz", "1", "--delta-step-mhz", "0.5",
            "--n-samples", "128", *extra,
        ]

    def test_single_point_matches_simulate_spectrum(self, paper_config_path, tmp_path):
        sweep_out, spec_out, trace_out = (
            tmp_path / "sweep.csv", tmp_path / "spec.csv", tmp_path / "trace.csv"
        )
        assert run(
            "sweep", "--config", paper_config_path, "--out", str(sweep_out),
            "--delta-min-mhz", "-4", "--delta-max-mhz", "-4", "--delta-step-mhz", "1",
        ) == 0
        assert run(
            "simulate", "--config", paper_config_path, "--out", str(trace_out),
            "--spectrum-out", str(spec_out),
        ) == 0
        sweep_rows = sweep_out.read_text().splitlines()[1:]
        spec_rows = spec_out.read_text().splitlines()[1:]
        assert len(sweep_rows) == len(spec_rows)
        for s_row, p_row in zip(sweep_rows, spec_rows):
            d, f, m = s_row.split(",")
            assert d == "-4"
            assert (f, m) == tuple(p_row.split(","))

    def test_parallel_runs_byte_identical(self, paper_config_path, tmp_path):
        outs = [tmp_path / f"sweep{i}.csv" for i in range(3)]
        assert run(*self.sweep_args(paper_config_path, outs[0])) == 0
        assert run(*self.sweep_args(paper_config_path, outs[1], "--workers", "1")) == 0
        assert run(*self.sweep_args(paper_config_path, outs[2], "--workers", str(os.cpu_count() or 4))) == 0
        blobs = [o.read_bytes() for o in outs]
        assert blobs[0] == blobs[1] == blobs[2]

    def test_peaks_only_assigns_branches(self, paper_config_path, tmp_path):
        out = tmp_path / "peaks.csv"
        assert run(*self.sweep_args(paper_config_path, out, "--peaks-only")) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "delta_mhz,peak_freq_mhz,magnitude,branch_id,residual_mhz"
        assert len(lines) > 1
        for line in lines[1:]:
            fields = line.split(",")
            if fields[3]:
                assert int(fields[3]) in range(1, 7)
                assert abs(float(fields[4])) <= 1.0 / (128 * 0.06)


class TestCoefficientsCommand:
    def test_middle_pair_weight_vanishes_in_hard_model(self, paper_config_path, tmp_path):
        out = tmp_path / "coeff.csv"
        assert run(
            "coefficients", "--config", paper_config_path, "--out", str(out),
            "--initial-state", "plus_half", "--pulse-model", "hard",
        ) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "pair,omega_mhz,abs_x,arg_x_rad,c0"
        by_pair = {line.split(",")[0]: line.split(",") for line in lines[1:]}
        assert float(by_pair["-1/2:+1/2"][2]) <= 1e-10
        assert float(by_pair["-1/2:+1/2"][1]) == pytest.approx(0.5)  # delta + 2 dgs

    def test_zero_duration_pulses_have_no_weights(self, paper_config_path, tmp_path):
        out = tmp_path / "coeff.csv"
        assert run(
            "coefficients", "--config", paper_config_path, "--out", str(out),
            "--initial-state", "plus_half", "--pulse-ns", "0",
        ) == 0
        for line in out.read_text().splitlines()[1:]:
            assert float(line.split(",")[2]) <= 1e-14

    def test_both_models_side_by_side(self, paper_config_path, tmp_path, capsys):
        out = tmp_path / "coeff.csv"
        assert run(
            "coefficients", "--config", paper_config_path, "--out", str(out),
            "--initial-state", "plus_half", "--both-models", "--check-reconstruction",
        ) == 0
        lines = out.read_text().splitlines()
        assert lines[0].split(",") == [
            "pair", "omega_mhz", "abs_x_exact", "arg_x_rad_exact", "c0_exact",
            "abs_x_hard", "arg_x_rad_hard", "c0_hard",
        ]
        assert len(lines) == 7
        printed = capsys.readouterr().out
        errors = [float(line.rsplit("= ", 1)[1]) for line in printed.strip().splitlines()]
        assert len(errors) == 2
        assert max(errors) <= 1e-10

    def test_mixed_initial_state_rejected(self, paper_config_path, tmp_path, capsys):
        out = tmp_path / "coeff.csv"
        code = run("coefficients", "--config", paper_config_path, "--out", str(out))
        assert code == 1
        assert "pure initial state" in capsys.readouterr().err
        assert not out.exists()


class TestBlochCommand:
    def test_drive_off_rows_constant(self, paper_config_path, tmp_path):
        out = tmp_path / "bloch.csv"
        assert run(
            "bloch", "--config", paper_config_path, "--out", str(out),
            "--pair", "+3/2:+1/2", "--omega1-mhz", "0", "--initial-state", "plus_half",
            "--n-samples", "4",
        ) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "t_ns,x,y,z,pair_population"
        data = {tuple(line.split(",")[1:]) for line in lines[1:]}
        assert data == {("0", "0", "-1", "1")}

    def test_norm_column_invariant(self, paper_config_path, tmp_path):
        out = tmp_path / "bloch.csv"
        assert run(
            "bloch", "--config", paper_config_path, "--out", str(out),
            "--pair", "+3/2:+1/2", "--tau-ns", "500",
        ) == 0
        for line in out.read_text().splitlines()[1:]:
            _, x, y, z, pop = (float(v) for v in line.split(","))
            assert x * x + y * y + z * z <= pop * pop + 1e-10

    def test_bad_pair_rejected(self, paper_config_path, tmp_path, capsys):
        out = tmp_path / "bloch.csv"
        assert run(
            "bloch", "--config", paper_config_path, "--out", str(out), "--pair", "+5/2:+1/2"
        ) == 1
        assert not out.exists()


class TestOutputContracts:
    def test_ndjson_format(self, paper_config_path, tmp_path):
        out = tmp_path / "branches.ndjson"
        assert run(
            "branches", "--config", paper_config_path, "--out", str(out),
            "--format", "ndjson",
        ) == 0
        lines = out.read_text().splitlines()
        assert len(lines) == 6
        first = json.loads(lines[0])
        assert first["branch_id"] == 1
        assert first["pair"] == "+1/2:+3/2"
        assert first["freq_unfolded_mhz"] == 4

    def test_lf_line_endings_and_termination(self, paper_config_path, tmp_path):
        out = tmp_path / "branches.csv"
        assert run("branches", "--config", paper_config_path, "--out", str(out)) == 0
        blob = out.read_bytes()
        assert b"\r" not in blob
        assert blob.endswith(b"\n")

    def test_validation_failure_leaves_no_file(self, paper_config_path, tmp_path, capsys):
        out = tmp_path / "trace.csv"
        assert run(
            "simulate", "--config", paper_config_path, "--out", str(out), "--dtau-ns", "-60"
        ) == 1
        assert "dtau_ns" in capsys.readouterr().err
        assert not out.exists()
        assert list(tmp_path.glob("*.part")) == []

    def test_unwritable_output_reports_path(self, paper_config_path, tmp_path, capsys):
        out = tmp_path / "missing" / "trace.csv"
        assert run("simulate", "--config", paper_config_path, "--out", str(out)) == 1
        assert "trace.csv" in capsys.readouterr().err

    def test_missing_required_keys_reported(self, tmp_path, capsys):
        out = tmp_path / "trace.csv"
        assert run("simulate", "--out", str(out), "--dgs-mhz", "2.25") == 1
        err = capsys.readouterr().err
        assert "missing required config key" in err
