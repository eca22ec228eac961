import subprocess
import sys

import pytest

from wplink import cli


def run_cli(*args, **kwargs):
    return subprocess.run(
        [sys.executable, "-m", "wplink", *args],
        capture_output=True,
        text=True,
        timeout=120,
        **kwargs,
    )


class TestSupplyProb:
    def test_reference_value(self):
        r = run_cli("supply-prob", "--m", "100", "--n", "10", "--a", "1")
        assert r.returncode == 0
        assert r.stdout.strip() == "0.905730809830"

    def test_zero_ratio(self):
        r = run_cli("supply-prob", "--m", "100", "--n", "10", "--a", "0")
        assert r.stdout.strip() == "1.000000000000"

    def test_ratio_from_powers(self):
        direct = run_cli("supply-prob", "--m", "100", "--n", "10", "--a", "1")
        derived = run_cli("supply-prob", "--m", "100", "--n", "10", "--pe", "2", "--pt", "2")
        assert derived.stdout == direct.stdout

    def test_out_of_domain_suggests_simulation(self):
        r = run_cli("supply-prob", "--m", "1", "--n", "10", "--a", "1")
        assert r.returncode == 2
        assert "m > 2a" in r.stderr
        assert "mc" in r.stderr

    def test_missing_arguments(self):
        r = run_cli("supply-prob", "--m", "100")
        assert r.returncode == 2


class TestRate:
    def test_min_latency_row(self):
        r = run_cli("rate", "--pe", "1000", "--pt", "1.1554", "--eps", "1e-3",
                    "--sigma2", "1", "--min-latency")
        assert r.returncode == 0
        header, row = r.stdout.strip().splitlines()
        assert header == "m,n,feasible,rate_nats,rate_bits,asymptotic_rate_bits"
        cells = row.split(",")
        assert cells[0] == "102433"
        assert cells[1] == "44316"
        assert cells[2] == "true"
        assert float(cells[3]) == pytest.approx(0.06887105223818207, rel=1e-12)
        assert float(cells[5]) == pytest.approx(0.16729526900406344, rel=1e-12)

    def test_infeasible_pair_reports_zero(self):
        r = run_cli("rate", "--pe", "1000", "--pt", "1.1554", "--eps", "1e-3",
                    "--m", "10", "--n", "100000")
        cells = r.stdout.strip().splitlines()[1].split(",")
        assert cells[2] == "false"
        assert float(cells[3]) == 0.0

    def test_zero_epsilon_rejected(self):
        r = run_cli("rate", "--pe", "1000", "--pt", "1.1554", "--eps", "0", "--min-latency")
        assert r.returncode == 2

    def test_needs_blocklengths_or_flag(self):
        r = run_cli("rate", "--pe", "1000", "--pt", "1.1554", "--eps", "1e-3")
        assert r.returncode == 2
        assert "--min-latency" in r.stderr


class TestMc:
    def test_agreement_and_format(self):
        r = run_cli("mc", "--m", "100", "--n", "10", "--pe", "1", "--pt", "1",
                    "--samples", "1000000", "--seed", "7")
        assert r.returncode == 0
        lines = r.stdout.strip().splitlines()
        assert lines[0] == "p_hat: 0.906007000000"
        assert lines[2] == "samples: 1000000"
        assert lines[3] == "closed-form: 0.905730809830"
        z = float(lines[4].split(":")[1])
        assert abs(z) < 5.0

    def test_byte_identical_repeats(self):
        args = ("mc", "--m", "5", "--n", "3", "--pe", "2", "--pt", "1",
                "--samples", "20000", "--seed", "9")
        assert run_cli(*args).stdout == run_cli(*args).stdout

    def test_no_closed_form_regime(self):
        r = run_cli("mc", "--m", "1", "--n", "10", "--pe", "1", "--pt", "1",
                    "--samples", "1000", "--seed", "3")
        assert r.returncode == 0
        assert "closed-form: n/a (m <= 2a)" in r.stdout
        assert "z:" not in r.stdout

    def test_prefix_variant_matches(self):
        base = ("--m", "100", "--n", "10", "--pe", "1", "--pt", "1",
                "--samples", "50000", "--seed", "42")
        final = run_cli("mc", *base)
        prefix = run_cli("mc", *base, "--prefix")
        assert final.stdout == prefix.stdout

    def test_rejects_bad_samples(self):
        r = run_cli("mc", "--m", "100", "--n", "10", "--pe", "1", "--pt", "1",
                    "--samples", "0")
        assert r.returncode == 2


class TestOptimalPower:
    def test_reference_value(self):
        r = run_cli("optimal-power", "--eps", "1e-3", "--pe", "1000", "--sigma2", "1")
        assert r.returncode == 0
        assert r.stdout.strip() == "1.15537249759"

    def test_finite_search_line(self):
        r = run_cli("optimal-power", "--eps", "1e-3", "--pe", "1000", "--finite")
        lines = r.stdout.strip().splitlines()
        assert lines[0] == "1.15537249759"
        assert lines[1].startswith("finite: ")
        assert float(lines[1].split(":")[1]) == pytest.approx(2.0430340, rel=1e-6)

    def test_failed_search_is_internal_error(self):
        r = run_cli("optimal-power", "--eps", "1e-3", "--pe", "0.01", "--finite")
        assert r.returncode == 1


class TestSweep:
    def test_stdout_table(self):
        r = run_cli("sweep", "--mode", "fig3", "--points", "3")
        assert r.returncode == 0
        lines = r.stdout.splitlines()
        assert "# mode: fig3" in lines
        header = next(ln for ln in lines if not ln.startswith("#"))
        assert header.split(",")[0] == "p_e"
        assert len([ln for ln in lines if ln and not ln.startswith("#")]) == 4

    def test_csv_file_and_plot(self, tmp_path):
        out = tmp_path / "fig1.csv"
        r = run_cli("sweep", "--mode", "fig1", "--points", "6", "--out", str(out), "--plot")
        assert r.returncode == 0
        assert out.exists()
        png = tmp_path / "fig1.png"
        assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"

    def test_plot_requires_out(self):
        r = run_cli("sweep", "--mode", "fig2", "--points", "3", "--plot")
        assert r.returncode == 2
        assert "--out" in r.stderr

    def test_unknown_mode(self):
        r = run_cli("sweep", "--mode", "fig9")
        assert r.returncode == 2

    def test_custom_needs_axis(self):
        r = run_cli("sweep", "--mode", "custom", "--variable", "epsilon")
        assert r.returncode == 2
        assert "--start" in r.stderr

    def test_override_fixed_parameter(self):
        base = run_cli("sweep", "--mode", "fig1", "--points", "3")
        tweaked = run_cli("sweep", "--mode", "fig1", "--points", "3", "--eps", "0.05")
        assert base.returncode == tweaked.returncode == 0
        assert base.stdout != tweaked.stdout
        assert "# fixed.epsilon: 0.05" in tweaked.stdout


class TestConfig:
    def test_defaults_from_file_with_flag_override(self, tmp_path):
        cfg = tmp_path / "wp.cfg"
        cfg.write_text("mode=fig3\npoints=3\n")
        from_file = run_cli("sweep", "--config", str(cfg))
        assert from_file.returncode == 0
        assert "# points: 3" in from_file.stdout
        overridden = run_cli("sweep", "--config", str(cfg), "--points", "4")
        assert "# points: 4" in overridden.stdout

    def test_config_before_subcommand(self, tmp_path):
        cfg = tmp_path / "wp.cfg"
        cfg.write_text("m=100\nn=10\na=1\n")
        r = run_cli("--config", str(cfg), "supply-prob")
        assert r.returncode == 0
        assert r.stdout.strip() == "0.905730809830"

    def test_unknown_key(self, tmp_path):
        cfg = tmp_path / "wp.cfg"
        cfg.write_text("volume=11\n")
        r = run_cli("sweep", "--config", str(cfg), "--mode", "fig1")
        assert r.returncode == 2
        assert "unknown config key" in r.stderr

    def test_missing_file(self):
        r = run_cli("sweep", "--config", "/nonexistent/wp.cfg", "--mode", "fig1")
        assert r.returncode == 2

    def test_malformed_line(self, tmp_path):
        cfg = tmp_path / "wp.cfg"
        cfg.write_text("just a sentence\n")
        r = run_cli("supply-prob", "--config", str(cfg), "--m", "100", "--n", "10", "--a", "1")
        assert r.returncode == 2
        assert "key=value" in r.stderr

    def test_comments_and_blanks_ignored(self, tmp_path):
        cfg = tmp_path / "wp.cfg"
        cfg.write_text("# a comment\n\nm=100\nn=10\na=1\n")
        r = run_cli("supply-prob", "--config", str(cfg))
        assert r.stdout.strip() == "0.905730809830"


class TestExitCodes:
    def test_no_command(self):
        assert run_cli().returncode == 2

    def test_unknown_command(self):
        assert run_cli("frobnicate").returncode == 2

    def test_internal_error_path(self, monkeypatch, capsys):
        def boom(spec, mode):
            raise RuntimeError("sweep engine exploded")

        monkeypatch.setattr(cli, "run_sweep", boom)
        code = cli.main(["sweep", "--mode", "fig1"])
        assert code == 1
        assert "internal error" in capsys.readouterr().err

    def test_domain_error_in_process(self, capsys):
        code = cli.main(["supply-prob", "--m", "1", "--n", "10", "--a", "1"])
        assert code == 2
        assert "m > 2a" in capsys.readouterr().err

    def test_version(self):
        r = run_cli("--version")
        assert r.returncode == 0
        assert r.stdout.startswith("wplink ")
