"""End-to-end tests of the command-line front end via its ``main`` entry."""

import math

import pytest

from nfvel.cli import ConfigError, main, read_config_file

SMALL_SCENARIO = [
    "--set", "carrier=6 GHz",
    "--set", "num_elements=9",
    "--set", "spacing=0.02",
    "--set", "num_symbols=8",
    "--set", "symbol_time=0.2 ms",
    "--set", "distance=0.8",
    "--set", "radial_velocity=2",
    "--set", "transverse_velocity=-3",
]


def _crlb_output(capsys, *args):
    code = main(["crlb", *args])
    captured = capsys.readouterr()
    assert code == 0, captured.err
    out = {}
    for line in captured.out.splitlines():
        key, _, value = line.partition(" = ")
        out[key] = value
    return out


class TestUnitParsing:
    def test_frequency_and_ratio_suffixes(self, capsys):
        out = _crlb_output(
            capsys,
            "--set", "carrier=28 GHz",
            "--set", "subcarrier_spacing=120 kHz",
            "--set", "snr=20 dB",
            "--set", "rx_gain=3 dBi",
        )
        assert float(out["carrier"]) == pytest.approx(28e9)
        assert float(out["subcarrier_spacing"]) == pytest.approx(120e3)
        assert float(out["snr"]) == pytest.approx(100.0)
        assert float(out["rx_gain"]) == pytest.approx(10.0 ** 0.3)

    def test_power_suffixes_agree(self, capsys):
        dbm = _crlb_output(capsys, "--set", "tx_power=23 dBm")
        milliwatt = _crlb_output(capsys, "--set", "tx_power=199.52623149688787 mW")
        watt = _crlb_output(capsys, "--set", "tx_power=0.19952623149688787 W")
        assert float(dbm["tx_power"]) == pytest.approx(0.19952623149688787, rel=1e-12)
        assert milliwatt["tx_power"] == watt["tx_power"]

    def test_time_suffixes(self, capsys):
        ms = _crlb_output(capsys, "--set", "symbol_time=16.6 ms")
        us = _crlb_output(capsys, "--set", "symbol_time=16600 us")
        assert float(ms["symbol_time"]) == pytest.approx(16.6e-3)
        assert ms["symbol_time"] == us["symbol_time"]

    def test_angle_in_degrees(self, capsys):
        out = _crlb_output(capsys, "--set", "angle=45")
        assert float(out["angle_deg"]) == pytest.approx(45.0)
        assert float(out["angle"]) == pytest.approx(math.pi / 4)

    def test_end_fire_degrees_reports_singular(self, capsys):
        out = _crlb_output(capsys, "--set", "angle=90")
        assert out["singular"] == "1"
        assert out["crlb_vt"] == "inf"
        assert out["root_crlb_vt"] == "inf"
        assert out["crlb_vr"] != "inf"


class TestConfigHandling:
    def test_config_file_with_comments(self, tmp_path, capsys):
        cfg = tmp_path / "scenario.cfg"
        cfg.write_text(
            "# reference scenario\n"
            "\n"
            "distance = 5  # metres\n"
            "snr = 0 dB\n"
            "angle = 30\n"
        )
        out = _crlb_output(capsys, "--config", str(cfg))
        assert float(out["distance"]) == pytest.approx(5.0)
        assert float(out["snr"]) == pytest.approx(1.0)
        assert float(out["angle_deg"]) == pytest.approx(30.0)

    def test_set_overrides_config_file(self, tmp_path, capsys):
        cfg = tmp_path / "scenario.cfg"
        cfg.write_text("distance = 5\nsnr = 10 dB\n")
        out = _crlb_output(capsys, "--config", str(cfg), "--set", "distance=7")
        assert float(out["distance"]) == pytest.approx(7.0)
        assert float(out["snr"]) == pytest.approx(10.0)

    def test_duplicate_keys_last_wins(self, tmp_path):
        cfg = tmp_path / "dup.cfg"
        cfg.write_text("distance = 5\ndistance = 9\n")
        assert read_config_file(cfg) == {"distance": "9"}

    def test_malformed_config_line_raises(self, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("distance 5\n")
        with pytest.raises(ConfigError):
            read_config_file(cfg)


class TestExitCodes:
    def test_unknown_key_is_config_error(self, capsys):
        assert main(["crlb", "--set", "bogus=1"]) == 1
        assert "bogus" in capsys.readouterr().err

    def test_unparseable_value_is_config_error(self, capsys):
        assert main(["crlb", "--set", "carrier=abc"]) == 1
        assert main(["crlb", "--set", "symbol_time=5 parsec"]) == 1
        assert main(["crlb", "--set", "distance"]) == 1

    def test_invalid_scenario_is_config_error(self, capsys):
        assert main(["crlb", "--set", "distance=-1"]) == 1
        assert main(["crlb", "--set", "spacing=0.1", "--set", "aperture=1"]) == 1

    def test_missing_config_file_is_io_error(self, capsys):
        assert main(["crlb", "--config", "/nonexistent/scenario.cfg"]) == 2
        assert "i/o" in capsys.readouterr().err

    def test_bad_seed_or_threads(self, capsys):
        assert main(["crlb", "--seed", "-1"]) == 1
        assert main(["crlb", "--threads", "0"]) == 1

    def test_usage_errors_exit_one(self, capsys):
        assert main(["bogus"]) == 1
        assert main([]) == 1
        assert main(["sweep", "--var", "distance"]) == 1  # missing --min/--max

    def test_help_exits_zero(self, capsys):
        assert main(["--help"]) == 0
        assert "montecarlo" in capsys.readouterr().out


class TestCsvCommands:
    def test_sweep_writes_table(self, tmp_path, capsys):
        out = tmp_path / "sweep.csv"
        code = main([
            "sweep", "--var", "distance", "--min", "1", "--max", "100",
            "--points", "5", "--log", "--out", str(out),
        ])
        assert code == 0
        assert str(out) in capsys.readouterr().out
        lines = out.read_text().splitlines()
        assert lines[0] == "# nfvel sweep-distance"
        assert "# seed = 0" in lines
        header_at = lines.index("distance,root_crlb_vr,root_crlb_vt,root_crlb_vr_far_field,singular")
        assert len(lines) - header_at - 1 == 5

    def test_sweep_default_output_name(self, tmp_path, capsys, monkeypatch):
        monkeypatch.chdir(tmp_path)
        code = main(["sweep", "--var", "angle", "--min", "-60", "--max", "60", "--points", "3"])
        assert code == 0
        assert (tmp_path / "sweep_angle.csv").exists()

    def test_fig1_with_experiment_keys(self, tmp_path, capsys):
        out = tmp_path / "fig1.csv"
        code = main([
            "fig1",
            "--set", "apertures=0.25,0.5",
            "--set", "d_min=0.1",
            "--set", "d_max=10",
            "--set", "points=4",
            "--out", str(out),
        ])
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "# nfvel radial-vs-distance"
        data = [line for line in lines if not line.startswith("#")]
        assert data[0].startswith("distance_m,")
        assert len(data) - 1 == 8  # two apertures x four points

    def test_fig4_small_map(self, tmp_path, capsys):
        out = tmp_path / "fig4.csv"
        code = main([
            "fig4",
            "--set", "x_min=-2", "--set", "x_max=2", "--set", "x_points=3",
            "--set", "y_min=0", "--set", "y_max=8", "--set", "y_points=2",
            "--out", str(out),
        ])
        assert code == 0
        text = out.read_text()
        assert "snr_db" in text
        assert "nan" not in text.lower()

    def test_montecarlo_rerun_is_byte_identical(self, tmp_path, capsys):
        args = [
            "montecarlo",
            *SMALL_SCENARIO,
            "--set", "vr_window=2",
            "--set", "vt_window=6",
            "--trials", "100",
            "--snr-list", "20",
            "--seed", "11",
        ]
        first = tmp_path / "first.csv"
        second = tmp_path / "second.csv"
        assert main([*args, "--out", str(first)]) == 0
        assert main([*args, "--out", str(second)]) == 0
        assert first.read_bytes() == second.read_bytes()
        lines = first.read_text().splitlines()
        assert "# seed = 11" in lines
        assert any(line.startswith("snr_db,") for line in lines)

    def test_threads_do_not_change_bytes(self, tmp_path, capsys):
        base = [
            "fig2",
            "--set", "apertures=0.5",
            "--set", "points=4",
            "--set", "d_min=0.5",
            "--set", "d_max=50",
        ]
        serial = tmp_path / "serial.csv"
        threaded = tmp_path / "threaded.csv"
        assert main([*base, "--out", str(serial)]) == 0
        assert main([*base, "--threads", "4", "--out", str(threaded)]) == 0
        assert serial.read_bytes() == threaded.read_bytes()
