import csv

import pytest

from fibercap.cli import build_parser, main


def test_bounds_to_csv_and_plot(tmp_path, capsys):
    out = tmp_path / "b.csv"
    assert main(["bounds", "--pmin", "-10", "--pmax", "0", "--step", "5", "--models", "lpc,rpc-lb", "--out", str(out)]) == 0
    rows = list(csv.reader(open(out, newline="")))
    assert rows[0] == ["power_dbm", "lpc", "rpc-lb", "flags"]
    assert len(rows) == 4
    assert (tmp_path / "b.csv.meta.json").exists()
    assert main(["plot", str(out)]) == 0
    assert (tmp_path / "b.svg").read_text().startswith("<?xml")


def test_bounds_svg_and_stdout(tmp_path, capsys):
    assert main(["bounds", "--pmin", "0", "--pmax", "1", "--models", "lpc", "--out", str(tmp_path / "x.svg")]) == 0
    assert "<polyline" in (tmp_path / "x.svg").read_text()
    assert main(["bounds", "--pmin", "0", "--pmax", "1", "--models", "lpc"]) == 0
    assert capsys.readouterr().out.startswith("power_dbm,lpc,flags\n")


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "lin.toml"
    cfg.write_text("nonlinearity = 0.0\n")
    assert main(["bounds", "--config", str(cfg), "--pmin", "0", "--pmax", "1", "--models", "rpc-ub-simple"]) == 0
    assert "eta = 0" in capsys.readouterr().out


def test_bad_arguments_exit_nonzero(capsys):
    assert main(["bounds", "--models", "bogus"]) == 2
    assert main(["bounds", "--pmin", "5", "--pmax", "0"]) == 2
    with pytest.raises(SystemExit):
        main(["nosuch"])


def test_pdf_dump(tmp_path):
    out = tmp_path / "pdf.csv"
    assert main(["pdf", "--nr", "4", "--ntheta", "5", "--out", str(out)]) == 0
    rows = list(csv.reader(open(out)))
    assert rows[0] == ["r", "theta", "pdf"] and len(rows) == 21
    assert all(float(r[2]) >= 0 for r in rows[1:])


@pytest.mark.parametrize("channel", ["rpc", "lpc", "mnc-ssf"])
def test_simulate(tmp_path, channel):
    out = tmp_path / "sim.csv"
    assert main(["simulate", "--channel", channel, "-n", "50", "--segments", "5", "--out", str(out)]) == 0
    assert len(list(csv.reader(open(out)))) == 51


def test_parser_lists_every_subcommand():
    text = build_parser().format_help()
    for name in ("bounds", "pdf", "simulate", "verify", "plot"):
        assert name in text
