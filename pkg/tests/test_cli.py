"""Command-line surface: argument handling, outputs, and error reporting."""

import json

import pytest

from antmesh.cli import main
from antmesh.metrics import CSV_HEADER

SCENARIO = """
protocol = aodv
nodes = 10
area = 300x300
sim_time = 15
seed = 4
traffic.sessions = 2
traffic.rate_pps = 2
traffic.packet_bytes = 125
traffic.warmup_s = 5
"""


@pytest.fixture
def scenario(tmp_path):
    path = tmp_path / "demo.scn"
    path.write_text(SCENARIO)
    return str(path)


def test_run_to_stdout(scenario, capsys):
    assert main(["run", scenario]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == CSV_HEADER
    fields = out[1].split(",")
    assert fields[0] == "aodv" and fields[1] == "4"
    assert fields[2] == "none"
    assert int(fields[4]) == 40


def test_run_to_file(scenario, tmp_path, capsys):
    out_csv = tmp_path / "one.csv"
    assert main(["run", scenario, "--out", str(out_csv)]) == 0
    assert capsys.readouterr().out == ""
    assert out_csv.read_text().splitlines()[0] == CSV_HEADER


def test_sweep_writes_rows_and_summary(scenario, tmp_path, capsys):
    out_csv = tmp_path / "sw.csv"
    code = main(["sweep", scenario, "--param", "max_speed",
                 "--values", "5,10", "--seeds", "1,2", "--out", str(out_csv)])
    assert code == 0
    lines = out_csv.read_text().splitlines()
    assert len(lines) == 5
    assert {line.split(",")[3] for line in lines[1:]} == {"5", "10"}
    summary = capsys.readouterr().out
    assert "value=5" in summary and "value=10" in summary
    assert "2 runs" in summary


def test_compare_covers_each_protocol(scenario, capsys):
    code = main(["compare", scenario, "--protocols", "aodv,ara",
                 "--param", "pause_time", "--values", "0,30",
                 "--seeds", "1"])
    assert code == 0
    rows = capsys.readouterr().out.splitlines()[1:]
    assert {r.split(",")[0] for r in rows} == {"aodv", "ara"}
    assert len(rows) == 4


def test_plot_default_output_name(scenario, tmp_path, capsys):
    out_csv = tmp_path / "sw.csv"
    main(["sweep", scenario, "--param", "max_speed", "--values", "5,10",
          "--seeds", "1", "--out", str(out_csv)])
    capsys.readouterr()
    assert main(["plot", str(out_csv), "--metric", "pdr"]) == 0
    svg = tmp_path / "sw_pdr.svg"
    assert svg.exists()
    body = svg.read_text()
    assert "max node speed (m/s)" in body
    # Explicit output path wins over the derived one.
    own = tmp_path / "custom.svg"
    assert main(["plot", str(out_csv), "--metric", "delay",
                 "--out", str(own)]) == 0
    assert own.exists()
    assert "average end-to-end delay" in own.read_text()


def test_missing_scenario_reports_json_error(tmp_path, capsys):
    code = main(["run", str(tmp_path / "absent.scn")])
    assert code == 1
    err = json.loads(capsys.readouterr().err.strip())
    assert err["error"] == "IoFailure"
    assert "absent.scn" in err["message"]


def test_bad_scenario_value_reports_key_and_line(tmp_path, capsys):
    bad = tmp_path / "bad.scn"
    bad.write_text("protocol = antnet\nantnet.r = 1.5\n")
    assert main(["run", str(bad)]) == 1
    err = json.loads(capsys.readouterr().err.strip())
    assert err["error"] == "TypeMismatch"
    assert "bad.scn:2" in err["message"]


def test_unknown_protocol_in_compare(scenario, capsys):
    code = main(["compare", scenario, "--protocols", "aodv,ospf",
                 "--param", "max_speed", "--values", "5", "--seeds", "1"])
    assert code == 1
    err = json.loads(capsys.readouterr().err.strip())
    assert err["error"] == "InvalidConfig"
    assert "ospf" in err["message"]


def test_bad_sweep_param_rejected_by_parser(scenario):
    with pytest.raises(SystemExit):
        main(["sweep", scenario, "--param", "node_count",
              "--values", "5", "--seeds", "1"])


def test_decreasing_sweep_values_rejected(scenario, capsys):
    code = main(["sweep", scenario, "--param", "max_speed",
                 "--values", "10,5", "--seeds", "1"])
    assert code == 1
    err = json.loads(capsys.readouterr().err.strip())
    assert err["error"] == "InvalidConfig"
