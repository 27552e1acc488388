import csv
import importlib.resources
import io
import json

import jsonschema
import pytest
from click.testing import CliRunner

from helpers import count_ctrl_statements, parse_qasm

from qcool import (
    Dynamic,
    EnergyGap,
    SubOptimal,
    Temperature,
    dynamic_final_p,
    probability_from_temperature,
    sub_optimal_final_p,
    total_work_cost,
)
from qcool.cli import cli

DYN3 = {"method": "dynamic", "n_qubits": 3}
SUBOPT = {"method": "suboptimal", "cluster_size": 3, "rounds": 2}


@pytest.fixture()
def runner():
    return CliRunner()


def write_config(tmp_path, doc, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def run_ok(runner, args):
    result = runner.invoke(cli, args)
    assert result.exit_code == 0, result.output + result.stderr
    return result.output


def result_schema():
    ref = importlib.resources.files("qcool.schemas") / "result_row.schema.json"
    return json.loads(ref.read_text())


# -- analyze ---------------------------------------------------------------


def test_analyze_json_row(runner, tmp_path):
    cfg = write_config(tmp_path, DYN3)
    out = run_ok(runner, ["analyze", "--config", cfg, "--initial-p", "0.1"])
    rows = json.loads(out)
    assert len(rows) == 1
    row = rows[0]
    assert row["method"] == "dynamic-n3-minimal-work"
    assert row["total_qubits"] == 3
    assert row["initial_p"] == 0.1
    assert row["final_p"] == pytest.approx(0.028, abs=1e-15)
    assert row["work"] == pytest.approx(0.072, abs=1e-15)
    assert row["total_gates"] == 5
    assert row["resets"] == 0
    assert row["noise_p"] is None
    assert row["initial_temp_mk"] is None and row["final_temp_mk"] is None
    assert row["work_joules"] is None
    schema = result_schema()
    jsonschema.validate(row, schema)


def test_analyze_csv_matches_json(runner, tmp_path):
    cfg = write_config(tmp_path, SUBOPT)
    args = ["analyze", "--config", cfg, "--initial-p", "0.1"]
    json_row = json.loads(run_ok(runner, args))[0]
    csv_text = run_ok(runner, args + ["--csv"])
    reader = csv.DictReader(io.StringIO(csv_text))
    csv_row = next(iter(reader))
    for key, value in json_row.items():
        cell = csv_row[key]
        if value is None:
            assert cell == ""
        elif isinstance(value, str):
            assert cell == value
        else:
            assert float(cell) == value, key


def test_analyze_with_temperature(runner, tmp_path):
    cfg = write_config(tmp_path, DYN3)
    out = run_ok(
        runner,
        ["analyze", "--config", cfg, "--temp-mk", "50", "--freq-ghz", "5"],
    )
    row = json.loads(out)[0]
    gap = EnergyGap.from_frequency_ghz(5.0)
    p = probability_from_temperature(Temperature.from_millikelvin(50), gap)
    assert row["initial_p"] == pytest.approx(p, rel=1e-13)
    assert row["initial_temp_mk"] == pytest.approx(50.0, rel=1e-9)
    assert 0 < row["final_temp_mk"] < 50.0
    assert row["work_joules"] == pytest.approx(row["work"] * gap.value, rel=1e-12)
    jsonschema.validate(row, result_schema())


def test_analyze_out_file(runner, tmp_path):
    cfg = write_config(tmp_path, DYN3)
    dest = tmp_path / "row.json"
    stdout = run_ok(runner, ["analyze", "--config", cfg, "--initial-p", "0.1"])
    run_ok(
        runner,
        ["analyze", "--config", cfg, "--initial-p", "0.1", "--out", str(dest)],
    )
    assert dest.read_text() == stdout


def test_analyze_usage_errors(runner, tmp_path):
    cfg = write_config(tmp_path, DYN3)
    for args in (
        ["analyze", "--config", cfg],
        ["analyze", "--config", cfg, "--initial-p", "0.1", "--temp-mk", "50"],
        ["analyze", "--config", cfg, "--temp-mk", "50"],
    ):
        assert runner.invoke(cli, args).exit_code == 2, args


def test_analyze_bad_config_exit_2(runner, tmp_path):
    cfg = write_config(tmp_path, {"method": "dynamic"})
    result = runner.invoke(cli, ["analyze", "--config", cfg, "--initial-p", "0.1"])
    assert result.exit_code == 2
    assert "error" in result.stderr.lower()
    plain = tmp_path / "broken.json"
    plain.write_text("{not json")
    result = runner.invoke(
        cli, ["analyze", "--config", str(plain), "--initial-p", "0.1"]
    )
    assert result.exit_code == 2


def test_analyze_cap_exit_3(runner, tmp_path):
    cfg = write_config(tmp_path, {"method": "dynamic", "n_qubits": 25})
    result = runner.invoke(cli, ["analyze", "--config", cfg, "--initial-p", "0.1"])
    assert result.exit_code == 3
    assert "error" in result.stderr.lower()


def test_analyze_bad_probability_exit_2(runner, tmp_path):
    cfg = write_config(tmp_path, DYN3)
    result = runner.invoke(cli, ["analyze", "--config", cfg, "--initial-p", "0.6"])
    assert result.exit_code == 2


# -- sweep -----------------------------------------------------------------


def test_sweep_order_and_values(runner, tmp_path):
    c1 = write_config(tmp_path, DYN3, "a.json")
    c2 = write_config(tmp_path, SUBOPT, "b.json")
    out = run_ok(
        runner,
        ["sweep", "--config", c1, "--config", c2, "--probs", "0.1,0.25"],
    )
    rows = json.loads(out)
    assert [r["method"] for r in rows] == [
        "dynamic-n3-minimal-work",
        "dynamic-n3-minimal-work",
        "suboptimal-n3-r2-minimal-work",
        "suboptimal-n3-r2-minimal-work",
    ]
    assert [r["initial_p"] for r in rows] == [0.1, 0.25, 0.1, 0.25]
    assert rows[0]["final_p"] == pytest.approx(dynamic_final_p(0.1, 3), abs=1e-15)
    assert rows[3]["final_p"] == pytest.approx(
        sub_optimal_final_p(0.25, 3, 2), abs=1e-15
    )
    schema = result_schema()
    for row in rows:
        jsonschema.validate(row, schema)


def test_sweep_jobs_equivalence(runner, tmp_path):
    c1 = write_config(tmp_path, DYN3, "a.json")
    c2 = write_config(tmp_path, SUBOPT, "b.json")
    args = ["sweep", "--config", c1, "--config", c2, "--probs", "0.05,0.1,0.2"]
    serial = run_ok(runner, args)
    parallel = run_ok(runner, args + ["--jobs", "2"])
    assert serial == parallel


def test_sweep_deterministic(runner, tmp_path):
    cfg = write_config(tmp_path, SUBOPT)
    args = ["sweep", "--config", cfg, "--probs", "0.1,0.3", "--csv"]
    assert run_ok(runner, args) == run_ok(runner, args)


def test_sweep_temperature_grid(runner, tmp_path):
    cfg = write_config(tmp_path, DYN3)
    out = run_ok(
        runner,
        ["sweep", "--config", cfg, "--temps-mk", "50,100", "--freq-ghz", "5"],
    )
    rows = json.loads(out)
    assert rows[0]["initial_temp_mk"] == pytest.approx(50.0, rel=1e-9)
    assert rows[1]["initial_temp_mk"] == pytest.approx(100.0, rel=1e-9)
    assert rows[0]["final_temp_mk"] < rows[1]["final_temp_mk"]


def test_sweep_usage_errors(runner, tmp_path):
    cfg = write_config(tmp_path, DYN3)
    for args in (
        ["sweep", "--config", cfg],
        ["sweep", "--config", cfg, "--probs", "0.1", "--temps-mk", "50"],
        ["sweep", "--config", cfg, "--temps-mk", "50"],
        ["sweep", "--config", cfg, "--probs", "abc"],
        ["sweep", "--config", cfg, "--probs", ""],
    ):
        assert runner.invoke(cli, args).exit_code == 2, args


# -- noise-sweep -----------------------------------------------------------


def test_noise_sweep_zero_matches_analytic(runner, tmp_path):
    cfg = write_config(tmp_path, DYN3)
    out = run_ok(
        runner,
        [
            "noise-sweep",
            "--config",
            cfg,
            "--initial-p",
            "0.1",
            "--noise-probs",
            "0,0.01",
        ],
    )
    rows = json.loads(out)
    assert [r["noise_p"] for r in rows] == [0.0, 0.01]
    assert rows[0]["final_p"] == pytest.approx(0.028, abs=1e-12)
    assert rows[1]["final_p"] > rows[0]["final_p"]
    # reported work stays the noiseless driving cost
    for row in rows:
        assert row["work"] == pytest.approx(
            total_work_cost(Dynamic(3), 0.1), rel=1e-12
        )
    schema = result_schema()
    for row in rows:
        jsonschema.validate(row, schema)


def test_noise_sweep_placement_changes_result(runner, tmp_path):
    # disjoint round-1 clusters pack into shared layers, so the two
    # placements apply different noise channels
    cfg = write_config(tmp_path, SUBOPT)
    base = [
        "noise-sweep",
        "--config",
        cfg,
        "--initial-p",
        "0.1",
        "--noise-probs",
        "0.05",
    ]
    per_gate = json.loads(run_ok(runner, base))[0]
    per_layer = json.loads(run_ok(runner, base + ["--placement", "per-layer"]))[0]
    assert per_gate["final_p"] != per_layer["final_p"]
    clean = sub_optimal_final_p(0.1, 3, 2)
    assert per_gate["final_p"] > clean
    assert per_layer["final_p"] > clean


def test_noise_sweep_jobs_equivalence(runner, tmp_path):
    c1 = write_config(tmp_path, DYN3, "a.json")
    c2 = write_config(tmp_path, SUBOPT, "b.json")
    args = [
        "noise-sweep",
        "--config",
        c1,
        "--config",
        c2,
        "--initial-p",
        "0.1",
        "--noise-probs",
        "0,0.001,0.01",
        "--csv",
    ]
    assert run_ok(runner, args) == run_ok(runner, args + ["--jobs", "2"])


def test_noise_sweep_validation(runner, tmp_path):
    cfg = write_config(tmp_path, DYN3)
    result = runner.invoke(
        cli,
        [
            "noise-sweep",
            "--config",
            cfg,
            "--initial-p",
            "0.1",
            "--noise-probs",
            "1.5",
        ],
    )
    assert result.exit_code == 2
    result = runner.invoke(
        cli, ["noise-sweep", "--config", cfg, "--noise-probs", "0.1"]
    )
    assert result.exit_code == 2


# -- generate --------------------------------------------------------------


def test_generate_from_cycles_file(runner, tmp_path):
    cycles = tmp_path / "cycles.json"
    cycles.write_text(json.dumps({"n": 3, "cycles": [["011", "100"]]}))
    out = run_ok(runner, ["generate", "--cycles-file", str(cycles)])
    assert out.startswith("OPENQASM 3.0;")
    parsed = parse_qasm(out)
    assert parsed.n_qubits == 3
    assert count_ctrl_statements(out) == 5


def test_generate_from_config(runner, tmp_path):
    cfg = write_config(tmp_path, SUBOPT)
    out = run_ok(runner, ["generate", "--config", cfg])
    parsed = parse_qasm(out)
    assert parsed.n_qubits == 9
    assert count_ctrl_statements(out) == 20


def test_generate_hbac_has_reset_pragmas(runner, tmp_path):
    cfg = write_config(
        tmp_path, {"method": "hbac", "cluster_size": 3, "rounds": 3}
    )
    out = run_ok(runner, ["generate", "--config", cfg])
    # two reset layers between three cooling blocks, one pragma per qubit
    assert out.count("// @thermal_reset") == 2 * 2
    parse_qasm(out)


def test_generate_semiopen_needs_initial(runner, tmp_path):
    cfg = write_config(tmp_path, {"method": "semiopen", "cluster_sizes": [3, 3]})
    assert runner.invoke(cli, ["generate", "--config", cfg]).exit_code == 2
    out = run_ok(runner, ["generate", "--config", cfg, "--initial-p", "0.1"])
    assert parse_qasm(out).n_qubits == 5
    # temperature flags work too
    out2 = run_ok(
        runner,
        ["generate", "--config", cfg, "--temp-mk", "50", "--freq-ghz", "5"],
    )
    parse_qasm(out2)


def test_generate_simplify_flag(runner, tmp_path):
    cycles = tmp_path / "cycles.json"
    cycles.write_text(json.dumps({"n": 2, "cycles": [[1, 2]]}))
    plain = run_ok(runner, ["generate", "--cycles-file", str(cycles)])
    slim = run_ok(
        runner, ["generate", "--cycles-file", str(cycles), "--simplify"]
    )
    assert count_ctrl_statements(slim) <= count_ctrl_statements(plain)
    parse_qasm(slim)


def test_generate_out_file(runner, tmp_path):
    cfg = write_config(tmp_path, DYN3)
    dest = tmp_path / "circuit.qasm"
    stdout = run_ok(runner, ["generate", "--config", cfg])
    run_ok(runner, ["generate", "--config", cfg, "--out", str(dest)])
    assert dest.read_text() == stdout


def test_generate_source_flags_exclusive(runner, tmp_path):
    cfg = write_config(tmp_path, DYN3)
    cycles = tmp_path / "cycles.json"
    cycles.write_text(json.dumps({"n": 2, "cycles": [[1, 2]]}))
    assert runner.invoke(cli, ["generate"]).exit_code == 2
    args = ["generate", "--config", cfg, "--cycles-file", str(cycles)]
    assert runner.invoke(cli, args).exit_code == 2


def test_generate_cap_exits(runner, tmp_path):
    # the cycles schema caps n, so an oversized cycle file is a config
    # problem; an oversized method register hits the resource cap
    cycles = tmp_path / "cycles.json"
    cycles.write_text(json.dumps({"n": 25, "cycles": [[0, 1]]}))
    result = runner.invoke(cli, ["generate", "--cycles-file", str(cycles)])
    assert result.exit_code == 2
    cfg = write_config(tmp_path, {"method": "dynamic", "n_qubits": 25})
    result = runner.invoke(
        cli, ["generate", "--config", cfg, "--initial-p", "0.1"]
    )
    assert result.exit_code == 3


# -- bench -----------------------------------------------------------------


def test_bench_columns_and_sizes(runner):
    out = run_ok(runner, ["bench", "--min-n", "4", "--max-n", "8", "--step", "2"])
    rows = json.loads(out)
    assert [r["n"] for r in rows] == [4, 6, 8]
    for row in rows:
        n = row["n"]
        assert row["dense_bytes"] == 4 * 4**n
        assert row["sparse_bytes"] == 24 * 2**n + 4
        assert row["compose_seconds"] > 0.0


def test_bench_compact_matches_published_footprints(runner):
    out = run_ok(
        runner,
        ["bench", "--min-n", "8", "--max-n", "14", "--step", "2", "--compact"],
    )
    rows = {r["n"]: r["sparse_bytes"] for r in json.loads(out)}
    assert rows == {8: 3076, 10: 12292, 12: 49156, 14: 196612}


def test_bench_csv_and_validation(runner):
    out = run_ok(runner, ["bench", "--min-n", "4", "--max-n", "4", "--csv"])
    reader = csv.DictReader(io.StringIO(out))
    row = next(iter(reader))
    assert set(row) == {"n", "sparse_bytes", "dense_bytes", "compose_seconds"}
    assert runner.invoke(cli, ["bench", "--min-n", "0"]).exit_code == 2
    assert (
        runner.invoke(cli, ["bench", "--min-n", "6", "--max-n", "4"]).exit_code
        == 2
    )


def test_version_flag(runner):
    out = run_ok(runner, ["--version"])
    assert "qcool" in out
