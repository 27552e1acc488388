"""Command-line interface.

Exit codes: 0 on success, 2 for usage or configuration problems, 3 when a
size cap would be exceeded.  Every command is deterministic for fixed
flags except the timing column of `bench`.
"""

from __future__ import annotations

import csv
import functools
import io
import json
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import click

from . import methods
from .circuits import gate_counts, simplify_adjacent
from .errors import QcoolError, ResourceLimitError
from .qasm import export_qasm
from .sim import NoiseModel, marginal, simulate
from .synth import synthesize_circuit
from .thermo import (
    EnergyGap,
    Temperature,
    probability_from_temperature,
    temperature_from_probability,
    thermal_product_vector,
)
from .unitary import unitary_from_json

RESULT_COLUMNS = [
    "method",
    "total_qubits",
    "initial_temp_mk",
    "final_temp_mk",
    "initial_p",
    "final_p",
    "noise_p",
    "work",
    "work_joules",
    "total_gates",
    "resets",
]

BENCH_COLUMNS = ["n", "sparse_bytes", "dense_bytes", "compose_seconds"]


def _handled(f):
    @functools.wraps(f)
    def wrapper(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except ResourceLimitError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(3)
        except (QcoolError, ValueError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(2)

    return wrapper


def _parse_float_list(text: str, flag: str) -> list[float]:
    try:
        values = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise click.UsageError(f"{flag} expects comma-separated numbers")
    if not values:
        raise click.UsageError(f"{flag} is empty")
    return values


def _resolve_initial(initial_p, temp_mk, freq_ghz, *, required=True):
    """Return (probability, gap or None) from the temperature flags."""
    gap = EnergyGap.from_frequency_ghz(freq_ghz) if freq_ghz is not None else None
    if initial_p is not None and temp_mk is not None:
        raise click.UsageError("give --initial-p or --temp-mk, not both")
    if initial_p is not None:
        return float(initial_p), gap
    if temp_mk is not None:
        if gap is None:
            raise click.UsageError("--temp-mk needs --freq-ghz to fix the gap")
        p = probability_from_temperature(Temperature.from_millikelvin(temp_mk), gap)
        return p, gap
    if required:
        raise click.UsageError(
            "need --initial-p, or --temp-mk together with --freq-ghz"
        )
    return None, gap


def _temp_mk_or_none(p: float, gap: EnergyGap | None) -> float | None:
    # Inverted or infinite-temperature populations have no finite kelvin
    # value; sweeps keep going and leave the cell empty.
    if gap is None or p >= 0.5:
        return None
    return temperature_from_probability(p, gap).millikelvin


def _emit(rows: list[dict], columns: list[str], as_csv: bool, out: str | None) -> None:
    if as_csv:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow(
                "" if row[c] is None else row[c] for c in columns
            )
        text = buf.getvalue()
    else:
        text = json.dumps(rows, indent=2) + "\n"
    if out is None:
        click.echo(text, nl=False)
    else:
        Path(out).write_text(text)


def _analysis_row(config, initial_p, gap) -> dict:
    rep = methods.report(config, initial_p=initial_p, gap=gap, include_circuit=True)
    physical = gap is not None and not gap.dimensionless
    return {
        "method": rep.method,
        "total_qubits": rep.total_qubits,
        "initial_temp_mk": _temp_mk_or_none(initial_p, gap if physical else None),
        "final_temp_mk": _temp_mk_or_none(
            rep.final_excitation, gap if physical else None
        ),
        "initial_p": rep.initial_excitation,
        "final_p": rep.final_excitation,
        "noise_p": None,
        "work": rep.work_in_gap_units,
        "work_joules": rep.work_joules,
        "total_gates": rep.gate_counts.total,
        "resets": rep.gate_counts.resets,
    }


def _noise_row(config, initial_p, gap, noise_p, placement) -> dict:
    width = methods.total_qubits(config)
    circuit = methods.build_circuit(config, initial_p)
    v0 = thermal_product_vector(initial_p, width)
    v = simulate(
        circuit,
        v0,
        noise=NoiseModel(noise_p, placement),
        bath_excitation=initial_p,
    )
    final_p = marginal(v, 1)
    physical = gap is not None and not gap.dimensionless
    counts = gate_counts(circuit)
    # Work is the noiseless driving cost; depolarizing exchanges heat,
    # not work, in this model.
    work = methods.total_work_cost(config, initial_p)
    return {
        "method": methods.method_label(config),
        "total_qubits": width,
        "initial_temp_mk": _temp_mk_or_none(initial_p, gap if physical else None),
        "final_temp_mk": _temp_mk_or_none(final_p, gap if physical else None),
        "initial_p": initial_p,
        "final_p": final_p,
        "noise_p": noise_p,
        "work": work,
        "work_joules": work * gap.value if physical else None,
        "total_gates": counts.total,
        "resets": counts.resets,
    }


def _sweep_task(args) -> dict:
    config_doc, initial_p, freq_ghz = args
    config = methods.config_from_json(config_doc)
    gap = EnergyGap.from_frequency_ghz(freq_ghz) if freq_ghz else None
    return _analysis_row(config, initial_p, gap)


def _noise_task(args) -> dict:
    config_doc, initial_p, freq_ghz, noise_p, placement = args
    config = methods.config_from_json(config_doc)
    gap = EnergyGap.from_frequency_ghz(freq_ghz) if freq_ghz else None
    return _noise_row(config, initial_p, gap, noise_p, placement)


def _run_tasks(worker, tasks: list, jobs: int) -> list[dict]:
    if jobs <= 1 or len(tasks) <= 1:
        return [worker(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(worker, tasks))


def _load_config_doc(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise click.UsageError(f"cannot read config {path}: {exc}")


@click.group()
@click.version_option(package_name="qcool", prog_name="qcool")
def cli() -> None:
    """Cooling unitaries, circuits, and method analysis for qubit registers."""


@cli.command()
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), help="Method config JSON.")
@click.option("--cycles-file", type=click.Path(exists=True, dir_okay=False), help="Cycle-list JSON to synthesize directly.")
@click.option("--initial-p", type=float, help="Initial excitation probability.")
@click.option("--temp-mk", type=float, help="Initial temperature in millikelvin.")
@click.option("--freq-ghz", type=float, help="Transition frequency fixing the gap.")
@click.option("--simplify", is_flag=True, help="Cancel equal adjacent gates.")
@click.option("--out", type=click.Path(dir_okay=False), help="Output file (default stdout).")
@_handled
def generate(config_path, cycles_file, initial_p, temp_mk, freq_ghz, simplify, out):
    """Emit an OpenQASM 3 circuit."""
    if (config_path is None) == (cycles_file is None):
        raise click.UsageError("give exactly one of --config or --cycles-file")
    if cycles_file is not None:
        circuit = synthesize_circuit(unitary_from_json(cycles_file))
    else:
        config = methods.config_from_json(_load_config_doc(config_path))
        p, _ = _resolve_initial(initial_p, temp_mk, freq_ghz, required=False)
        circuit = methods.build_circuit(config, p)
    if simplify:
        circuit = simplify_adjacent(circuit)
    text = export_qasm(circuit)
    if out is None:
        click.echo(text, nl=False)
    else:
        Path(out).write_text(text)


@cli.command()
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--initial-p", type=float)
@click.option("--temp-mk", type=float)
@click.option("--freq-ghz", type=float)
@click.option("--csv", "as_csv", is_flag=True, help="CSV instead of JSON.")
@click.option("--out", type=click.Path(dir_okay=False))
@_handled
def analyze(config_path, initial_p, temp_mk, freq_ghz, as_csv, out):
    """Report final temperature, work, and circuit size for one config."""
    config = methods.config_from_json(_load_config_doc(config_path))
    p, gap = _resolve_initial(initial_p, temp_mk, freq_ghz)
    rows = [_analysis_row(config, p, gap)]
    _emit(rows, RESULT_COLUMNS, as_csv, out)


@cli.command()
@click.option("--config", "config_paths", type=click.Path(exists=True, dir_okay=False), multiple=True, required=True, help="Repeatable.")
@click.option("--probs", help="Comma-separated initial excitation probabilities.")
@click.option("--temps-mk", help="Comma-separated initial temperatures (needs --freq-ghz).")
@click.option("--freq-ghz", type=float)
@click.option("--jobs", type=int, default=1, show_default=True)
@click.option("--csv", "as_csv", is_flag=True)
@click.option("--out", type=click.Path(dir_okay=False))
@_handled
def sweep(config_paths, probs, temps_mk, freq_ghz, jobs, as_csv, out):
    """Analyze configs across initial temperatures; rows in given order."""
    if (probs is None) == (temps_mk is None):
        raise click.UsageError("give exactly one of --probs or --temps-mk")
    docs = [_load_config_doc(p) for p in config_paths]
    for doc in docs:
        methods.config_from_json(doc)
    if temps_mk is not None:
        if freq_ghz is None:
            raise click.UsageError("--temps-mk needs --freq-ghz")
        gap = EnergyGap.from_frequency_ghz(freq_ghz)
        ps = [
            probability_from_temperature(Temperature.from_millikelvin(t), gap)
            for t in _parse_float_list(temps_mk, "--temps-mk")
        ]
    else:
        ps = _parse_float_list(probs, "--probs")
    tasks = [(doc, p, freq_ghz) for doc in docs for p in ps]
    rows = _run_tasks(_sweep_task, tasks, jobs)
    _emit(rows, RESULT_COLUMNS, as_csv, out)


@cli.command("noise-sweep")
@click.option("--config", "config_paths", type=click.Path(exists=True, dir_okay=False), multiple=True, required=True)
@click.option("--initial-p", type=float)
@click.option("--temp-mk", type=float)
@click.option("--freq-ghz", type=float)
@click.option("--noise-probs", required=True, help="Comma-separated depolarizing probabilities.")
@click.option("--placement", type=click.Choice(["per-gate", "per-layer"]), default="per-gate", show_default=True)
@click.option("--jobs", type=int, default=1, show_default=True)
@click.option("--csv", "as_csv", is_flag=True)
@click.option("--out", type=click.Path(dir_okay=False))
@_handled
def noise_sweep(config_paths, initial_p, temp_mk, freq_ghz, noise_probs, placement, jobs, as_csv, out):
    """Simulate configs under gate noise; final column is per noise level."""
    docs = [_load_config_doc(p) for p in config_paths]
    for doc in docs:
        methods.config_from_json(doc)
    p, _ = _resolve_initial(initial_p, temp_mk, freq_ghz)
    noise = _parse_float_list(noise_probs, "--noise-probs")
    for np_ in noise:
        if not 0.0 <= np_ <= 1.0:
            raise click.UsageError("noise probabilities must lie in [0, 1]")
    tasks = [
        (doc, p, freq_ghz, np_, placement) for doc in docs for np_ in noise
    ]
    rows = _run_tasks(_noise_task, tasks, jobs)
    _emit(rows, RESULT_COLUMNS, as_csv, out)


@cli.command()
@click.option("--min-n", type=int, default=4, show_default=True)
@click.option("--max-n", type=int, default=18, show_default=True)
@click.option("--step", type=int, default=2, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--compact", is_flag=True, help="4-byte real values instead of complex.")
@click.option("--csv", "as_csv", is_flag=True)
@click.option("--out", type=click.Path(dir_okay=False))
@_handled
def bench(min_n, max_n, step, seed, compact, as_csv, out):
    """Sparse footprint and compose timing for random unitaries.

    The dense column is the analytic size of a 4-byte-real dense matrix,
    4 * 4**n bytes; it is never allocated.
    """
    import numpy as np

    from .unitary import random_permutation_unitary

    if min_n < 1 or max_n < min_n or step < 1:
        raise click.UsageError("need 1 <= min-n <= max-n and step >= 1")
    dtype = np.float32 if compact else np.complex128
    rows = []
    for n in range(min_n, max_n + 1, step):
        u1 = random_permutation_unitary(n, seed, value_dtype=dtype)
        u2 = random_permutation_unitary(n, seed + 1, value_dtype=dtype)
        best = math.inf
        for _ in range(3):
            t0 = time.perf_counter()
            u1.compose(u2)
            best = min(best, time.perf_counter() - t0)
        rows.append(
            {
                "n": n,
                "sparse_bytes": u1.memory_footprint(),
                "dense_bytes": 4 * 4**n,
                "compose_seconds": best,
            }
        )
    _emit(rows, BENCH_COLUMNS, as_csv, out)


def main() -> None:
    cli()


if __name__ == "__main__":
    main()
