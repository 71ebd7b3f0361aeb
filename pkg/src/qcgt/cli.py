"""Command-line front door: solve positions, run the verification suites,
build reductions, benchmark, and serve the play API.

JSON is the single interchange format; text output renders the same data.
Exit codes: 0 solved/ok, 1 failure, 2 input error, 3 resource limit hit.
"""

from __future__ import annotations

import json
import sys
import time
from pathlib import Path

import click

from .core import (
    Flavor,
    GameConfig,
    Superposition,
    initial_state,
    move_to_json,
)
from .report import write_bench_report, write_verify_report
from .rulesets import InvalidInstanceError, instance_from_json
from .solver import ResourceExceededError, SolveLimits, solve
from .verify import SUITES, run_suite


def _fail_input(message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(2)


def _load_instance(path: str):
    try:
        data = json.loads(Path(path).read_text())
        return instance_from_json(data)
    except FileNotFoundError:
        _fail_input(f"no such file: {path}")
    except (json.JSONDecodeError, InvalidInstanceError, ValueError, KeyError) as exc:
        _fail_input(f"bad instance {path}: {exc}")


def _load_state(ruleset, path: str | None):
    if path is None:
        return None
    try:
        data = json.loads(Path(path).read_text())
        realizations = [ruleset.position_from_json(r) for r in data["realizations"]]
        return Superposition.of(ruleset, realizations)
    except FileNotFoundError:
        _fail_input(f"no such file: {path}")
    except (json.JSONDecodeError, ValueError, KeyError, TypeError) as exc:
        _fail_input(f"bad state {path}: {exc}")


def _config_from_flags(flavor, width, budget_left, budget_right, dim_cap, demi):
    try:
        return GameConfig(flavor=Flavor.parse(flavor), width=width,
                          budget_left=budget_left, budget_right=budget_right,
                          dimension_cap=dim_cap, demi=demi)
    except ValueError as exc:
        _fail_input(str(exc))


@click.group()
def main():
    """Quantum combinatorial game toolkit."""


@main.command("solve")
@click.argument("instance_path")
@click.option("--flavor", default="D", help="quantum flavor: A, B, C, C', or D")
@click.option("--width", default=2, type=int, help="superposition width bound")
@click.option("--budget-left", type=int, default=None)
@click.option("--budget-right", type=int, default=None)
@click.option("--dim-cap", type=int, default=None)
@click.option("--demi", is_flag=True, help="classical moves only")
@click.option("--state", "state_path", default=None,
              help="JSON superposition to start from instead of the instance start")
@click.option("--max-nodes", default=20_000_000, type=int)
@click.option("--max-seconds", default=3600.0, type=float)
@click.option("--json", "as_json", is_flag=True, help="emit the raw JSON report")
def cmd_solve(instance_path, flavor, width, budget_left, budget_right, dim_cap,
              demi, state_path, max_nodes, max_seconds, as_json):
    """Outcome class and best move of a (quantum) position."""
    ruleset = _load_instance(instance_path)
    config = _config_from_flags(flavor, width, budget_left, budget_right,
                                dim_cap, demi)
    board = _load_state(ruleset, state_path)
    state = initial_state(ruleset, config, board)
    try:
        limits = SolveLimits(max_nodes=max_nodes, max_seconds=max_seconds)
    except ValueError as exc:
        _fail_input(str(exc))
    start = time.monotonic()
    try:
        result = solve(state, limits)
    except ResourceExceededError as exc:
        click.echo(json.dumps({"status": "exceeded", "reason": str(exc)}))
        sys.exit(3)
    report = {
        "status": "solved",
        "outcome": result.outcome.value,
        "nodes": result.nodes,
        "table_hits": result.table_hits,
        "seconds": round(time.monotonic() - start, 4),
    }
    if result.best_move is not None:
        report["best"] = move_to_json(ruleset, result.best_move)
    if as_json:
        click.echo(json.dumps(report))
    else:
        click.echo(f"outcome: {report['outcome']}")
        if "best" in report:
            click.echo(f"best move: {json.dumps(report['best'])}")
        click.echo(f"nodes: {report['nodes']} ({report['seconds']}s)")
    sys.exit(0)


@main.command("verify")
@click.argument("suite", type=click.Choice(sorted(SUITES) + ["all"]))
@click.option("--seed", type=int, default=None, help="seed for randomized suites")
@click.option("--count", type=int, default=None, help="override the case count")
@click.option("--report-dir", default=None,
              help="write JSON/CSV/PNG reports into this directory")
def cmd_verify(suite, seed, count, report_dir):
    """Run a named verification suite (or all of them)."""
    names = sorted(SUITES) if suite == "all" else [suite]
    results = []
    for name in names:
        result = run_suite(name, seed=seed, count=count)
        results.append(result)
        status = "pass" if result.passed else "FAIL"
        click.echo(f"{name}: {status} ({result.cases} cases, "
                   f"{result.elapsed:.1f}s, seed={result.seed})")
        for label, detail in result.failures:
            click.echo(f"  FAIL {label}: {detail}")
    if report_dir:
        doc = write_verify_report(results, Path(report_dir))
        click.echo(f"report written to {report_dir} "
                   f"(verify_report.json, verify_report.csv, verify_summary.png)")
    sys.exit(0 if all(r.passed for r in results) else 1)


@main.command("reduce")
@click.argument("kind")
@click.argument("input_path")
@click.argument("output_dir")
def cmd_reduce(kind, input_path, output_dir):
    """Build a reduction target instance plus its provenance sidecar."""
    from .reductions import BUILDERS

    builder = BUILDERS.get(kind)
    if builder is None:
        _fail_input(f"unknown reduction kind {kind!r}; "
                    f"choose from {', '.join(sorted(BUILDERS))}")
    src = _load_instance(input_path)
    try:
        output = builder(src)
    except ValueError as exc:
        _fail_input(str(exc))
    outdir = Path(output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    stem = Path(input_path).stem
    instance_file = outdir / f"{stem}.{kind}.instance.json"
    instance_file.write_text(json.dumps(output.instance.to_json(), indent=2))
    written = [instance_file]
    if isinstance(output.state, Superposition):
        state_file = outdir / f"{stem}.{kind}.state.json"
        state_file.write_text(json.dumps({
            "realizations": [output.instance.position_to_json(r)
                             for r in output.state.realizations]}, indent=2))
        written.append(state_file)
    sidecar = outdir / f"{stem}.{kind}.provenance.json"
    sidecar.write_text(json.dumps(output.provenance, indent=2, default=str))
    written.append(sidecar)
    for path in written:
        click.echo(str(path))
    sys.exit(0)


@main.command("serve")
@click.option("--listen", default="127.0.0.1:8000", envvar="QCGT_LISTEN",
              help="address:port to bind (env QCGT_LISTEN)")
@click.option("--snapshot", default=None, help="JSON snapshot file for sessions")
@click.option("--static-dir", default=None, help="serve the built web UI from here")
@click.option("--engine-seconds", default=5.0, type=float,
              help="per-move engine time budget")
def cmd_serve(listen, snapshot, static_dir, engine_seconds):
    """Serve the game-session API (and optionally the web UI)."""
    import uvicorn

    from .service import SessionStore, create_app

    host, _, port_text = listen.rpartition(":")
    if not host or not port_text.isdigit():
        _fail_input(f"--listen must look like host:port, got {listen!r}")
    if static_dir is not None and not Path(static_dir).is_dir():
        _fail_input(f"--static-dir {static_dir} is not a directory")
    store = SessionStore(snapshot_path=Path(snapshot) if snapshot else None,
                         engine_seconds=engine_seconds)
    app = create_app(store, static_dir=Path(static_dir) if static_dir else None)
    try:
        uvicorn.run(app, host=host, port=int(port_text), log_level="warning")
    except SystemExit:
        raise
    except OSError as exc:
        click.echo(f"error: cannot bind {listen}: {exc}", err=True)
        sys.exit(1)
    finally:
        store.save_snapshot()


@main.command("bench")
@click.argument("instance_paths", nargs=-1)
@click.option("--flavor", default="D")
@click.option("--width", default=2, type=int)
@click.option("--max-nodes", default=20_000_000, type=int)
@click.option("--max-seconds", default=60.0, type=float)
@click.option("--jobs", default=None, type=int, envvar="QCGT_JOBS",
              help="solver pool size (env QCGT_JOBS; default: logical cores)")
@click.option("--report-dir", default=None,
              help="write bench.json/bench.csv/bench.png into this directory")
def cmd_bench(instance_paths, flavor, width, max_nodes, max_seconds, jobs,
              report_dir):
    """Solve each instance and tabulate nodes/second."""
    import os
    from concurrent.futures import ThreadPoolExecutor

    config = _config_from_flags(flavor, width, None, None, None, False)

    def run_one(path: str) -> dict:
        ruleset = _load_instance(path)
        state = initial_state(ruleset, config)
        start = time.monotonic()
        try:
            limits = SolveLimits(max_nodes=max_nodes, max_seconds=max_seconds)
            result = solve(state, limits)
            elapsed = time.monotonic() - start
            return {
                "instance": Path(path).name,
                "flavor": config.flavor.display(),
                "width": width,
                "outcome": result.outcome.value,
                "nodes": result.nodes,
                "seconds": elapsed,
                "nodes_per_second": result.nodes / elapsed if elapsed > 0 else 0.0,
                "status": "solved",
            }
        except ResourceExceededError:
            return {
                "instance": Path(path).name,
                "flavor": config.flavor.display(),
                "width": width,
                "seconds": time.monotonic() - start,
                "nodes_per_second": 0.0,
                "status": "exceeded",
            }

    pool_size = max(1, jobs if jobs is not None else (os.cpu_count() or 1))
    if instance_paths:
        with ThreadPoolExecutor(max_workers=pool_size) as pool:
            rows = list(pool.map(run_one, instance_paths))
    else:
        rows = []
    header = f"{'instance':30s} {'outcome':8s} {'nodes':>10s} {'sec':>8s} {'nodes/s':>10s}"
    click.echo(header)
    for row in rows:
        if row["status"] == "solved":
            click.echo(f"{row['instance']:30s} {row['outcome']:8s} "
                       f"{row['nodes']:>10d} {row['seconds']:>8.3f} "
                       f"{row['nodes_per_second']:>10.0f}")
        else:
            click.echo(f"{row['instance']:30s} {'exceeded':8s} {'-':>10s} "
                       f"{row['seconds']:>8.3f} {'-':>10s}")
    if report_dir:
        write_bench_report(rows, Path(report_dir))
        click.echo(f"report written to {report_dir}")
    sys.exit(0)


if __name__ == "__main__":
    main()
