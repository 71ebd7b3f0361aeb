"""Report rendering: delimited tables plus matplotlib figures on disk.

Every report lands in one directory: a JSON document for scripts, a CSV with
one row per case, and PNG summary figures for humans.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .verify import SuiteResult


def write_verify_report(results: Sequence[SuiteResult], outdir: Path) -> dict:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    doc = {"suites": [r.to_json() for r in results],
           "passed": all(r.passed for r in results)}
    (outdir / "verify_report.json").write_text(json.dumps(doc, indent=2))

    with open(outdir / "verify_report.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["suite", "case", "status", "detail"])
        for r in results:
            for label, status, detail in r.rows:
                writer.writerow([r.name, label, status, detail])

    fig, (ax_counts, ax_time) = plt.subplots(1, 2, figsize=(11, 4.2))
    names = [r.name for r in results]
    passes = [r.cases - len(r.failures) for r in results]
    fails = [len(r.failures) for r in results]
    ax_counts.bar(names, passes, color="#2a9d8f", label="pass")
    ax_counts.bar(names, fails, bottom=passes, color="#e76f51", label="fail")
    ax_counts.set_ylabel("cases")
    ax_counts.set_title("verification cases")
    ax_counts.legend()
    ax_counts.tick_params(axis="x", rotation=30)
    ax_time.bar(names, [r.elapsed for r in results], color="#264653")
    ax_time.set_ylabel("seconds")
    ax_time.set_title("suite wall time")
    ax_time.tick_params(axis="x", rotation=30)
    fig.tight_layout()
    fig.savefig(outdir / "verify_summary.png", dpi=130)
    plt.close(fig)
    return doc


def write_bench_report(rows: Sequence[dict], outdir: Path) -> dict:
    """rows: {instance, flavor, width, outcome, nodes, seconds, status}."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    doc = {"rows": list(rows)}
    (outdir / "bench.json").write_text(json.dumps(doc, indent=2))
    with open(outdir / "bench.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["instance", "flavor", "width", "outcome",
                         "nodes", "seconds", "nodes_per_second", "status"])
        for row in rows:
            writer.writerow([row["instance"], row["flavor"], row["width"],
                             row.get("outcome", ""), row.get("nodes", ""),
                             f"{row.get('seconds', 0):.4f}",
                             f"{row.get('nodes_per_second', 0):.0f}",
                             row["status"]])

    solved = [r for r in rows if r["status"] == "solved"]
    if solved:
        fig, (ax_nodes, ax_rate) = plt.subplots(1, 2, figsize=(11, 4.2))
        labels = [r["instance"] for r in solved]
        ax_nodes.barh(labels, [r["nodes"] for r in solved], color="#264653")
        ax_nodes.set_xlabel("nodes searched")
        ax_nodes.set_title("search size")
        ax_rate.barh(labels, [r["nodes_per_second"] for r in solved],
                     color="#2a9d8f")
        ax_rate.set_xlabel("nodes / second")
        ax_rate.set_title("throughput")
        fig.tight_layout()
        fig.savefig(outdir / "bench.png", dpi=130)
        plt.close(fig)
    return doc
