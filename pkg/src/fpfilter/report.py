"""Report serialization: human text, stable JSON, and CSV + figure files.

The JSON schema is versioned; CI consumers should pin on ``schema``.  When a
report directory is given, the delimited data and a rendered matplotlib
figure land next to each other.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

from .engine import SolveResult
from .minifloat import FpVal, to_decimal, to_literal
from .oracle import PropertyReport

SCHEMA = "fpfilter-report/1"


def _witness_entry(v: FpVal) -> dict:
    return {"bits": to_literal(v), "decimal": to_decimal(v)}


def solve_report(result: SolveResult, constants: set[str],
                 trace: list[dict] | None) -> dict:
    doc = {
        "schema": SCHEMA,
        "command": "solve",
        "verdict": result.verdict,
        "nodes": result.nodes,
        "elapsed_s": round(result.elapsed, 6),
        "stats": result.stats.as_dict(),
    }
    if result.witness is not None:
        doc["witness"] = {
            name: _witness_entry(v)
            for name, v in result.witness.items()
            if name not in constants
        }
        doc["residues"] = result.residues
    if trace is not None:
        doc["trace"] = trace
    return doc


def solve_text(doc: dict) -> str:
    lines = [f"verdict: {doc['verdict']}"]
    if "witness" in doc:
        lines.append("witness:")
        for name, entry in doc["witness"].items():
            lines.append(f"  {name} = {entry['bits']}  ({entry['decimal']})")
        lines.append("residues:")
        for r in doc["residues"]:
            mark = "ok" if r["match"] else "MISMATCH"
            lines.append(
                f"  {r['constraint']}: computed {r['computed']} "
                f"vs stored {r['stored']} [{mark}]"
            )
    stats = doc["stats"]
    lines.append(
        "stats: nodes={nodes} elapsed={elapsed_s}s".format(**doc)
    )
    for kind in ("classical", "maxulp", "compare"):
        fires = stats["fires"].get(kind, 0)
        prunings = stats["prunings"].get(kind, 0)
        lines.append(f"  {kind}: fired {fires}, pruned {prunings}")
    if stats["maxulp_rules"]:
        rules = ", ".join(f"{k}={v}" for k, v in sorted(stats["maxulp_rules"].items()))
        lines.append(f"  maxulp rules: {rules}")
    if "trace" in doc:
        lines.append("trace:")
        for i, step in enumerate(doc["trace"]):
            lines.append(
                f"  step {i}: [{step['filter']}] {step['constraint']} "
                f"narrowed {step['variable']}: {step['before']} -> {step['after']}"
            )
    return "\n".join(lines)


def propagate_report(net, status: str, trace: list[dict] | None) -> dict:
    from .interval import to_text

    doc = {
        "schema": SCHEMA,
        "command": "explain",
        "verdict": status,
        "stats": net.stats.as_dict(),
    }
    if status == "FIXPOINT":
        doc["domains"] = {n: to_text(d) for n, d in net.domains.items()}
    else:
        doc["failed_constraint"] = net.failed_constraint
    if trace is not None:
        doc["trace"] = trace
    return doc


def propagate_text(doc: dict) -> str:
    lines = [f"propagation: {doc['verdict']}"]
    if "failed_constraint" in doc:
        lines.append(f"failed at: {doc['failed_constraint']}")
    if "trace" in doc:
        for i, step in enumerate(doc["trace"]):
            lines.append(
                f"  step {i}: [{step['filter']}] {step['constraint']} "
                f"narrowed {step['variable']}: {step['before']} -> {step['after']}"
            )
    if "domains" in doc:
        lines.append("fixpoint domains:")
        for name, text in doc["domains"].items():
            lines.append(f"  {name} in {text}")
    return "\n".join(lines)


def verify_report(report: PropertyReport) -> dict:
    return {
        "schema": SCHEMA,
        "command": "verify",
        "format": report.fmt_name,
        "passed": report.passed,
        "properties": [
            {
                "name": r.name,
                "instances": r.instances,
                "failures": r.failures,
                "counterexample": r.counterexample,
                "seconds": round(r.seconds, 3),
            }
            for r in report.results
        ],
    }


def verify_text(doc: dict) -> str:
    lines = []
    for r in doc["properties"]:
        status = "PASS" if r["failures"] == 0 else "FAIL"
        lines.append(
            f"{status} {r['name']} (instances={r['instances']}, "
            f"failures={r['failures']}, {r['seconds']}s)"
        )
        if r["counterexample"]:
            lines.append(f"     counterexample: {r['counterexample']}")
    lines.append(
        f"{'all properties hold' if doc['passed'] else 'FAILURES PRESENT'} "
        f"on {doc['format']}"
    )
    return "\n".join(lines)


def dump_json(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=False)


# ---------------------------------------------------------------------------
# Delimited output + rendered figures
# ---------------------------------------------------------------------------

def _figure_backend():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def write_solve_outputs(doc: dict, outdir: str | Path) -> list[Path]:
    """stats.csv plus a pruning-attribution bar chart, side by side."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    stats = doc["stats"]
    kinds = ("classical", "maxulp", "compare")
    csv_path = outdir / "solve_stats.csv"
    with csv_path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["filter", "fires", "prunings"])
        for kind in kinds:
            w.writerow(
                [kind, stats["fires"].get(kind, 0), stats["prunings"].get(kind, 0)]
            )
    plt = _figure_backend()
    fig, ax = plt.subplots(figsize=(5, 3))
    xs = range(len(kinds))
    ax.bar([x - 0.2 for x in xs], [stats["fires"].get(k, 0) for k in kinds],
           width=0.4, label="fires")
    ax.bar([x + 0.2 for x in xs], [stats["prunings"].get(k, 0) for k in kinds],
           width=0.4, label="prunings")
    ax.set_xticks(list(xs), kinds)
    ax.set_ylabel("count")
    ax.set_title(f"filter activity (verdict: {doc['verdict']})")
    ax.legend()
    fig.tight_layout()
    png_path = outdir / "solve_stats.png"
    fig.savefig(png_path, dpi=120)
    plt.close(fig)
    return [csv_path, png_path]


def write_verify_outputs(doc: dict, outdir: str | Path) -> list[Path]:
    """properties.csv plus an instance-count chart colored by status."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    props = doc["properties"]
    csv_path = outdir / "verify_properties.csv"
    with csv_path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["property", "instances", "failures", "seconds"])
        for r in props:
            w.writerow([r["name"], r["instances"], r["failures"], r["seconds"]])
    plt = _figure_backend()
    fig, ax = plt.subplots(figsize=(7, 0.35 * len(props) + 1.2))
    names = [r["name"] for r in props]
    counts = [max(r["instances"], 1) for r in props]
    colors = ["#2a9d4e" if r["failures"] == 0 else "#c23b22" for r in props]
    ax.barh(names, counts, color=colors)
    ax.set_xscale("log")
    ax.set_xlabel("instances checked (log scale)")
    ax.set_title(f"property suite on {doc['format']}")
    ax.invert_yaxis()
    fig.tight_layout()
    png_path = outdir / "verify_properties.png"
    fig.savefig(png_path, dpi=120)
    plt.close(fig)
    return [csv_path, png_path]
