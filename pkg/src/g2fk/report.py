"""Tab-separated tables and figures for a finished run."""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .checks import STATUSES  # noqa: E402

STATUS_COLORS = {"pass": "#4c956c", "fail": "#d1495b", "skip": "#a0a0a0", "finding": "#edae49"}


def write_tsv(path: Path, header: list[str], rows) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, delimiter="\t", lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow(["" if v is None else v for v in row])
    return path


def checks_tsv(report: dict, path: Path) -> Path:
    rows = [(c["id"], c["status"], c["expected"], c["actual"], c["witness"]) for c in report["checks"]]
    return write_tsv(path, ["id", "status", "expected", "actual", "witness"], rows)


def status_figure(report: dict, path: Path) -> Path:
    """Stacked bar of check statuses per suite."""
    suites = list(report["suites"])
    fig, ax = plt.subplots(figsize=(6, 0.6 * len(suites) + 1.6))
    left = [0] * len(suites)
    for status in STATUSES:
        counts = [report["suites"][s][status] for s in suites]
        ax.barh(suites, counts, left=left, color=STATUS_COLORS[status], label=status)
        left = [a + b for a, b in zip(left, counts)]
    ax.set_xlabel("checks")
    ax.set_title(f"p = {report['p']}, model = {report['model']}")
    ax.invert_yaxis()
    ax.legend(loc="lower right", fontsize="small")
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata={"Software": None})
    plt.close(fig)
    return Path(path)


def order_census_rows(census: dict[int, int]) -> list[tuple[int, int]]:
    return sorted(census.items())


def order_figure(census: dict[int, int], p: int, model: str, path: Path) -> Path:
    orders = sorted(census)
    fig, ax = plt.subplots(figsize=(5, 3.2))
    ax.bar([str(o) for o in orders], [census[o] for o in orders], color="#3d5a80")
    ax.set_yscale("log")
    ax.set_xlabel("element order")
    ax.set_ylabel("elements")
    ax.set_title(f"element orders of S, p = {p} ({model})")
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata={"Software": None})
    plt.close(fig)
    return Path(path)


def subset_orbit_figure(rows, path: Path) -> Path:
    """Bar chart of orbit lengths; rows come from ``labelled_census``."""
    fig, ax = plt.subplots(figsize=(6, 3.2))
    ax.bar([row[0] for row in rows], [row[3] for row in rows], color="#98c1d9", edgecolor="#293241")
    ax.set_xlabel("orbit")
    ax.set_ylabel("length")
    ax.tick_params(axis="x", rotation=60, labelsize="small")
    ax.set_title(f"{len(rows)} orbits on nonempty subsets, total {sum(row[3] for row in rows)}")
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata={"Software": None})
    plt.close(fig)
    return Path(path)
