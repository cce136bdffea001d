"""Compare-report files: a TSV of non-agreeing formulas, a text summary and a bar chart."""
from __future__ import annotations

import csv
from pathlib import Path
from typing import Optional

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .bridge import CompareReport  # noqa: E402

TSV_HEADER = ("index", "formula", "left_verdict", "right_verdict", "kind", "witness")

_COLORS = {"agree": "#4c72b0", "tie": "#dd8452", "hard": "#c44e52"}


def write_tsv(report: CompareReport, path: Path) -> Path:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, delimiter="\t", lineterminator="\n")
        w.writerow(TSV_HEADER)
        for r in report.rows:
            witness = r.left_witness or r.right_witness
            w.writerow((r.index, r.formula, r.left, r.right, r.kind, witness))
    return path


def plot_by_size(report: CompareReport, path: Path) -> Path:
    sizes = sorted({s for s, _ in report.by_size})
    fig, ax = plt.subplots(figsize=(6.4, 3.6))
    width = 0.27
    for i, kind in enumerate(("agree", "tie", "hard")):
        counts = [report.by_size.get((s, kind), 0) for s in sizes]
        xs = [s + (i - 1) * width for s in sizes]
        ax.bar(xs, counts, width, label=kind, color=_COLORS[kind])
    ax.set_yscale("symlog", linthresh=1)
    ax.set_xticks(sizes)
    ax.set_xlabel("connectives")
    ax.set_ylabel("formulas")
    ax.set_title(f"{report.left} vs {report.right} ({report.fragment})")
    ax.spines["right"].set_visible(False)
    ax.spines["top"].set_visible(False)
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=100, metadata={"Software": None})
    plt.close(fig)
    return path


def write_report(report: CompareReport, outdir, stem: Optional[str] = None) -> dict:
    """Write ``<stem>.tsv``, ``<stem>.txt`` and ``<stem>.png``; return their paths."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    stem = stem or f"compare_{report.left}_{report.right}".replace("+", "p")
    tsv = write_tsv(report, outdir / f"{stem}.tsv")
    txt = outdir / f"{stem}.txt"
    txt.write_text(report.summary() + "\n")
    png = plot_by_size(report, outdir / f"{stem}.png")
    return {"tsv": tsv, "summary": txt, "chart": png}
