"""
Markdown tables of benchmark results: one row per dataset, one column per
measure, then Sum and Average rows and a line comparing each measure's
average with the best one.

In every row the lowest mean is bold, and so is any other mean that lies
within the standard deviation of that best cell.
"""
from __future__ import annotations

from typing import Dict, List, Optional, Sequence

from evaluation.benchmark import BenchmarkCell, BenchmarkReport


def _fmt(value: Optional[float], digits: int = 2) -> str:
    return "n/a" if value is None else f"{value:.{digits}f}"


def highlighted(cells: Sequence[Optional[BenchmarkCell]]) -> List[bool]:
    ok = [c for c in cells if c is not None and c.ok]
    if not ok:
        return [False] * len(cells)
    best = min(ok, key=lambda c: c.mean)
    return [c is not None and c.ok and (c.mean == best.mean or c.mean - best.mean < best.std) for c in cells]


def column_totals(report: BenchmarkReport, epochs: int, measures: Sequence[str], datasets: Sequence[str]) -> Dict[str, Dict[str, Optional[float]]]:
    """Sum and average of the per-dataset means; None when any cell in the column failed."""
    totals: Dict[str, Dict[str, Optional[float]]] = {}
    for m in measures:
        means = []
        for d in datasets:
            cell = report.cell(d, m, epochs)
            means.append(cell.mean if cell is not None and cell.ok else None)
        if not means or any(v is None for v in means):
            totals[m] = {"sum": None, "average": None}
        else:
            total = float(sum(means))
            totals[m] = {"sum": total, "average": total / len(means)}
    return totals


def relative_losses(totals: Dict[str, Dict[str, Optional[float]]]) -> Dict[str, float]:
    """Average loss of each measure divided by the best average."""
    averages = {m: t["average"] for m, t in totals.items() if t["average"] is not None}
    if not averages:
        return {}
    best = min(averages.values())
    if best == 0:
        return {m: (1.0 if v == 0 else float("inf")) for m, v in averages.items()}
    return {m: v / best for m, v in averages.items()}


def render_table(
    report: BenchmarkReport,
    epochs: int,
    measures: Optional[Sequence[str]] = None,
    datasets: Optional[Sequence[str]] = None,
) -> str:
    measures = list(measures or report.measure_names)
    datasets = list(datasets or report.dataset_names)

    lines = [
        f"Validation retrieval loss after {epochs} epochs "
        f"({report.config.get('k', '?')}-fold x {report.config.get('repeats', '?')} stratified CV), mean (std)",
        "",
        "| dataset | " + " | ".join(measures) + " |",
        "|---" * (len(measures) + 1) + "|",
    ]
    for d in datasets:
        cells = [report.cell(d, m, epochs) for m in measures]
        marks = highlighted(cells)
        row = []
        for cell, bold in zip(cells, marks):
            if cell is None:
                row.append("")
            elif not cell.ok:
                row.append("failed")
            else:
                text = f"{_fmt(cell.mean)} ({_fmt(cell.std)})"
                row.append(f"**{text}**" if bold else text)
        lines.append(f"| {d} | " + " | ".join(row) + " |")

    totals = column_totals(report, epochs, measures, datasets)
    lines.append("| Sum | " + " | ".join(_fmt(totals[m]["sum"]) for m in measures) + " |")
    lines.append("| Average | " + " | ".join(_fmt(totals[m]["average"]) for m in measures) + " |")

    rel = relative_losses(totals)
    if rel:
        ranked = sorted(rel.items(), key=lambda kv: kv[1])
        parts = [f"{m} {v:.2f}" for m, v in ranked]
        lines.append("")
        lines.append(f"Average loss relative to the best measure ({ranked[0][0]}): " + ", ".join(parts))

    failed = [c for c in report.cells if c.epochs == epochs and not c.ok]
    if failed:
        lines.append("")
        lines.append("Failed cells:")
        for c in failed:
            lines.append(f"- {c.dataset}/{c.measure}: {c.diagnostic}")
    return "\n".join(lines) + "\n"
