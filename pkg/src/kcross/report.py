"""Experiment reports: JSON + CSV summaries, SVG drawings, and figures.

The SVG drawing is written by hand so that it contains exactly one <line>
element per edge (a strict format contract); the richer figures go through
matplotlib. The CSV schema is frozen so longitudinal experiment tables diff
cleanly; see README for the column list.
"""

from __future__ import annotations

import colorsys
import csv
import json
import time
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path


import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
from matplotlib.collections import LineCollection

from .bundles import BundleParams, PipelineStageError
from .certificate import VacuousInstanceError, end_to_end
from .coloring import (
    ColoringStats,
    EdgeColoring,
    coloring_stats,
    derandomized_coloring,
    random_coloring,
)
from .fileio import certificate_json, frac_json
from .graph import GeometricGraph, crossing_set, density

PIPELINES = ("baseline-random", "greedy", "full-theorem")

CSV_COLUMNS = [
    "instance",
    "pipeline",
    "n",
    "m",
    "density_num",
    "density_den",
    "k",
    "seed",
    "crs",
    "mono",
    "hetero",
    "ratio_num",
    "ratio_den",
    "ratio_decimal",
    "vacuous",
    "margin_num",
    "margin_den",
    "bound_num",
    "bound_den",
    "status",
    "failed_stage",
    "runtime_s",
]


def palette(k: int) -> list[str]:
    """k visually distinct hex colors."""
    out = []
    for i in range(k):
        r, g, b = colorsys.hsv_to_rgb(i / max(k, 1), 0.85, 0.82)
        out.append(f"#{int(r * 255):02x}{int(g * 255):02x}{int(b * 255):02x}")
    return out


def write_svg(
    g: GeometricGraph,
    coloring: EdgeColoring | None,
    path: str | Path,
    size: int = 800,
) -> None:
    """Drawing with exactly one <line> element per edge, colored by the
    coloring (single color when none is given)."""
    xs = [p.x for p in g.vertices] or [0]
    ys = [p.y for p in g.vertices] or [0]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    span = max(x1 - x0, y1 - y0, 1)
    pad = 0.04 * span

    def sx(x):
        return (x - x0 + pad) * size / (span + 2 * pad)

    def sy(y):
        # flip so +y points up in the image
        return size - (y - y0 + pad) * size / (span + 2 * pad)

    colors = palette(coloring.k) if coloring else ["#1f77b4"]
    svg = ET.Element(
        "svg",
        xmlns="http://www.w3.org/2000/svg",
        width=str(size),
        height=str(size),
        viewBox=f"0 0 {size} {size}",
    )
    for idx in range(g.m):
        u, v = g.edges[idx]
        p, q = g.vertices[u], g.vertices[v]
        c = colors[coloring.colors[idx] - 1] if coloring else colors[0]
        ET.SubElement(
            svg,
            "line",
            x1=f"{sx(p.x):.2f}",
            y1=f"{sy(p.y):.2f}",
            x2=f"{sx(q.x):.2f}",
            y2=f"{sy(q.y):.2f}",
            stroke=c,
            attrib={"stroke-width": "1.2"},
        )
    Path(path).write_bytes(ET.tostring(svg))


def draw_figure(
    g: GeometricGraph, coloring: EdgeColoring | None, path: str | Path, dpi: int = 150
) -> None:
    """Matplotlib rendering of the colored drawing."""
    colors = palette(coloring.k) if coloring else ["#1f77b4"]
    segs = []
    cols = []
    for idx in range(g.m):
        u, v = g.edges[idx]
        p, q = g.vertices[u], g.vertices[v]
        segs.append([(p.x, p.y), (q.x, q.y)])
        cols.append(colors[coloring.colors[idx] - 1] if coloring else colors[0])
    fig, ax = plt.subplots(figsize=(6, 6))
    ax.add_collection(LineCollection(segs, colors=cols, linewidths=0.9))
    ax.scatter(
        [p.x for p in g.vertices], [p.y for p in g.vertices], s=10, c="black", zorder=3
    )
    ax.set_aspect("equal")
    ax.autoscale()
    ax.axis("off")
    fig.tight_layout()
    fig.savefig(path, dpi=dpi)
    plt.close(fig)


def ratio_figure(
    stats: ColoringStats, k: int, bound: Fraction | None, path: str | Path, dpi: int = 150
) -> None:
    """Bar chart of the achieved same-color crossing ratio against 1/k and,
    when a certificate exists, the guaranteed bound."""
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.bar(["achieved"], [float(stats.ratio)], color="#2a7fba", width=0.5)
    ax.axhline(1 / k, color="#444444", linestyle="--", label=f"1/k = {1 / k:.4f}")
    if bound is not None:
        ax.axhline(
            float(bound), color="#bb3333", linestyle=":", label=f"bound = {float(bound):.4f}"
        )
    ax.set_ylabel("same-color crossing ratio")
    ax.set_ylim(0, max(1 / k * 1.3, float(stats.ratio) * 1.2, 1e-6))
    ax.legend(loc="lower right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=dpi)
    plt.close(fig)


@dataclass
class ExperimentConfig:
    graph: GeometricGraph
    pipeline: str
    k: int
    seed: int = 0
    instance_name: str = "instance"
    out_dir: str | Path = "."
    svg: bool = False
    figures: bool = True
    eps: Fraction | None = None
    params: BundleParams | None = None

    def __post_init__(self) -> None:
        if self.pipeline not in PIPELINES:
            raise ValueError(f"unknown pipeline {self.pipeline!r}, expected {PIPELINES}")
        if self.k < 2:
            raise ValueError(f"k must be >= 2, got {self.k}")


@dataclass
class Report:
    instance: str
    pipeline: str
    n: int
    m: int
    density: Fraction
    k: int
    seed: int
    stats: ColoringStats | None
    certificate: object | None
    status: str  # ok | vacuous | failed
    failed_stage: str | None
    runtime_s: float
    files: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        out = {
            "instance": self.instance,
            "pipeline": self.pipeline,
            "n": self.n,
            "m": self.m,
            "density": {**frac_json(self.density), "decimal": float(self.density)},
            "k": self.k,
            "seed": self.seed,
            "status": self.status,
            "failed_stage": self.failed_stage,
            "runtime_s": round(self.runtime_s, 6),
            "files": self.files,
        }
        if self.stats is not None:
            out["stats"] = {
                "mono": self.stats.mono,
                "hetero": self.stats.hetero,
                "crs": self.stats.total,
                "ratio": {
                    **frac_json(self.stats.ratio),
                    "decimal": float(self.stats.ratio),
                },
                "vacuous": self.stats.vacuous,
            }
        if self.certificate is not None:
            cj = certificate_json(self.certificate)
            for key in (
                "side_fraction",
                "edge_fraction",
                "crossing_slack",
                "core_margin",
                "margin",
                "ratio_bound",
                "achieved_ratio",
            ):
                cj[key]["decimal"] = cj[key]["num"] / cj[key]["den"]
            out["certificate"] = cj
        return out


def csv_row(report: Report) -> dict:
    stats = report.stats
    cert = report.certificate
    return {
        "instance": report.instance,
        "pipeline": report.pipeline,
        "n": report.n,
        "m": report.m,
        "density_num": report.density.numerator,
        "density_den": report.density.denominator,
        "k": report.k,
        "seed": report.seed,
        "crs": stats.total if stats else "",
        "mono": stats.mono if stats else "",
        "hetero": stats.hetero if stats else "",
        "ratio_num": stats.ratio.numerator if stats else "",
        "ratio_den": stats.ratio.denominator if stats else "",
        "ratio_decimal": f"{float(stats.ratio):.8f}" if stats else "",
        "vacuous": int(stats.vacuous) if stats else "",
        "margin_num": cert.margin.numerator if cert else "",
        "margin_den": cert.margin.denominator if cert else "",
        "bound_num": cert.ratio_bound.numerator if cert else "",
        "bound_den": cert.ratio_bound.denominator if cert else "",
        "status": report.status,
        "failed_stage": report.failed_stage or "",
        "runtime_s": f"{report.runtime_s:.4f}",
    }


def append_csv(report: Report, path: str | Path) -> None:
    path = Path(path)
    fresh = not path.exists()
    with path.open("a", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
        if fresh:
            writer.writeheader()
        writer.writerow(csv_row(report))


def run_experiment(config: ExperimentConfig) -> Report:
    """Run one named pipeline and emit report.json, a summary.csv row, the
    figures, and optionally an SVG drawing, into the output directory."""
    g = config.graph
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    start = time.perf_counter()

    coloring = None
    stats = None
    cert = None
    status = "ok"
    failed_stage = None

    crossing = crossing_set(g)
    if crossing.count == 0:
        status = "vacuous"
        if g.m:
            coloring = random_coloring(g, config.k, config.seed)
            stats = coloring_stats(g, coloring, crossing=crossing)
        else:
            stats = ColoringStats(mono=0, hetero=0, total=0, ratio=Fraction(0), vacuous=True)
    elif config.pipeline == "baseline-random":
        coloring = random_coloring(g, config.k, config.seed)
        stats = coloring_stats(g, coloring, crossing=crossing)
    elif config.pipeline == "greedy":
        coloring = derandomized_coloring(g, config.k, crossing=crossing)
        stats = coloring_stats(g, coloring, crossing=crossing)
    else:  # full-theorem
        try:
            params = config.params or BundleParams(seed=config.seed)
            coloring, cert = end_to_end(g, config.k, eps=config.eps, params=params)
            stats = coloring_stats(g, coloring, crossing=crossing)
        except (PipelineStageError, VacuousInstanceError) as exc:
            status = "failed"
            failed_stage = getattr(exc, "stage", "vacuous")

    runtime = time.perf_counter() - start
    report = Report(
        instance=config.instance_name,
        pipeline=config.pipeline,
        n=g.n,
        m=g.m,
        density=density(g) if g.n >= 2 else Fraction(0),
        k=config.k,
        seed=config.seed,
        stats=stats,
        certificate=cert,
        status=status,
        failed_stage=failed_stage,
        runtime_s=runtime,
    )

    json_path = out_dir / "report.json"
    csv_path = out_dir / "summary.csv"
    json_path.write_text(json.dumps(report.to_json(), indent=2) + "\n")
    report.files.append(str(json_path))
    append_csv(report, csv_path)
    report.files.append(str(csv_path))

    if config.figures:
        fig_path = out_dir / "drawing.png"
        draw_figure(g, coloring, fig_path)
        report.files.append(str(fig_path))
        if stats is not None:
            rfig = out_dir / "ratio.png"
            ratio_figure(stats, config.k, cert.ratio_bound if cert else None, rfig)
            report.files.append(str(rfig))
    if config.svg:
        svg_path = out_dir / "drawing.svg"
        write_svg(g, coloring, svg_path)
        report.files.append(str(svg_path))

    # files changed after report.json was written; refresh it
    json_path.write_text(json.dumps(report.to_json(), indent=2) + "\n")
    return report
