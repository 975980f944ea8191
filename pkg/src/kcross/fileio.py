"""On-disk formats.

Point-set files: one "x y" integer pair per line, '#' starts a comment,
ids follow line order among the non-comment lines. Graph files: a point-set
section, a line reading "EDGES", then one "i j" pair per line. Coloring
files: one "i j c" line per edge. Bundles and certificates travel as JSON
with every rational encoded as {"num": ..., "den": ...}.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .bundles import Bundle, make_bundle
from .certificate import Certificate
from .coloring import EdgeColoring
from .geometry import Point, PointSet
from .graph import GeometricGraph


def _content_lines(text: str) -> list[str]:
    out = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append(line)
    return out


def parse_point_set(text: str) -> PointSet:
    pts = []
    for line in _content_lines(text):
        fields = line.split()
        if len(fields) != 2:
            raise ValueError(f"expected 'x y', got {line!r}")
        pts.append(Point(int(fields[0]), int(fields[1])))
    return PointSet(tuple(pts))


def load_point_set(path: str | Path) -> PointSet:
    return parse_point_set(Path(path).read_text())


def save_point_set(ps: PointSet, path: str | Path) -> None:
    Path(path).write_text("".join(f"{p.x} {p.y}\n" for p in ps))


def parse_graph(text: str) -> GeometricGraph:
    lines = _content_lines(text)
    try:
        split = lines.index("EDGES")
    except ValueError:
        raise ValueError("graph file has no EDGES line") from None
    pts = []
    for line in lines[:split]:
        fields = line.split()
        if len(fields) != 2:
            raise ValueError(f"expected 'x y', got {line!r}")
        pts.append(Point(int(fields[0]), int(fields[1])))
    edges = []
    for line in lines[split + 1 :]:
        fields = line.split()
        if len(fields) != 2:
            raise ValueError(f"expected 'i j', got {line!r}")
        edges.append((int(fields[0]), int(fields[1])))
    return GeometricGraph(PointSet(tuple(pts)), tuple(edges))


def load_graph(path: str | Path) -> GeometricGraph:
    return parse_graph(Path(path).read_text())


def save_graph(g: GeometricGraph, path: str | Path) -> None:
    parts = [f"{p.x} {p.y}\n" for p in g.vertices]
    parts.append("EDGES\n")
    parts.extend(f"{u} {v}\n" for u, v in g.edges)
    Path(path).write_text("".join(parts))


def save_coloring(g: GeometricGraph, coloring: EdgeColoring, path: str | Path) -> None:
    if len(coloring.colors) != g.m:
        raise ValueError("coloring does not cover the graph")
    Path(path).write_text(
        "".join(
            f"{u} {v} {c}\n" for (u, v), c in zip(g.edges, coloring.colors)
        )
    )


def load_coloring(g: GeometricGraph, path: str | Path, k: int | None = None) -> EdgeColoring:
    colors = [0] * g.m
    seen = 0
    for line in _content_lines(Path(path).read_text()):
        fields = line.split()
        if len(fields) != 3:
            raise ValueError(f"expected 'i j c', got {line!r}")
        u, v, c = int(fields[0]), int(fields[1]), int(fields[2])
        e = (u, v) if u < v else (v, u)
        idx = g.edge_index.get(e)
        if idx is None:
            raise ValueError(f"edge ({u},{v}) not in the graph")
        colors[idx] = c
        seen += 1
    if seen != g.m or any(c == 0 for c in colors):
        raise ValueError("coloring file does not cover every edge exactly once")
    if k is None:
        k = max(2, max(colors))
    return EdgeColoring(k=k, colors=tuple(colors))


def frac_json(f: Fraction) -> dict:
    return {"num": f.numerator, "den": f.denominator}


def frac_from_json(obj: dict) -> Fraction:
    return Fraction(int(obj["num"]), int(obj["den"]))


def bundles_json(g: GeometricGraph, bundles: Sequence[Bundle]) -> dict:
    return {
        "k": len(bundles),
        "n": g.n,
        "bundles": [
            {
                "Y": list(b.Y),
                "Z": list(b.Z),
                "edges": [[g.edges[e][0], g.edges[e][1]] for e in b.edges],
            }
            for b in bundles
        ],
    }


def save_bundles(g: GeometricGraph, bundles: Sequence[Bundle], path: str | Path) -> None:
    Path(path).write_text(json.dumps(bundles_json(g, bundles), indent=2) + "\n")


def load_bundles(g: GeometricGraph, path: str | Path) -> list[Bundle]:
    """Rebuild bundles against the graph; the stored edge list must match
    the bipartite edge set of (Y, Z) exactly."""
    data = json.loads(Path(path).read_text())
    out = []
    for i, rec in enumerate(data["bundles"]):
        b = make_bundle(g, rec["Y"], rec["Z"])
        stored = set()
        for u, v in rec["edges"]:
            e = (u, v) if u < v else (v, u)
            idx = g.edge_index.get(e)
            if idx is None:
                raise ValueError(f"bundle {i} lists edge ({u},{v}) not in the graph")
            stored.add(idx)
        if stored != set(b.edges):
            raise ValueError(
                f"bundle {i} edge list disagrees with the bipartite edges of (Y, Z)"
            )
        out.append(b)
    return out


def certificate_json(cert: Certificate) -> dict:
    return {
        "k": cert.k,
        "side_fraction": frac_json(cert.side_fraction),
        "edge_fraction": frac_json(cert.edge_fraction),
        "crossing_slack": frac_json(cert.crossing_slack),
        "bundle_crossings": list(cert.bundle_crossings),
        "bundled_crossings": cert.bundled_crossings,
        "rest_crossings": cert.rest_crossings,
        "mixed_crossings": cert.mixed_crossings,
        "core_margin": frac_json(cert.core_margin),
        "margin": frac_json(cert.margin),
        "ratio_bound": frac_json(cert.ratio_bound),
        "achieved_ratio": frac_json(cert.achieved_ratio),
    }


def certificate_from_json(data: dict) -> Certificate:
    return Certificate(
        k=int(data["k"]),
        side_fraction=frac_from_json(data["side_fraction"]),
        edge_fraction=frac_from_json(data["edge_fraction"]),
        crossing_slack=frac_from_json(data["crossing_slack"]),
        bundle_crossings=tuple(int(x) for x in data["bundle_crossings"]),
        bundled_crossings=int(data["bundled_crossings"]),
        rest_crossings=int(data["rest_crossings"]),
        mixed_crossings=int(data["mixed_crossings"]),
        core_margin=frac_from_json(data["core_margin"]),
        margin=frac_from_json(data["margin"]),
        ratio_bound=frac_from_json(data["ratio_bound"]),
        achieved_ratio=frac_from_json(data["achieved_ratio"]),
    )


def save_certificate(cert: Certificate, path: str | Path) -> None:
    Path(path).write_text(json.dumps(certificate_json(cert), indent=2) + "\n")


def load_certificate(path: str | Path) -> Certificate:
    return certificate_from_json(json.loads(Path(path).read_text()))
