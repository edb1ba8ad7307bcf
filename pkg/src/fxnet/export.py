"""Serialization of trees, metric tables, metric series and matrices.

Every writer is deterministic: nodes and edges are emitted in lexicographic
order and floats with ``repr`` so files re-parse to the same values.
"""
from __future__ import annotations

import csv
import io
import json
import xml.etree.ElementTree as ET
from decimal import ROUND_HALF_UP, Decimal

import numpy as np

from .errors import ConsistencyError, FxNetError, UsageError
from .netcore import Edge, SpanningTree
from .signals import ALL_KINDS, SignalKind

TREE_FORMATS = ("dot", "graphml")


def pen_width(weight: float) -> float:
    return 1.0 + 6.0 * weight


def _sorted_edges(tree):
    return sorted(tree.edges, key=lambda e: (e.u, e.v))


def _graph_name(tree):
    parts = [p for p in (tree.base, tree.kind) if p]
    return "_".join(parts) or "mst"


def to_dot(tree: SpanningTree) -> str:
    lines = [f'graph "{_graph_name(tree)}" {{']
    for n in sorted(tree.nodes):
        lines.append(f'  "{n}";')
    for e in _sorted_edges(tree):
        lines.append(
            f'  "{e.u}" -- "{e.v}" [weight={e.weight!r}, distance={e.distance!r}, '
            f'penwidth={pen_width(e.weight)!r}];'
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


_GRAPHML_NS = "http://graphml.graphdrawing.org/xmlns"


def to_graphml(tree: SpanningTree) -> str:
    root = ET.Element("graphml", xmlns=_GRAPHML_NS)
    for key, target in (("weight", "edge"), ("distance", "edge")):
        ET.SubElement(root, "key", {"id": key, "for": target, "attr.name": key, "attr.type": "double"})
    graph = ET.SubElement(root, "graph", id=_graph_name(tree), edgedefault="undirected")
    for n in sorted(tree.nodes):
        ET.SubElement(graph, "node", id=n)
    for e in _sorted_edges(tree):
        el = ET.SubElement(graph, "edge", source=e.u, target=e.v)
        ET.SubElement(el, "data", key="weight").text = repr(e.weight)
        ET.SubElement(el, "data", key="distance").text = repr(e.distance)
    ET.indent(root)
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + ET.tostring(root, encoding="unicode") + "\n"


def export_tree(tree: SpanningTree, fmt: str = "dot") -> str:
    if fmt == "dot":
        return to_dot(tree)
    if fmt == "graphml":
        return to_graphml(tree)
    raise UsageError(f"unknown tree format {fmt!r} (expected one of {TREE_FORMATS})")


def tree_to_dict(tree: SpanningTree) -> dict:
    return {
        "base": tree.base,
        "kind": tree.kind,
        "nodes": list(tree.nodes),
        "edges": [[e.u, e.v, e.distance, e.weight] for e in tree.edges],
    }


def tree_from_dict(d: dict) -> SpanningTree:
    return SpanningTree(
        nodes=d["nodes"],
        edges=[Edge(u, v, float(dist), float(w)) for u, v, dist, w in d["edges"]],
        base=d.get("base"),
        kind=d.get("kind"),
    )


def round_half_away(value: float, digits: int) -> str:
    """Decimal rendering with half-away-from-zero rounding on the shortest repr."""
    if not np.isfinite(value):
        return "nan"
    q = Decimal(1).scaleb(-digits)
    return str(Decimal(repr(float(value))).quantize(q, rounding=ROUND_HALF_UP))


def export_table(reports, l_digits: int = 2, c_digits: int = 3, delimiter: str = ",") -> str:
    """Bases as columns; an L block and a C block, each with return/sign/abs rows."""
    reports = list(reports)
    if not reports:
        raise FxNetError("no reports to tabulate")
    windows = {r.window for r in reports}
    modes = {r.path_mode for r in reports}
    if len(windows) > 1 or len(modes) > 1:
        raise ConsistencyError("reports mix window specs or path-length modes")
    bases = list(dict.fromkeys(r.base for r in reports))
    present = {SignalKind.parse(r.kind) for r in reports}
    kinds = [k for k in ALL_KINDS if k in present]
    cell = {(r.base, SignalKind.parse(r.kind)): r for r in reports}

    buf = io.StringIO()
    writer = csv.writer(buf, delimiter=delimiter, lineterminator="\n")
    writer.writerow(["metric", "kind", *bases])
    for metric, digits in (("L", l_digits), ("C", c_digits)):
        for k in kinds:
            row = [metric, k.table_label]
            for b in bases:
                r = cell.get((b, k))
                row.append("" if r is None else round_half_away(getattr(r, metric), digits))
            writer.writerow(row)
    return buf.getvalue()


def report_to_dict(r) -> dict:
    return {
        "base": r.base,
        "kind": r.kind,
        "L": r.L,
        "C": r.C,
        "hub": r.hub,
        "degrees": {k: r.degrees[k] for k in sorted(r.degrees)},
        "path_mode": r.path_mode,
        "window": None if r.window is None else list(r.window),
    }


def series_to_dict(s) -> dict:
    return {
        "base": s.base,
        "kind": s.kind,
        "metric": s.metric,
        "window": {"width": s.window.width, "step": s.window.step},
        "points": [[d.isoformat(), v] for d, v in s.points],
    }


def export_series(s) -> str:
    return json.dumps(series_to_dict(s), indent=1) + "\n"


def export_matrix(labels, values, delimiter: str = ",") -> str:
    """Debug dump of a labelled square (or labelled-rows) matrix."""
    buf = io.StringIO()
    writer = csv.writer(buf, delimiter=delimiter, lineterminator="\n")
    values = np.asarray(values)
    if values.ndim == 2 and values.shape[0] == values.shape[1] == len(labels):
        writer.writerow(["", *labels])
    for label, row in zip(labels, values):
        writer.writerow([label, *(repr(float(v)) for v in row)])
    return buf.getvalue()


def export_trends(fits: dict) -> str:
    """``fits`` maps (base, kind, metric) -> TrendFit."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["base", "kind", "metric", "slope", "intercept", "residual_se", "start", "end", "points"])
    for (base, kind, metric), f in fits.items():
        writer.writerow([base, kind, metric, repr(f.slope), repr(f.intercept), repr(f.residual_se),
                         f.start.isoformat(), f.end.isoformat(), f.n_points])
    return buf.getvalue()
