"""SVG rendering of a trial on its map: initial plan dashed, executed path solid."""

from __future__ import annotations

from typing import Mapping, Sequence

from .bundle import BundleError, MapBundle
from .graph import EdgeKey

CELL = 20


def _xy(bundle: MapBundle, v: int) -> tuple[float, float]:
    if bundle.graph.coords is not None:
        r, c, _ = bundle.graph.coords[v]
    else:
        r, c = divmod(v, bundle.cols)
    return c * CELL + CELL / 2, r * CELL + CELL / 2


def _f(x: float) -> str:
    return f"{x:.2f}".rstrip("0").rstrip(".")


def _polyline(bundle: MapBundle, nodes: Sequence[int], **attrs) -> str:
    pts = " ".join(f"{_f(x)},{_f(y)}" for x, y in (_xy(bundle, v) for v in nodes))
    extra = " ".join(f'{k.replace("_", "-")}="{v}"' for k, v in attrs.items())
    return f'<polyline points="{pts}" fill="none" {extra}/>'


def _check(bundle: MapBundle, record: Mapping) -> None:
    g = bundle.graph
    for key in ("trajectory", "initial_plan"):
        nodes = record.get(key) or []
        for v in nodes:
            if not (0 <= v < g.num_nodes):
                raise BundleError(f"{key} node {v} is not in the map")
        for a, b in zip(nodes, nodes[1:]):
            if not g.has_edge(a, b):
                raise BundleError(f"{key} step {a}->{b} is not an edge of the map")
    for tok in record.get("blocked", []):
        a, b = map(int, tok.split("-"))
        if not g.has_edge(a, b):
            raise BundleError(f"blocked edge {tok} is not in the map")


def render_trial_svg(bundle: MapBundle, record: Mapping, utility: Mapping[EdgeKey, float] | None = None) -> str:
    """Render one trial record (a line of ``trials.jsonl``) on ``bundle``."""
    _check(bundle, record)
    g = bundle.graph
    w, h = bundle.cols * CELL, bundle.rows * CELL
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">',
        f'<rect width="{w}" height="{h}" fill="white"/>',
    ]

    heights = [c[2] for c in g.coords] if g.coords is not None else [0.0] * g.num_nodes
    lo, hi = min(heights), max(heights)
    span = (hi - lo) or 1.0
    for v in g.nodes:
        x, y = _xy(bundle, v)
        shade = 235 - int(150 * (heights[v] - lo) / span)
        out.append(
            f'<rect x="{_f(x - CELL / 2)}" y="{_f(y - CELL / 2)}" width="{CELL}" height="{CELL}" '
            f'fill="rgb({shade},{shade},{shade})"/>'
        )

    for u, v in g.edge_keys():
        (x1, y1), (x2, y2) = _xy(bundle, u), _xy(bundle, v)
        out.append(f'<line x1="{_f(x1)}" y1="{_f(y1)}" x2="{_f(x2)}" y2="{_f(y2)}" stroke="#c8c8c8" stroke-width="1"/>')

    if utility:
        top = max(utility.values()) or 1.0
        for (u, v), val in sorted(utility.items()):
            (x1, y1), (x2, y2) = _xy(bundle, u), _xy(bundle, v)
            out.append(
                f'<line class="utility" x1="{_f(x1)}" y1="{_f(y1)}" x2="{_f(x2)}" y2="{_f(y2)}" '
                f'stroke="#ff8c00" stroke-opacity="{_f(val / top)}" stroke-width="4"/>'
            )

    for grp in bundle.groups:
        for u, v in sorted(grp):
            (x1, y1), (x2, y2) = _xy(bundle, u), _xy(bundle, v)
            out.append(f'<line x1="{_f(x1)}" y1="{_f(y1)}" x2="{_f(x2)}" y2="{_f(y2)}" stroke="#6a9fd8" stroke-width="2"/>')

    blocked = sorted(tuple(map(int, t.split("-"))) for t in record.get("blocked", []))
    marked: set[int] = set()
    for u, v in blocked:
        (x1, y1), (x2, y2) = _xy(bundle, u), _xy(bundle, v)
        out.append(
            f'<line class="blocked" x1="{_f(x1)}" y1="{_f(y1)}" x2="{_f(x2)}" y2="{_f(y2)}" '
            f'stroke="#d62728" stroke-width="3"/>'
        )
        marked.update((u, v))
    for v in sorted(marked):
        x, y = _xy(bundle, v)
        out.append(
            f'<rect class="blocked-region" x="{_f(x - CELL / 2)}" y="{_f(y - CELL / 2)}" width="{CELL}" '
            f'height="{CELL}" fill="#d62728" fill-opacity="0.15"/>'
        )

    if record.get("initial_plan"):
        out.append(_polyline(bundle, record["initial_plan"], stroke="#1f3fbf", stroke_width="2.5",
                             stroke_dasharray="6,4", **{"class": "initial-plan"}))
    if record.get("trajectory"):
        out.append(_polyline(bundle, record["trajectory"], stroke="#111111", stroke_width="2",
                             **{"class": "trajectory"}))

    for v, color in ((bundle.src, "#2ca02c"), (bundle.dst, "#9467bd")):
        x, y = _xy(bundle, v)
        out.append(f'<circle cx="{_f(x)}" cy="{_f(y)}" r="{CELL / 3:.0f}" fill="{color}"/>')

    label = f'{record.get("agent", "")} p={record.get("p", "")} seed={record.get("seed", "")} cost={record.get("cost", 0):.2f}'
    out.append(f'<title>{label}</title>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
