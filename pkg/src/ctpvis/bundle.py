"""Map bundles: ``graph.txt`` (graph text format) plus ``manifest.json``."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .graph import EdgeKey, Graph, VisibilityMap, parse_graph, serialize_graph
from .environments.plateau import PlateauMap
from .environments.terrain import TerrainMap, format_heightmap

BUNDLE_FORMAT = "ctpvis-bundle/1"


class BundleError(ValueError):
    pass


@dataclass
class MapBundle:
    graph: Graph
    vis: VisibilityMap
    src: int
    dst: int
    rows: int
    cols: int
    kind: str
    # Each group is blocked as a unit; per-edge maps use singleton groups.
    groups: list[frozenset[EdgeKey]]
    default_p: float = 0.5
    manifest: dict = field(default_factory=dict)

    @property
    def blockable(self) -> frozenset[EdgeKey]:
        return frozenset().union(*self.groups) if self.groups else frozenset()


def _tok(k: EdgeKey) -> str:
    return f"{k[0]}-{k[1]}"


def _untok(s: str) -> EdgeKey:
    a, b = s.split("-")
    return (int(a), int(b))


def from_plateau(pm: PlateauMap, kind: str = "plateau", default_p: float | None = None) -> MapBundle:
    p = default_p if default_p is not None else pm.meta.get("params", {}).get("p", 0.5)
    manifest = {
        "chokepoints": len(pm.chokepoints),
        "plateaus": [sorted(map(list, region)) for region in pm.plateaus],
        "entries": [[[list(a), list(b)] for a, b in pairs] for pairs in pm.entries],
        "generator": pm.meta,
    }
    return MapBundle(
        pm.graph, pm.vis, pm.src, pm.dst, pm.rows, pm.cols, kind,
        [frozenset([k]) for k in sorted(pm.chokepoints)], p, manifest,
    )


def from_terrain(tm: TerrainMap, default_p: float = 0.5) -> MapBundle:
    manifest = {
        "n_ovals": len(tm.ovals),
        "ovals": [[list(c), list(a)] for c, a in tm.ovals],
        "generator": tm.meta,
    }
    return MapBundle(
        tm.graph, tm.vis, tm.src, tm.dst, tm.hm.rows, tm.hm.cols, "terrain",
        list(tm.groups), default_p, manifest,
    )


def write_bundle(b: MapBundle, out_dir: str | Path, heights=None) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "graph.txt").write_text(serialize_graph(b.graph, b.vis))
    manifest = {
        "format": BUNDLE_FORMAT,
        "kind": b.kind,
        "rows": b.rows,
        "cols": b.cols,
        "src": b.src,
        "dst": b.dst,
        "default_p": b.default_p,
        "blockage": {
            "mode": "per_edge" if all(len(g) == 1 for g in b.groups) else "per_group",
            "groups": [sorted(_tok(k) for k in grp) for grp in b.groups],
        },
        **b.manifest,
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=1, sort_keys=True) + "\n")
    if heights is not None:
        (out / "heightmap.txt").write_text(format_heightmap(heights))
    return out


def read_bundle(path: str | Path) -> MapBundle:
    path = Path(path)
    try:
        manifest = json.loads((path / "manifest.json").read_text())
        g, vis = parse_graph((path / "graph.txt").read_text())
    except FileNotFoundError as exc:
        raise BundleError(f"incomplete bundle at {path}: {exc.filename} missing") from None
    if manifest.get("format") != BUNDLE_FORMAT:
        raise BundleError(f"{path}: unsupported bundle format {manifest.get('format')!r}")
    groups = [frozenset(_untok(t) for t in grp) for grp in manifest["blockage"]["groups"]]
    for grp in groups:
        for k in grp:
            if not g.has_edge(*k):
                raise BundleError(f"{path}: blockable edge {_tok(k)} is not in the graph")
    extra = {k: v for k, v in manifest.items()
             if k not in {"format", "kind", "rows", "cols", "src", "dst", "default_p", "blockage"}}
    return MapBundle(
        g, vis, manifest["src"], manifest["dst"], manifest["rows"], manifest["cols"],
        manifest["kind"], groups, manifest.get("default_p", 0.5), extra,
    )
