"""Map builders: the fixed plateau map, procedural plateau maps and heightmap terrain."""

from .plateau import PLATEAU_MAP_VERSION, PlateauMap, build_plateau_map
from .procedural import GeneratorError, ProceduralParams, generate_procedural_plateau, preset
from .terrain import Heightmap, HeightmapError, build_terrain_world, load_heightmap

__all__ = [
    "GeneratorError",
    "Heightmap",
    "HeightmapError",
    "PLATEAU_MAP_VERSION",
    "PlateauMap",
    "ProceduralParams",
    "build_plateau_map",
    "build_terrain_world",
    "generate_procedural_plateau",
    "load_heightmap",
    "preset",
]
