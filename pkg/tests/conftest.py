import sys
from pathlib import Path

import pytest
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@pytest.fixture(scope="session")
def plateau_map():
    from ctpvis.environments.plateau import build_plateau_map

    return build_plateau_map()


@pytest.fixture(scope="session")
def procedural_maps():
    from ctpvis.environments.procedural import generate_procedural_plateau, preset

    return [generate_procedural_plateau(preset("standard", grid), seed) for grid in (12, 14) for seed in range(2)]
