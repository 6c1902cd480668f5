"""Path planning on graphs with uncertain blockages and heterogeneous visibility."""

from .agent import AgentConfig, AgentKind, BlockageModel, TrialResult, run_batch, run_trial
from .graph import BlockageRealization, Graph, VisibilityMap, edge_key, path_cost, shortest_path
from .reward import compute_edge_utility, path_reward, select_best_path
from .sampler import SamplerParams, flatten, sample_short_diverse_paths

__version__ = "0.1.0"

__all__ = [
    "AgentConfig",
    "AgentKind",
    "BlockageModel",
    "BlockageRealization",
    "Graph",
    "SamplerParams",
    "TrialResult",
    "VisibilityMap",
    "compute_edge_utility",
    "edge_key",
    "flatten",
    "path_cost",
    "path_reward",
    "run_batch",
    "run_trial",
    "sample_short_diverse_paths",
    "select_best_path",
    "shortest_path",
]
