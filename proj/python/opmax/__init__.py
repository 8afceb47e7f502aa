"""Python access to the opinion maximization simulator."""

import json as _json

from . import _core
from ._core import (
    DisconnectedGraph,
    Graph,
    InvalidArgument,
    UndefinedCorrelation,
    belief_update,
    centrality,
    generate_pa,
    load_edge_list,
    myopic_reward,
    opinion,
    pearson,
    toy,
)

__all__ = [
    "DisconnectedGraph",
    "Graph",
    "InvalidArgument",
    "Simulation",
    "UndefinedCorrelation",
    "belief_update",
    "centrality",
    "config_hash",
    "generate_pa",
    "load_edge_list",
    "myopic_reward",
    "normalize_config",
    "opinion",
    "pearson",
    "preset",
    "run",
    "toy",
]


def _text(config):
    return config if isinstance(config, str) else _json.dumps(config)


def preset(name):
    """Full config dict for a named experiment preset."""
    return _json.loads(_core.preset(name))


def normalize_config(config):
    """Validate a (possibly partial) config and return it with every key filled in."""
    return _json.loads(_core.normalize_config(_text(config)))


def config_hash(config):
    return _core.config_hash(_text(config))


class Simulation(_core.Simulation):
    def __init__(self, config=None):
        super().__init__(_text(config if config is not None else {}))


def run(config=None, threads=1, out_dir=""):
    """Run every replication of `config`; returns the summary with per-trace dicts."""
    return Simulation(config).run_all(threads, str(out_dir))
