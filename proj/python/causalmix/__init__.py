"""Structure learning from pooled and per-intervention discrete data.

Data sets are passed as CSV text (a header row of variable names, optional
``__intervention`` column). Learners return decoded JSON reports.
"""

import json

from . import _core
from ._core import Error, Network, chi_square_sf, run_study

__all__ = [
    "Error",
    "Network",
    "chi_square_sf",
    "learn_merge",
    "learn_pc",
    "learn_pool",
    "run_study",
    "score",
]


def learn_pc(csv, network=None, **options):
    return json.loads(_core.learn_pc(csv, network, **options))


def learn_merge(csvs, network=None, **options):
    return json.loads(_core.learn_merge(list(csvs), network, **options))


def learn_pool(csvs, network=None, **options):
    return json.loads(_core.learn_pool(list(csvs), network, **options))


def score(report, truth):
    """Attach skeleton and arrow metrics against ``truth`` to a learned report."""
    text = report if isinstance(report, str) else json.dumps(report)
    return json.loads(_core.score(text, truth))
