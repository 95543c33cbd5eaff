"""Monte Carlo agents for a cooperative card game.

The heavy lifting happens in the compiled ``_questmc`` extension; this module
supplies defaults (the bundled reference data) and decodes results.
"""

import json
from pathlib import Path

from . import _questmc
from ._questmc import (
    ConfigError,
    DataError,
    StageError,
    canonical_agent,
    flat_allocation,
    policy_label,
    seed_for_game,
    ucb_score,
    winrate_ci,
)

DATA_DIR = Path(__file__).resolve().parent / "data"
DEFAULT_CARDS = DATA_DIR / "cards.json"
DEFAULT_SCENARIO = DATA_DIR / "scenarios" / "mirkwood.json"

__all__ = [
    "ConfigError",
    "DataError",
    "StageError",
    "Game",
    "canonical_agent",
    "flat_allocation",
    "grid",
    "play",
    "policy_label",
    "seed_for_game",
    "simulate",
    "sweep",
    "ucb_score",
    "winrate_ci",
]


def _paths(cards, scenario):
    return str(cards or DEFAULT_CARDS), str(scenario or DEFAULT_SCENARIO)


def simulate(agents="", *, games=100, seed=1, difficulty="medium", workers=1, z=1.96,
             round_cap=200, cards=None, scenario=None):
    """Runs a batch of games and returns the result row as a dict."""
    c, s = _paths(cards, scenario)
    out = json.loads(_questmc.simulate(c, s, difficulty, agents, games, seed, workers, z, round_cap))
    return out["rows"][0]


def sweep(agents, budgets, *, games=100, seed=1, difficulty="medium", workers=1, z=1.96,
          round_cap=200, cards=None, scenario=None):
    """One result row per playout budget, all rows on the same game seeds."""
    c, s = _paths(cards, scenario)
    out = json.loads(_questmc.sweep(c, s, difficulty, agents, list(budgets), games, seed, workers,
                                    z, round_cap))
    return out["rows"]


def grid(choices, *, games=100, seed=1, difficulty="medium", workers=1, z=1.96, round_cap=200,
         cards=None, scenario=None):
    """One result row per combination of per-stage agents."""
    c, s = _paths(cards, scenario)
    out = json.loads(_questmc.grid(c, s, difficulty, choices, games, seed, workers, z, round_cap))
    return out["rows"]


def play(agents="", *, seed=1, difficulty="medium", round_cap=200, cards=None, scenario=None):
    """Plays one game; returns (outcome, rounds, trace lines)."""
    c, s = _paths(cards, scenario)
    return _questmc.play(c, s, difficulty, agents, seed, round_cap)


class Game(_questmc.Game):
    """A game stepped one decision at a time."""

    def __init__(self, seed=1, difficulty="medium", cards=None, scenario=None):
        c, s = _paths(cards, scenario)
        super().__init__(c, s, difficulty, seed)
