"""folim: a laboratory for first-order logic on finite graphs.

Formula parsing and evaluation, Stone pairings (exact and Monte Carlo),
Ehrenfeucht-Fraisse games, the universal bipartite H_n family with the
lm-key duplicator strategy, and convergence/root-finding utilities.
"""

__version__ = "0.1.0"

from .formula import parse_formula, format_formula
from .graph import Graph, generate_hn
from .evaluate import stone_pairing_exact, stone_pairing_mc
from .efgame import solve
from .strategy import init_state, respond

__all__ = [
    "__version__",
    "parse_formula",
    "format_formula",
    "Graph",
    "generate_hn",
    "stone_pairing_exact",
    "stone_pairing_mc",
    "solve",
    "init_state",
    "respond",
]
