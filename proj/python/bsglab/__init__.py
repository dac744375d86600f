"""Numerical laboratory for mean-field bipartite spin glasses.

Exact and traced partition evaluators, disorder-universality experiments,
cavity/martingale diagnostics, the Hopfield reduction, and a Metropolis
sampler, all backed by a deterministic counter-based RNG.
"""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
