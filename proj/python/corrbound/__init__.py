"""Correlation bounds for finite-state Markov jump processes.

Arrays follow the column convention: ``w[nu, mu]`` is the rate from state
``mu`` to state ``nu``; the diagonal is recomputed from the columns.
"""

from ._core import *  # noqa: F401,F403
from ._core import CorrboundError, BoundReport, PathInequalityReport, __version__  # noqa: F401
