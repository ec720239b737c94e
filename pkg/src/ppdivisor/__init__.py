"""Exact calculus of polyhedral divisors on surfaces with torus actions.

The submodules, from the bottom up: ``exact_linalg`` (integer matrices),
``convex`` (cones and polyhedra), ``divisors`` (surface models and covers),
``ppdiv`` (polyhedral divisors and their maps), ``downgrade`` (from a linear
torus action to a divisor), ``quotients`` (finite quotients) and
``fixtures_kr`` (worked families of threefolds). ``session`` reads and writes
the text format the command-line tool uses.
"""

from .convex import Cone, Polyhedron
from .divisors import CoverData, ModelKind, QDivisor, YModel
from .downgrade import WeightData, downgrade
from .exact_linalg import Matrix
from .ppdiv import PPDivisor, PPMap, Plurifunction, evaluate, linearly_equivalent, pullback, pushforward
from .session import load_fixtures, parse_session

__version__ = "0.1.0"

__all__ = [
    "Cone", "Polyhedron", "CoverData", "ModelKind", "QDivisor", "YModel", "WeightData", "downgrade",
    "Matrix", "PPDivisor", "PPMap", "Plurifunction", "evaluate", "linearly_equivalent", "pullback",
    "pushforward", "load_fixtures", "parse_session",
]
