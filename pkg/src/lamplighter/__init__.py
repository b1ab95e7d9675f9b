"""Exact finite-level models of the lamplighter group algebra and its continuous-ring completion.

Pictures of the same algebra, each with a unique normal form:

* :mod:`~lamplighter.wreath` -- the group algebra of Z_2 wr Z,
* :mod:`~lamplighter.bernoulli` -- the Bernoulli crossed product,
* :mod:`~lamplighter.odometer` -- the odometer crossed product,
* :mod:`~lamplighter.periodic` -- banded periodic operators on Z,

and their finite-level images in :mod:`~lamplighter.climit`, with spectral
data in :mod:`~lamplighter.spectral` and finite orbit-equivalence maps in
:mod:`~lamplighter.feldman_moore`.
"""

from .bernoulli import BernoulliElement, CylinderAssignment
from .climit import CertifiedRank, LevelMatrix, diag_embed, rank_distance, rank_limit
from .errors import (
    ExpressionSyntaxError,
    LamplighterError,
    LevelShrink,
    LevelTooSmall,
    MixedPicture,
    NotAFunction,
    Unsupported,
    WindowTooSmall,
    ZeroInverse,
)
from .odometer import OdometerElement
from .parser import evaluate, parse, parse_element
from .periodic import PeriodicOperator, prufer_E, psi, shift_J, truncate
from .scalar import ONE, ZERO, Cyclo, root_of_unity
from .wreath import WreathElement, kappa

__version__ = "0.1.0"

__all__ = [
    "BernoulliElement",
    "CertifiedRank",
    "Cyclo",
    "CylinderAssignment",
    "ExpressionSyntaxError",
    "LamplighterError",
    "LevelMatrix",
    "LevelShrink",
    "LevelTooSmall",
    "MixedPicture",
    "NotAFunction",
    "ONE",
    "OdometerElement",
    "PeriodicOperator",
    "Unsupported",
    "WindowTooSmall",
    "WreathElement",
    "ZERO",
    "ZeroInverse",
    "diag_embed",
    "evaluate",
    "kappa",
    "parse",
    "parse_element",
    "prufer_E",
    "psi",
    "rank_distance",
    "rank_limit",
    "root_of_unity",
    "shift_J",
    "truncate",
]
