"""Doubling gamma factors for classical groups over non-archimedean local fields.

Factors are exact rational functions of ``X = q^{-s}`` with coefficients in
``Q(i, sqrt q)``.
"""

from .exactnum import Coeff, PoleError, RationalQS
from .localfield import AddChar, MultChar, SquareClass, hilbert_symbol, local_field
from .tate import tate_eps, tate_gamma, tate_L
from .spaces import HermSpace
from .params import StdParameter, gamma_of_parameter, principal_parameter
from .doubling import (
    CharTwist,
    GLBlock,
    ReprDescriptor,
    check_functional_equation,
    gamma_minimal,
    gamma_of_tower,
)

__all__ = [
    "AddChar",
    "CharTwist",
    "GLBlock",
    "HermSpace",
    "ReprDescriptor",
    "StdParameter",
    "check_functional_equation",
    "gamma_minimal",
    "gamma_of_parameter",
    "gamma_of_tower",
    "principal_parameter",
    "Coeff",
    "MultChar",
    "PoleError",
    "RationalQS",
    "SquareClass",
    "hilbert_symbol",
    "local_field",
    "tate_L",
    "tate_eps",
    "tate_gamma",
]
