"""Exact quantum invariants of framed tangles from doubles of
finite-dimensional Hopf algebras, with colored diagrams and the
octahedral cell complexes of their doubles."""

from .exactlin import Field, QQ, SparseTensor
from .hopf import BUILTINS, HopfAxiomError, HopfPresentation, builtin
from .doubles import (Doubles, IDENTITY_CHECKS, IdentityFailure, ThetaAlgebra,
                      check_identity)
from .diagram import Diagram, DiagramError, Token, double_diagram, left_normalize
from .moves import MOVES, apply_move, enumerate_move_pairs, move_tag
from .invariant import (InvariantValue, colored_J, doubled_J, framing_doubled_J,
                        normalized_doubled_J, universal_J, verify_jj)
from .cells import CellComplex, ComplexError, build_C, build_O, complex_stats

__all__ = [
    "Field", "QQ", "SparseTensor",
    "BUILTINS", "HopfAxiomError", "HopfPresentation", "builtin",
    "Doubles", "IDENTITY_CHECKS", "IdentityFailure", "ThetaAlgebra",
    "check_identity",
    "Diagram", "DiagramError", "Token", "double_diagram", "left_normalize",
    "MOVES", "apply_move", "enumerate_move_pairs", "move_tag",
    "InvariantValue", "colored_J", "doubled_J", "framing_doubled_J",
    "normalized_doubled_J", "universal_J", "verify_jj",
    "CellComplex", "ComplexError", "build_C", "build_O", "complex_stats",
]
