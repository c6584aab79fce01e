"""Exact computations in the C2-equivariant dual Steenrod algebra.

Modules
-------
point   coefficient ring of HF at the top level, res, tr and the Tate boundary
series  truncated Laurent series over F2[xi_i, tau_i], conjugates, residues
dual    normal forms, right unit, coproduct, Bockstein and conjugation on A
ops     power operations, H(Bmu2), the Ops coaction and co-Nishida checks
cobar   cobar complexes over Lambda, E(tau0) and A, Ext charts
parse   the text grammar for elements
checks  windowed verification routines
cli     the command line front end
"""

from .point import Degree, Neg, PointElem, Pos
from .series import LaurentSeries, TruncationError
from .dual import ASElem, TensorElem
from .ops import BmuElem, QSymbol, UndeterminedOperation
from .cobar import ExtChart, ext_window
from .parse import parse_expression, render_expression

__version__ = "0.1.0"

__all__ = [
    "Degree", "Pos", "Neg", "PointElem", "LaurentSeries", "TruncationError", "ASElem", "TensorElem",
    "BmuElem", "QSymbol", "UndeterminedOperation", "ExtChart", "ext_window", "parse_expression",
    "render_expression", "__version__",
]
