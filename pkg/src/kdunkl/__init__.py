"""K-theoretic Dunkl elements in the Fomin-Kirillov algebra.

The submodules are usable on their own; the most common entry points are
re-exported here.
"""

from .bruhatrep import act_element, structure_constants_dunkl
from .dunkl import kappa, theta, verify_commutation
from .perm import Permutation, parse_permutation
from .polyring import grothendieck, schubert, structure_constants_poly
from .quadalg import FreeAlgebraElement, ideal_membership, spec_En

__version__ = "0.1.0"

__all__ = [
    "FreeAlgebraElement",
    "Permutation",
    "act_element",
    "grothendieck",
    "ideal_membership",
    "kappa",
    "parse_permutation",
    "schubert",
    "spec_En",
    "structure_constants_dunkl",
    "structure_constants_poly",
    "theta",
    "verify_commutation",
]
