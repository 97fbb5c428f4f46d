"""Exact Fock-space model over the four-class curve cohomology.

Submodules: labels (basis classes, pairing, products), states (Nakajima
monomial states), operators (Heisenberg/vertex modes and the doubly
graded generators), monodromy (the two mapping-class actions), verify
(bracket reports and sweeps).
"""

from .labels import (
    COH_E,
    COH_PT,
    COH_SM,
    COH_SP,
    LABEL_NAMES,
    CohClass,
    cup_product,
    sl2_label_action,
    star_product,
    super_pairing,
)
from .monodromy import monodromy_f, monodromy_s
from .operators import (
    ExtendedModeError,
    FockConfig,
    OperatorExpr,
    commutator_apply,
    heisenberg_mode,
    vertex_mode,
    w_general,
    w_small,
)
from .states import (
    FockState,
    TruncationError,
    alpha_apply,
    basis_monomials,
    basis_states,
    count_basis,
)
from .verify import BracketReport, bracket_sweep, bracket_verify

__all__ = [
    "COH_E",
    "COH_PT",
    "COH_SM",
    "COH_SP",
    "LABEL_NAMES",
    "CohClass",
    "cup_product",
    "sl2_label_action",
    "star_product",
    "super_pairing",
    "monodromy_f",
    "monodromy_s",
    "ExtendedModeError",
    "FockConfig",
    "OperatorExpr",
    "TruncationError",
    "commutator_apply",
    "heisenberg_mode",
    "vertex_mode",
    "w_general",
    "w_small",
    "FockState",
    "alpha_apply",
    "basis_monomials",
    "basis_states",
    "count_basis",
    "BracketReport",
    "bracket_sweep",
    "bracket_verify",
]
