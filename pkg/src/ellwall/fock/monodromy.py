"""The two mapping-class actions on states.

The fiber-type action flips each mode by (-1)^(k+1) and reflects the
vacuum charge through -n (n the weight); with that charge reading it is
an involution on every weight space.  The section-type action replaces
each creation mode by the corresponding slope-one generator, applied in
the monomial's canonical order.
"""

from __future__ import annotations

from typing import Optional

from .labels import COH_PT
from .operators import ExtendedModeError, FockConfig, w_general
from .states import FockState

NAKAJIMA_ORDER_NOTE = (
    "slope-one generators are applied in canonical monomial order "
    "(k descending, label ascending), rightmost factor first"
)


def monodromy_f(state: FockState, n: Optional[int] = None) -> FockState:
    """Fiber-type action: sign (-1)^(k+1) per mode, charge c -> -n - c.
    The state must be weight-homogeneous; pass n to assert the weight."""
    if state.is_zero():
        return state.copy()
    if not state.is_homogeneous():
        raise ValueError("mixed-weight input: apply weight-by-weight")
    weight = state.weight()
    if n is not None and n != weight:
        raise ValueError(f"state has weight {weight}, not {n}")
    out: dict = {}
    for mono, coeff in state.terms.items():
        sign = 1
        for k, _ in mono:
            if k % 2 == 0:
                sign = -sign
        out[mono] = coeff * sign
    return FockState(-weight - state.charge, out)


def monodromy_s(
    state: FockState, N: int, config: Optional[FockConfig] = None
) -> FockState:
    """Section-type action: each creation mode alpha_{-k}(gamma) is
    replaced by the slope-one generator w^{1,-k}_gamma; linear; exact on
    states of energy <= N.  pt labels need the extended configuration."""
    if state.charge != 0:
        raise ValueError("the section-type action is defined on charge-0 states")
    out = FockState.zero(0)
    for mono, coeff in state.terms.items():
        if any(l == COH_PT for _, l in mono) and config is None:
            raise ExtendedModeError(
                "pt-labeled modes need an extended-mode configuration"
            )
        cur = FockState.vacuum(0)
        for k, label in reversed(mono):
            op = w_general(1, -k, label, N, config)
            cur = op.apply(cur)
        acc = cur.scale(coeff)
        if out.is_zero():
            out = acc
        elif acc.is_zero():
            pass
        elif acc.charge == out.charge:
            out = out + acc
        else:
            raise ValueError(
                "image spans several charges; apply to single monomials instead"
            )
    return out
