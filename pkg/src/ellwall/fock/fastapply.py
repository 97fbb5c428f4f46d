"""Sparse-row application of normal-ordered operators to monomials.

Semantically identical to OperatorExpr.apply restricted to a single
monomial, but organized for bulk work: terms are grouped by their
annihilation part, so the (expensive) annihilation chain runs once per
group instead of once per term, and results are plain
``monomial -> Fraction`` rows keyed by the canonical creation-monomial
tuples.  Only operators whose modes carry basis labels are supported
(every mode then pairs against exactly one partner label), which covers
every operator the verifiers build.

Coefficients here are bare Fractions: the deformation variable never
enters the mandatory generators, and the polynomial wrapper would
dominate the runtime of the bracket sweep.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

from .labels import COH_E, COH_PT, COH_SM, COH_SP, LABEL_PARITY, pairing_scalar
from .operators import OperatorExpr, _partition_coeff, _partitions
from .states import Monomial, insert_creation, monomial_energy

# label paired nontrivially against each basis label
_DUAL = (COH_PT, COH_SM, COH_SP, COH_E)

Row = dict[Monomial, Fraction]


def annihilation_chain(
    mono: Monomial, part: Monomial
) -> Optional[tuple[int, Monomial]]:
    """Apply the annihilation modes of ``part`` (stored canonically, k
    descending; applied in reversed order, exactly as OperatorExpr.apply
    does) to a single monomial.  Returns (integer factor, reduced
    monomial) or None when the contraction vanishes."""
    factor = 1
    cur = mono
    for k, label in reversed(part):
        partner = _DUAL[label]
        odd = LABEL_PARITY[label]
        sign = 1
        total = 0
        reduced: Optional[Monomial] = None
        for i, (ki, li) in enumerate(cur):
            if ki == k and li == partner:
                total += sign * k * pairing_scalar(label, li)
                if reduced is None:
                    reduced = cur[:i] + cur[i + 1 :]
            if odd and LABEL_PARITY[li]:
                sign = -sign
        if not total or reduced is None:
            return None
        factor *= total
        cur = reduced
    return factor, cur


def creation_chain(
    mono: Monomial, part: Monomial
) -> Optional[tuple[int, Monomial]]:
    """Apply the creation modes of ``part`` (reversed order, matching
    OperatorExpr.apply); returns (sign, monomial) or None when an odd
    mode repeats."""
    sign = 1
    cur = mono
    for k, label in reversed(part):
        hit = insert_creation(cur, k, label)
        if hit is None:
            return None
        s, cur = hit
        sign *= s
    return sign, cur


def _grouped_terms(op: OperatorExpr):
    """[(annih part, needed partner-mode counts, [(creations, coeff)])]"""
    groups: dict[Monomial, list[tuple[Monomial, Fraction]]] = {}
    for t in op.terms:
        groups.setdefault(t.annihilations, []).append((t.creations, t.coeff))
    out = []
    for part, entries in groups.items():
        need: dict[tuple[int, int], int] = {}
        for k, label in part:
            key = (k, _DUAL[label])
            need[key] = need.get(key, 0) + 1
        out.append((part, need, entries))
    return out


def apply_to_monomial(groups, mono: Monomial, counts=None) -> Row:
    """Row of a grouped operator on one monomial."""
    if counts is None:
        counts = {}
        for mode in mono:
            counts[mode] = counts.get(mode, 0) + 1
    row: Row = {}
    for part, need, entries in groups:
        ok = True
        for key, c in need.items():
            if counts.get(key, 0) < c:
                ok = False
                break
        if not ok:
            continue
        ann = annihilation_chain(mono, part)
        if ann is None:
            continue
        factor, reduced = ann
        for creations, coeff in entries:
            cr = creation_chain(reduced, creations)
            if cr is None:
                continue
            sign, final = cr
            val = coeff * (factor * sign)
            acc = row.get(final)
            total = val if acc is None else acc + val
            if total:
                row[final] = total
            elif acc is not None:
                del row[final]
    return row


def op_action_rows(op: OperatorExpr, monos) -> dict[Monomial, Row]:
    """Rows of ``op`` on every given monomial.  Exactness: the operator
    must include every term of annihilation depth up to the largest
    monomial energy supplied (OperatorExpr stores that bound as its
    truncation)."""
    if op.truncation is not None:
        top = max((monomial_energy(m) for m in monos), default=0)
        if top > op.truncation:
            raise ValueError(
                f"operator window {op.truncation} below basis energy {top}"
            )
    groups = _grouped_terms(op)
    return {m: apply_to_monomial(groups, m) for m in monos}


def single_mode_row(mono: Monomial, n: int, label: int) -> Row:
    """Row of the Heisenberg mode alpha_n(label) on one monomial."""
    if n > 0:
        hit = annihilation_chain(mono, ((n, label),))
        if hit is None:
            return {}
        factor, reduced = hit
        return {reduced: Fraction(factor)}
    hit = insert_creation(mono, -n, label)
    if hit is None:
        return {}
    sign, created = hit
    return {created: Fraction(sign)}


def apply_single_mode(row: Row, n: int, label: int) -> Row:
    """alpha_n(label) applied to a row (a Fraction-linear combination)."""
    out: Row = {}
    for mono, coeff in row.items():
        for target, c in single_mode_row(mono, n, label).items():
            acc = out.get(target)
            total = coeff * c if acc is None else acc + coeff * c
            if total:
                out[target] = total
            elif acc is not None:
                del out[target]
    return out


def _sub_partitions(mult: dict[int, int]) -> list[tuple[int, ...]]:
    """All sub-multisets of a partition given as {part: multiplicity},
    each returned with parts descending."""
    items = sorted(mult.items(), reverse=True)
    out: list[tuple[int, ...]] = []

    def rec(i: int, cur: list[int]):
        if i == len(items):
            out.append(tuple(cur))
            return
        j, r = items[i]
        for take in range(r + 1):
            rec(i + 1, cur + [j] * take)

    rec(0, [])
    return out


def _coeff_cache(slope: Fraction) -> dict[tuple[int, ...], Fraction]:
    return {}


def merge_even_creations(
    mono: Monomial, lam: tuple[int, ...], label: int = COH_E
) -> Monomial:
    """Insert creation modes of an even label (parts descending) into a
    canonical monomial in one merge pass; even modes cross without
    signs, so the result needs no coefficient."""
    out: list[tuple[int, int]] = []
    i = 0
    size = len(mono)
    for j in lam:
        key = (-j, label)
        while i < size and (-mono[i][0], mono[i][1]) < key:
            out.append(mono[i])
            i += 1
        out.append((j, label))
    out.extend(mono[i:])
    return tuple(out)


def _cached_partition_coeff(
    cache: dict[tuple[int, ...], Fraction],
    parts: tuple[int, ...],
    slope: Fraction,
) -> Fraction:
    val = cache.get(parts)
    if val is None:
        val = _partition_coeff(parts, slope)
        cache[parts] = val
    return val


def charged_field_slices(
    m: int,
    mono: Monomial,
    n_lo: int,
    n_hi: int,
    caches: Optional[tuple[dict, dict]] = None,
) -> dict[int, Row]:
    """Rows of the z^{-n} modes of the slope-m charged exponential field
    on one monomial, for every n in [n_lo, n_hi] at once.  Exact: the
    annihilation parts that act are exactly the sub-partitions of the
    monomial's pt content, all of which are enumerated.  ``caches`` lets
    bulk callers share the partition-coefficient tables across
    monomials."""
    pt_mult: dict[int, int] = {}
    for k, label in mono:
        if label == COH_PT:
            pt_mult[k] = pt_mult.get(k, 0) + 1
    slope = Fraction(m)
    if caches is None:
        caches = (_coeff_cache(slope), _coeff_cache(-slope))
    c_cache, a_cache = caches
    slices: dict[int, Row] = {n: {} for n in range(n_lo, n_hi + 1)}
    for mu in _sub_partitions(pt_mult):
        part = tuple((j, COH_E) for j in mu)
        ann = annihilation_chain(mono, part)
        if ann is None:
            continue
        factor, reduced = ann
        a_coeff = _cached_partition_coeff(a_cache, mu, -slope) * factor
        q = sum(mu)
        for n in range(n_lo, n_hi + 1):
            p = q - n
            if p < 0:
                continue
            row = slices[n]
            for lam in _partitions(p):
                final = merge_even_creations(reduced, lam)
                val = _cached_partition_coeff(c_cache, lam, slope) * a_coeff
                acc = row.get(final)
                total = val if acc is None else acc + val
                if total:
                    row[final] = total
                elif acc is not None:
                    del row[final]
    return slices
