"""Verification engines for the operator algebra.

Bracket verification: the target relation is

    [w^{a,b}_g, w^{c,d}_h} = -(ad - bc) w^{a+c,b+d}_{g*h}
                             + delta_{a+c,0} delta_{b+d,0} (a c_s + b c_t)

with the star product (unit pt) on labels.  Each instance is checked on
the full monomial basis of the evaluation window (truncation minus the
worst intermediate energy raise), per the comparison policy: exact
match, match up to one recorded nonzero rational rescale per root space
((a+c, b+d), target label), or mismatch with a witness state.  Central
scalars are solved per ordered label pair from the sweep's central
instances and reported with their label dependence; they are never
asserted to be label-independent.

Vertex-commutator verification: the Heisenberg mode alpha_k(g) commutes
past the slope-m charged exponential field up to the pairing factor
<g, mE> and a mode shift by k; checked state-by-state on every basis
monomial of the valid window.

All engines work on sparse Fraction rows (see fastapply) so the full
mandatory sweeps run in seconds rather than hours.
"""

from __future__ import annotations

import os
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from ..exactpoly import QPoly
from ..serialize import frac_str
from .fastapply import (
    Row,
    apply_single_mode,
    charged_field_slices,
    op_action_rows,
    single_mode_row,
)
from .labels import (
    COH_E,
    COH_PT,
    LABEL_NAMES,
    LABEL_PARITY,
    CohClass,
    label_index,
    pairing_scalar,
    star_product,
)
from .operators import w_general
from .states import FockState, Monomial, basis_monomials, monomial_energy


def _eval_window(N: int, b: int, d: int) -> int:
    """Energy cap so every intermediate application stays within N."""
    slack = max(0, -b, -d, -(b + d))
    return N - slack


def _row_state(charge: int, row: Row) -> FockState:
    return FockState(charge, {m: QPoly(c) for m, c in row.items()})


@dataclass(frozen=True)
class BracketReport:
    lhs_params: tuple[int, int, str]
    rhs_params: tuple[int, int, str]
    truncation: int
    match: bool
    kind: str  # "exact" | "rescaled" | "central" | "mismatch"
    rescale: Optional[Fraction] = None
    central_value: Optional[Fraction] = None
    witness: Optional[dict] = None

    def to_json_dict(self) -> dict:
        a, b, g = self.lhs_params
        c, d, h = self.rhs_params
        out = {
            "lhs_params": {"a": a, "b": b, "label": g},
            "rhs_params": {"a": c, "b": d, "label": h},
            "match": self.match,
            "kind": self.kind,
            "rescale_factors": (
                {} if self.rescale is None else {"factor": frac_str(self.rescale)}
            ),
            "central": (
                {}
                if self.central_value is None
                else {"value": frac_str(self.central_value)}
            ),
            "truncation": self.truncation,
        }
        if self.witness is not None:
            out["witness"] = self.witness
        return out


class _BracketEngine:
    """Shared per-truncation action tables for bracket verification."""

    def __init__(self, N: int):
        self.N = N
        self.monos: tuple[Monomial, ...] = tuple(basis_monomials(N))
        self._energy = {m: monomial_energy(m) for m in self.monos}
        self._rows: dict[tuple[int, int, int], dict[Monomial, Row]] = {}
        self._lock = threading.Lock()

    def rows(self, a: int, b: int, li: int) -> dict[Monomial, Row]:
        key = (a, b, li)
        with self._lock:
            cached = self._rows.get(key)
        if cached is not None:
            return cached
        rows = op_action_rows(w_general(a, b, li, self.N), self.monos)
        with self._lock:
            return self._rows.setdefault(key, rows)

    def window_monos(self, w: int) -> list[Monomial]:
        return [m for m in self.monos if self._energy[m] <= w]

    def _compose(
        self,
        outer: dict[Monomial, Row],
        inner: dict[Monomial, Row],
        monos: Sequence[Monomial],
    ) -> dict[Monomial, Row]:
        out: dict[Monomial, Row] = {}
        for m in monos:
            acc: Row = {}
            for t, c in inner[m].items():
                for u, c2 in outer[t].items():
                    v = acc.get(u)
                    total = c * c2 if v is None else v + c * c2
                    if total:
                        acc[u] = total
                    elif v is not None:
                        del acc[u]
            out[m] = acc
        return out

    def pair_reports(
        self, a: int, b: int, gi: int, c: int, d: int, hi: int
    ) -> tuple[BracketReport, BracketReport]:
        """Reports for [A, B} and [B, A} from one pair of compositions."""
        w = _eval_window(self.N, b, d)
        if w < 0:
            raise ValueError(
                f"truncation {self.N} too small for modes {b}, {d}"
            )
        monos = self.window_monos(w)
        rows_a = self.rows(a, b, gi)
        rows_b = self.rows(c, d, hi)
        comp_ab = self._compose(rows_a, rows_b, monos)
        comp_ba = self._compose(rows_b, rows_a, monos)
        eps = 1 if (LABEL_PARITY[gi] and LABEL_PARITY[hi]) else -1
        lhs_fwd = {
            m: _combine(comp_ab[m], comp_ba[m], eps) for m in monos
        }
        rep_fwd = self._evaluate(a, b, gi, c, d, hi, lhs_fwd, monos)
        lhs_rev = {
            m: _combine(comp_ba[m], comp_ab[m], eps) for m in monos
        }
        rep_rev = self._evaluate(c, d, hi, a, b, gi, lhs_rev, monos)
        return rep_fwd, rep_rev

    def _evaluate(
        self,
        a: int,
        b: int,
        gi: int,
        c: int,
        d: int,
        hi: int,
        lhs: dict[Monomial, Row],
        monos: Sequence[Monomial],
    ) -> BracketReport:
        lp = (a, b, LABEL_NAMES[gi])
        rp = (c, d, LABEL_NAMES[hi])
        if (a + c, b + d) == (0, 0):
            scalar: Optional[Fraction] = None
            for m in monos:
                row = lhs[m]
                val = row.get(m, Fraction(0)) if len(row) <= 1 else None
                if val is None or (row and m not in row):
                    return BracketReport(
                        lp, rp, self.N, False, "mismatch",
                        witness={
                            "state": _row_state(0, {m: Fraction(1)}).to_json_dict(),
                            "got": _row_state(0, row).to_json_dict(),
                            "expected": "scalar multiple of the state",
                        },
                    )
                if scalar is None:
                    scalar = val
                elif scalar != val:
                    return BracketReport(
                        lp, rp, self.N, False, "mismatch",
                        witness={
                            "state": _row_state(0, {m: Fraction(1)}).to_json_dict(),
                            "got": _row_state(0, row).to_json_dict(),
                            "expected": f"uniform scalar {scalar}",
                        },
                    )
            return BracketReport(
                lp, rp, self.N, True, "central",
                central_value=scalar if scalar is not None else Fraction(0),
            )
        coef = Fraction(-(a * d - b * c))
        product = star_product(CohClass.basis(gi), CohClass.basis(hi))
        support = [(l, comp) for l, comp in product.support()]
        if coef == 0 or not support:
            for m in monos:
                if lhs[m]:
                    return BracketReport(
                        lp, rp, self.N, False, "mismatch",
                        witness={
                            "state": _row_state(0, {m: Fraction(1)}).to_json_dict(),
                            "got": _row_state(a + c, lhs[m]).to_json_dict(),
                            "expected": "0",
                        },
                    )
            return BracketReport(lp, rp, self.N, True, "exact", rescale=Fraction(1))
        # basis-label star products are monomial, so one target operator
        lbl, comp = support[0]
        target_rows = self.rows(a + c, b + d, lbl)
        scale = coef * comp
        factor: Optional[Fraction] = None
        for m in monos:
            got = lhs[m]
            want = target_rows[m]
            if not got and not want:
                continue
            if set(got) != set(want):
                return self._mismatch(lp, rp, a + c, m, got, want, scale)
            for u, gv in got.items():
                wv = want[u] * scale
                if wv == 0:
                    return self._mismatch(lp, rp, a + c, m, got, want, scale)
                ratio = gv / wv
                if factor is None:
                    factor = ratio
                elif factor != ratio:
                    return self._mismatch(lp, rp, a + c, m, got, want, scale)
        if factor is None or factor == 1:
            return BracketReport(lp, rp, self.N, True, "exact", rescale=Fraction(1))
        return BracketReport(lp, rp, self.N, True, "rescaled", rescale=factor)

    def _mismatch(self, lp, rp, charge, m, got, want, scale) -> BracketReport:
        expected = {u: v * scale for u, v in want.items()}
        return BracketReport(
            lp, rp, self.N, False, "mismatch",
            witness={
                "state": _row_state(0, {m: Fraction(1)}).to_json_dict(),
                "got": _row_state(charge, got).to_json_dict(),
                "expected": _row_state(charge, expected).to_json_dict(),
            },
        )


def _combine(first: Row, second: Row, eps: int) -> Row:
    out = dict(first)
    for u, v in second.items():
        acc = out.get(u)
        total = eps * v if acc is None else acc + eps * v
        if total:
            out[u] = total
        elif acc is not None:
            del out[u]
    return out


_ENGINES: dict[int, _BracketEngine] = {}
_ENGINES_LOCK = threading.Lock()


def _get_engine(N: int) -> _BracketEngine:
    with _ENGINES_LOCK:
        engine = _ENGINES.get(N)
        if engine is None:
            engine = _BracketEngine(N)
            _ENGINES[N] = engine
        return engine


def bracket_verify(
    a: int,
    b: int,
    gamma: Union[int, str],
    c: int,
    d: int,
    eta: Union[int, str],
    N: int,
) -> BracketReport:
    """Verify one bracket instance on the full basis of the evaluation
    window; see the module docstring for the comparison policy."""
    gi, hi = label_index(gamma), label_index(eta)
    report, _ = _get_engine(N).pair_reports(a, b, gi, c, d, hi)
    return report


@dataclass
class SweepSummary:
    truncation: int
    instances: int = 0
    matches: int = 0
    mismatches: list[BracketReport] = field(default_factory=list)
    rescales: dict[tuple[int, int, str], Fraction] = field(default_factory=dict)
    central: dict[tuple[str, str], dict] = field(default_factory=dict)
    rescale_conflicts: list[str] = field(default_factory=list)

    def to_json_dict(self) -> dict:
        return {
            "truncation": self.truncation,
            "instances": self.instances,
            "matches": self.matches,
            "mismatches": [r.to_json_dict() for r in self.mismatches],
            "rescale_factors": {
                f"({k[0]},{k[1]});{k[2]}": frac_str(v)
                for k, v in sorted(self.rescales.items())
            },
            "rescale_conflicts": list(self.rescale_conflicts),
            "central": {
                f"{g},{h}": info for (g, h), info in sorted(self.central.items())
            },
        }


def _solve_central(instances: list[tuple[int, int, Fraction]]) -> dict:
    """Fit value = a*c_s + b*c_t exactly over the collected central
    instances; report the fit or the inconsistency."""
    c_t: Optional[Fraction] = None
    c_s: Optional[Fraction] = None
    for a, b, v in instances:
        if a == 0 and b != 0:
            cand = v / b
            if c_t is None:
                c_t = cand
            elif c_t != cand:
                return {"consistent": False, "instances": len(instances)}
    for a, b, v in instances:
        if a != 0:
            if b != 0 and c_t is None:
                continue
            residual = v - (c_t or Fraction(0)) * b
            cand = residual / a
            if c_s is None:
                c_s = cand
            elif c_s != cand:
                return {"consistent": False, "instances": len(instances)}
    return {
        "consistent": True,
        "c_s": frac_str(c_s if c_s is not None else Fraction(0)),
        "c_t": frac_str(c_t if c_t is not None else Fraction(0)),
        "instances": len(instances),
    }


def bracket_sweep(
    N: int,
    labels: Sequence[Union[int, str]] = ("E", "sigma+", "sigma-"),
    a_range: int = 1,
    b_range: int = 2,
    max_workers: Optional[int] = None,
) -> SweepSummary:
    """Verify every ordered bracket instance with |a|,|c| <= a_range,
    |b|,|d| <= b_range, (a,b) != (0,0) != (c,d), over the given labels.
    The two orders of each unordered pair share their compositions.
    Rescale factors are recorded per root space and checked for
    consistency; central scalars are solved per ordered label pair."""
    engine = _get_engine(N)
    slopes = [
        (a, b)
        for a in range(-a_range, a_range + 1)
        for b in range(-b_range, b_range + 1)
        if (a, b) != (0, 0)
    ]
    operands = [
        (a, b, label_index(g)) for a, b in slopes for g in labels
    ]
    jobs = [(x, y) for x in operands for y in operands]
    pairs: list[tuple[tuple, tuple]] = []
    seen = set()
    for x, y in jobs:
        key = frozenset((x, y)) if x != y else (x,)
        if key in seen:
            continue
        seen.add(key)
        pairs.append((x, y))
    if max_workers is None:
        max_workers = int(os.environ.get("ELLWALL_THREADS", "0")) or 1
    # deterministic sequential warm-up of the shared action tables
    for a, b, li in operands:
        engine.rows(a, b, li)

    def run(pair):
        (a, b, gi), (c, d, hi) = pair
        return engine.pair_reports(a, b, gi, c, d, hi)

    if max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            results = list(pool.map(run, pairs))
    else:
        results = [run(p) for p in pairs]
    by_job: dict[tuple[tuple, tuple], BracketReport] = {}
    for (x, y), (fwd, rev) in zip(pairs, results):
        by_job[(x, y)] = fwd
        by_job[(y, x)] = rev

    summary = SweepSummary(truncation=N)
    central_instances: dict[tuple[str, str], list[tuple[int, int, Fraction]]] = {}
    for x, y in jobs:
        report = by_job[(x, y)]
        (a, b, gi), (c, d, hi) = x, y
        summary.instances += 1
        if not report.match:
            summary.mismatches.append(report)
            continue
        summary.matches += 1
        if report.kind == "central":
            key = (LABEL_NAMES[gi], LABEL_NAMES[hi])
            central_instances.setdefault(key, []).append(
                (a, b, report.central_value)
            )
        elif report.rescale is not None and report.rescale != 1:
            product = star_product(CohClass.basis(gi), CohClass.basis(hi))
            support = product.support()
            target_label = LABEL_NAMES[support[0][0]] if support else "0"
            key = (a + c, b + d, target_label)
            prev = summary.rescales.get(key)
            if prev is None:
                summary.rescales[key] = report.rescale
            elif prev != report.rescale:
                summary.rescale_conflicts.append(
                    f"root space ({key[0]},{key[1]});{key[2]}: "
                    f"{prev} vs {report.rescale}"
                )
    for key, inst in central_instances.items():
        summary.central[key] = _solve_central(inst)
    return summary


# ---------------------------------------------------------------------------
# vertex-field commutator with a single Heisenberg mode


class _FieldTable:
    """Lazy per-monomial mode slices of the slope-m charged field."""

    def __init__(self, m: int, n_lo: int, n_hi: int):
        self.m = m
        self.n_lo = n_lo
        self.n_hi = n_hi
        self._slices: dict[Monomial, dict[int, Row]] = {}
        self._caches: tuple[dict, dict] = ({}, {})

    def slices(self, mono: Monomial) -> dict[int, Row]:
        cached = self._slices.get(mono)
        if cached is None:
            cached = charged_field_slices(
                self.m, mono, self.n_lo, self.n_hi, self._caches
            )
            self._slices[mono] = cached
        return cached


def _commutator_diff(
    table: _FieldTable,
    k: int,
    gamma: int,
    n: int,
    mono: Monomial,
    ak_row: Row,
    slices: dict[int, Row],
) -> Row:
    """[alpha_k(gamma), field-mode n] - <gamma, mE> field-mode n+k on one
    monomial, as a row (empty iff the identity holds there)."""
    diff = apply_single_mode(slices[n], k, gamma)
    for t, c in ak_row.items():
        for u, v in table.slices(t)[n].items():
            acc = diff.get(u)
            total = -c * v if acc is None else acc - c * v
            if total:
                diff[u] = total
            elif acc is not None:
                del diff[u]
    pair = pairing_scalar(gamma, COH_E) * table.m
    if pair:
        for u, v in slices[n + k].items():
            acc = diff.get(u)
            total = -pair * v if acc is None else acc - pair * v
            if total:
                diff[u] = total
            elif acc is not None:
                del diff[u]
    return diff


def vertex_commutator_check(
    table: _FieldTable, k: int, gamma: int, n: int, mono: Monomial
) -> Optional[dict]:
    """Check [alpha_k(gamma), field-mode n] = <gamma, mE> field-mode n+k
    on one monomial; returns None on success, a witness dict on failure."""
    diff = _commutator_diff(
        table, k, gamma, n, mono,
        single_mode_row(mono, k, gamma), table.slices(mono),
    )
    if not diff:
        return None
    return {
        "m": table.m,
        "k": k,
        "label": LABEL_NAMES[gamma],
        "mode": n,
        "state": _row_state(0, {mono: Fraction(1)}).to_json_dict(),
        "difference": _row_state(table.m, diff).to_json_dict(),
    }


def vertex_commutator_sweep(
    N: int = 8,
    m_values: Sequence[int] = (-2, -1, 1, 2),
    k_max: int = 4,
    n_max: int = 4,
    zero_labels: Sequence[Union[int, str]] = ("E", "sigma+", "sigma-"),
    zero_window: int = 4,
) -> dict:
    """Mode-by-mode commutator sweep.  The pairing-coupled label (pt)
    runs over every basis monomial of the window N - (energy raised by
    the Heisenberg mode); the zero-pairing labels run over the smaller
    window, where the statement is that the commutator vanishes."""
    monos = basis_monomials(N)
    energies = {m: monomial_energy(m) for m in monos}
    checked = 0
    failures: list[dict] = []
    ks = [k for k in range(-k_max, k_max + 1) if k != 0]
    ns = list(range(-n_max, n_max + 1))
    zero_idx = [label_index(g) for g in zero_labels]
    def witness(k, gi, n, mono, diff):
        return {
            "m": table.m,
            "k": k,
            "label": LABEL_NAMES[gi],
            "mode": n,
            "state": _row_state(0, {mono: Fraction(1)}).to_json_dict(),
            "difference": _row_state(table.m, diff).to_json_dict(),
        }

    for m in m_values:
        table = _FieldTable(m, -n_max - k_max, n_max + k_max)
        for k in ks:
            window = N - max(0, -k)
            small_cap = min(window, zero_window)
            for mono in monos:
                e = energies[mono]
                if e > window:
                    continue
                slices = table.slices(mono)
                ak_pt = single_mode_row(mono, k, COH_PT)
                for n in ns:
                    checked += 1
                    diff = _commutator_diff(table, k, COH_PT, n, mono, ak_pt, slices)
                    if diff:
                        failures.append(witness(k, COH_PT, n, mono, diff))
                if e > small_cap:
                    continue
                for gi in zero_idx:
                    ak = single_mode_row(mono, k, gi)
                    for n in ns:
                        checked += 1
                        diff = _commutator_diff(table, k, gi, n, mono, ak, slices)
                        if diff:
                            failures.append(witness(k, gi, n, mono, diff))
    return {
        "truncation": N,
        "checked": checked,
        "failures": failures,
        "ok": not failures,
    }


# ---------------------------------------------------------------------------
# slope-zero generators against bare Heisenberg modes


def small_mode_sweep(N: int = 8, n_max: int = 6) -> dict:
    """Criteria for the slope-zero generators: the E and pt
    normalizations against bare Heisenberg modes on the full basis, and
    the central pairing [w^{0,n}_g, w^{0,-n}_h} = n <g,h> for every
    ordered label pair and 1 <= n <= n_max."""
    monos = basis_monomials(N)
    energies = {m: monomial_energy(m) for m in monos}
    failures: list[dict] = []
    checked = 0
    for n in range(1, n_max + 1):
        # w^{0,n}_E = alpha_n(E)/n and w^{0,n}_pt = n alpha_n(pt)
        for li, factor in ((COH_E, Fraction(1, n)), (COH_PT, Fraction(n))):
            window = N  # annihilation modes never raise energy
            for mono in monos:
                if energies[mono] > window:
                    continue
                checked += 1
                got = _w_small_row(n, li, mono)
                want = {
                    t: factor * c
                    for t, c in single_mode_row(mono, n, li).items()
                }
                if got != want:
                    failures.append(
                        {
                            "identity": f"w[0,{n}] normalization",
                            "label": LABEL_NAMES[li],
                            "state": _row_state(0, {mono: Fraction(1)}).to_json_dict(),
                        }
                    )
        # central pairing on all ordered label pairs
        for gi in range(4):
            for hi in range(4):
                expected = Fraction(n * pairing_scalar(gi, hi))
                eps = 1 if (LABEL_PARITY[gi] and LABEL_PARITY[hi]) else -1
                window = N - n
                for mono in monos:
                    if energies[mono] > window:
                        continue
                    checked += 1
                    fwd = _w_small_then(n, gi, -n, hi, mono)
                    rev = _w_small_then(-n, hi, n, gi, mono)
                    diff = _combine(fwd, rev, eps)
                    if diff != ({mono: expected} if expected else {}):
                        failures.append(
                            {
                                "identity": f"[w[0,{n}],w[0,{-n}]] central",
                                "labels": [LABEL_NAMES[gi], LABEL_NAMES[hi]],
                                "state": _row_state(
                                    0, {mono: Fraction(1)}
                                ).to_json_dict(),
                                "got": _row_state(0, diff).to_json_dict(),
                                "expected": frac_str(expected),
                            }
                        )
    return {"truncation": N, "checked": checked, "failures": failures, "ok": not failures}


def _w_small_factor(n: int, li: int) -> Fraction:
    if li == COH_E:
        return Fraction(1, abs(n))
    if li == COH_PT:
        return Fraction(abs(n))
    return Fraction(1)


def _w_small_row(n: int, li: int, mono: Monomial) -> Row:
    factor = _w_small_factor(n, li)
    return {t: factor * c for t, c in single_mode_row(mono, n, li).items()}


def _w_small_then(n2: int, l2: int, n1: int, l1: int, mono: Monomial) -> Row:
    """Row of w^{0,n2}_{l2} w^{0,n1}_{l1} on one monomial (right op first)."""
    out: Row = {}
    inner = _w_small_row(n1, l1, mono)
    f2 = _w_small_factor(n2, l2)
    for t, c in inner.items():
        for u, v in single_mode_row(t, n2, l2).items():
            acc = out.get(u)
            total = c * v * f2 if acc is None else acc + c * v * f2
            if total:
                out[u] = total
            elif acc is not None:
                del out[u]
    return out
