from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ellwall.exactpoly import QPoly
from ellwall.fock.fastapply import (
    annihilation_chain,
    apply_to_monomial,
    charged_field_slices,
    creation_chain,
    merge_even_creations,
    op_action_rows,
    single_mode_row,
)
from ellwall.fock.labels import COH_E, COH_PT, COH_SM, COH_SP, pairing_scalar
from ellwall.fock.operators import (
    ExtendedModeError,
    FockConfig,
    OperatorExpr,
    commutator_apply,
    heisenberg_mode,
    identity_operator,
    vertex_mode,
    w_general,
    w_small,
)
from ellwall.fock.states import (
    FockState,
    TruncationError,
    basis_monomials,
    basis_states,
    monomial_energy,
)


def state_of(*modes, coeff=1, charge=0):
    return FockState.from_monomial(tuple(modes), coeff, charge)


class TestHeisenbergModes:
    @given(
        st.integers(-3, 3).filter(bool),
        st.integers(-3, 3).filter(bool),
        st.sampled_from(range(4)),
        st.sampled_from(range(4)),
        st.integers(0, 48),
    )
    @settings(max_examples=60, deadline=None)
    def test_canonical_relation(self, m, k, g, h, pick):
        monos = basis_monomials(4)
        s = FockState.from_monomial(monos[pick % len(monos)])
        got = commutator_apply(heisenberg_mode(m, g), heisenberg_mode(k, h), s)
        if m + k == 0:
            expected = s.scale(m * pairing_scalar(g, h))
        else:
            expected = FockState.zero(0)
        assert got == expected

    def test_gradings(self):
        op = heisenberg_mode(-3, COH_SP)
        assert op.energy_shift == 3
        assert op.charge_shift == 0
        assert op.parity == 1
        assert heisenberg_mode(2, COH_E).parity == 0

    def test_zero_mode_rejected(self):
        with pytest.raises(ValueError):
            heisenberg_mode(0, COH_E)


class TestVertexModes:
    def test_vacuum_goldens(self):
        v = FockState.vacuum(0)
        assert vertex_mode(1, 0, 4).apply(v) == FockState.vacuum(1)
        assert vertex_mode(1, -1, 4).apply(v) == state_of((1, COH_E), charge=1)
        two_e = FockState(
            1,
            {
                ((1, COH_E), (1, COH_E)): QPoly(Fraction(1, 2)),
                ((2, COH_E),): QPoly(Fraction(1, 2)),
            },
        )
        assert vertex_mode(1, -2, 4).apply(v) == two_e

    def test_slope_scales_linear_coefficient(self):
        v = FockState.vacuum(0)
        got = vertex_mode(2, -1, 4).apply(v)
        assert got == state_of((1, COH_E), coeff=2, charge=2)
        got = vertex_mode(-1, -1, 4).apply(v)
        assert got == state_of((1, COH_E), coeff=-1, charge=-1)

    def test_positive_modes_kill_vacuum(self):
        v = FockState.vacuum(0)
        for n in (1, 2, 3):
            assert vertex_mode(1, n, 4).apply(v).is_zero()

    def test_charge_and_energy_shift(self):
        op = vertex_mode(-2, 3, 5)
        assert op.charge_shift == -2
        assert op.energy_shift == -3
        assert op.parity == 0

    def test_truncation_guard(self):
        op = vertex_mode(1, 1, 2)
        deep = state_of((3, COH_PT))
        with pytest.raises(TruncationError):
            op.apply(deep)

    @pytest.mark.parametrize("k,m,n", [(1, 1, 0), (2, 1, -1), (-1, 2, 1), (3, -2, -2)])
    def test_heisenberg_commutator_instance(self, k, m, n):
        N = 6
        window = N - max(0, -k) - max(0, -n, -k - n)
        lhs_op = heisenberg_mode(k, COH_PT)
        field = vertex_mode(m, n, N)
        shifted = vertex_mode(m, n + k, N)
        for s in basis_states(window):
            got = commutator_apply(lhs_op, field, s)
            assert got == shifted.apply(s).scale(m)

    def test_zero_pairing_label_commutes(self):
        field = vertex_mode(1, -1, 4)
        for label in (COH_E, COH_SP, COH_SM):
            mode = heisenberg_mode(2, label)
            for s in basis_states(2):
                assert commutator_apply(mode, field, s).is_zero()


class TestSmallGenerators:
    def test_normalization_factors(self):
        v = state_of((2, COH_PT))
        assert w_small(2, COH_E).apply(v) == FockState(
            0, {(): QPoly(Fraction(1))}
        )
        w = state_of((2, COH_E))
        assert w_small(2, COH_PT).apply(w) == FockState(
            0, {(): QPoly(Fraction(4))}
        )
        with pytest.raises(ValueError):
            w_small(0, COH_E)

    def test_negative_modes_use_absolute_value(self):
        v = FockState.vacuum(0)
        assert w_small(-2, COH_E).apply(v) == state_of(
            (2, COH_E), coeff=Fraction(1, 2)
        )
        assert w_small(-2, COH_PT).apply(v) == state_of((2, COH_PT), coeff=2)

    def test_sigma_unnormalized(self):
        v = FockState.vacuum(0)
        assert w_small(-3, COH_SP).apply(v) == state_of((3, COH_SP))

    def test_w_general_reduces_at_slope_zero(self):
        for n in (-2, -1, 1, 3):
            for label in range(4):
                a = w_general(0, n, label, 4)
                b = w_small(n, label)
                for s in basis_states(3):
                    assert a.apply(s) == b.apply(s)


class TestSigmaField:
    def test_vacuum_goldens(self):
        v = FockState.vacuum(0)
        assert w_general(1, -1, COH_SP, 4).apply(v) == state_of(
            (1, COH_SP), charge=1
        )
        got = w_general(1, -2, COH_SP, 4).apply(v)
        expected = FockState(
            1,
            {
                ((1, COH_E), (1, COH_SP)): QPoly(Fraction(1)),
                ((2, COH_SP),): QPoly(Fraction(1)),
            },
        )
        assert got == expected

    def test_nonnegative_modes_kill_vacuum(self):
        v = FockState.vacuum(0)
        for b in (0, 1, 2):
            assert w_general(1, b, COH_SM, 4).apply(v).is_zero()

    def test_gradings(self):
        op = w_general(-1, 2, COH_SM, 5)
        assert op.parity == 1
        assert op.charge_shift == -1
        assert op.energy_shift == -2


class TestExtendedField:
    def test_requires_config(self):
        with pytest.raises(ExtendedModeError):
            w_general(1, -1, COH_PT, 4)

    def test_vacuum_golden_default(self):
        cfg = FockConfig()
        v = FockState.vacuum(0)
        assert w_general(1, -1, COH_PT, 4, cfg).apply(v) == state_of(
            (1, COH_E), charge=1
        )
        got = w_general(1, -2, COH_PT, 4, cfg).apply(v)
        expected = FockState(
            1,
            {
                ((1, COH_E), (1, COH_E)): QPoly(Fraction(1)),
                ((1, COH_SP), (1, COH_SM)): QPoly(Fraction(1)),
                ((2, COH_E),): QPoly(Fraction(1)),
            },
        )
        assert got == expected

    def test_zero_weight_field_drops_bilinear(self):
        cfg = FockConfig(weight_field="zero")
        v = FockState.vacuum(0)
        got = w_general(1, -2, COH_PT, 4, cfg).apply(v)
        expected = FockState(
            1,
            {
                ((1, COH_E), (1, COH_E)): QPoly(Fraction(1)),
                ((2, COH_E),): QPoly(Fraction(1)),
            },
        )
        assert got == expected

    def test_plain_derivative_shifts_index(self):
        # d/dz lowers the effective mode index by one relative to z d/dz
        cfg_z = FockConfig()
        cfg_d = FockConfig(derivative="ddz")
        v = FockState.vacuum(0)
        assert w_general(1, -1, COH_PT, 4, cfg_d).apply(v) == w_general(
            1, -2, COH_PT, 4, cfg_z
        ).apply(v)

    def test_config_validation(self):
        with pytest.raises(ValueError):
            FockConfig(weight_field="bosonic")
        with pytest.raises(ValueError):
            FockConfig(derivative="dw")


class TestOperatorExpr:
    def test_mixed_grading_addition_rejected(self):
        with pytest.raises(ValueError):
            heisenberg_mode(1, COH_E) + heisenberg_mode(2, COH_E)
        with pytest.raises(ValueError):
            heisenberg_mode(1, COH_E) + heisenberg_mode(1, COH_SP)

    def test_scaling(self):
        op = heisenberg_mode(-1, COH_E).scale(Fraction(2, 3))
        v = FockState.vacuum(0)
        assert op.apply(v) == state_of((1, COH_E), coeff=Fraction(2, 3))

    def test_identity(self):
        s = state_of((2, COH_SM), coeff=Fraction(5, 7), charge=-1)
        assert identity_operator().apply(s) == s

    def test_w_general_excludes_origin(self):
        with pytest.raises(ValueError):
            w_general(0, 0, COH_E, 4)


class TestFastRows:
    OPS = [
        ("sigma plus field", lambda: w_general(1, 1, COH_SP, 4)),
        ("vertex", lambda: w_general(-1, 2, COH_E, 4)),
        ("raising sigma", lambda: w_general(1, -2, COH_SM, 4)),
        ("small pt", lambda: w_general(0, 3, COH_PT, 4)),
    ]

    @pytest.mark.parametrize("name,make", OPS, ids=[n for n, _ in OPS])
    def test_rows_match_operator_apply(self, name, make):
        op = make()
        monos = basis_monomials(4)
        rows = op_action_rows(op, monos)
        for mono in monos:
            want = op.apply(FockState.from_monomial(mono))
            got = rows[mono]
            assert set(got) == set(want.terms)
            for target, coeff in got.items():
                assert want.terms[target] == QPoly(coeff)

    def test_rows_reject_undersized_window(self):
        op = vertex_mode(1, 0, 2)
        with pytest.raises(ValueError):
            op_action_rows(op, basis_monomials(3))

    def test_single_mode_row_matches_alpha(self):
        from ellwall.fock.states import alpha_apply

        for mono in basis_monomials(3):
            for n in (-2, -1, 1, 2):
                for label in range(4):
                    got = single_mode_row(mono, n, label)
                    want = alpha_apply(n, label, FockState.from_monomial(mono))
                    assert set(got) == set(want.terms)
                    for t, c in got.items():
                        assert want.terms[t] == QPoly(c)

    def test_chains_compose(self):
        mono = ((2, COH_PT), (1, COH_SP), (1, COH_PT))
        # both annihilation modes contract: factors 1 and 2
        hit = annihilation_chain(mono, ((2, COH_E), (1, COH_E)))
        assert hit is not None
        factor, reduced = hit
        assert factor == 2 and reduced == ((1, COH_SP),)
        back = creation_chain(reduced, ((2, COH_PT),))
        assert back == (1, ((2, COH_PT), (1, COH_SP)))

    def test_annihilation_chain_missing_partner(self):
        assert annihilation_chain(((1, COH_SP),), ((1, COH_E),)) is None

    @given(
        st.lists(st.integers(1, 4), min_size=0, max_size=3),
        st.integers(0, 30),
    )
    @settings(max_examples=40, deadline=None)
    def test_merge_even_matches_chain(self, parts, pick):
        monos = basis_monomials(3)
        mono = monos[pick % len(monos)]
        lam = tuple(sorted(parts, reverse=True))
        merged = merge_even_creations(mono, lam)
        chained = creation_chain(mono, tuple((j, COH_E) for j in lam))
        assert chained == (1, merged)

    def test_field_slices_match_vertex_modes(self):
        for m in (1, -1, 2):
            for mono in basis_monomials(3):
                slices = charged_field_slices(m, mono, -2, 2)
                for n in range(-2, 3):
                    op = vertex_mode(m, n, 3)
                    want = op.apply(FockState.from_monomial(mono))
                    got = slices[n]
                    assert set(got) == set(want.terms)
                    for t, c in got.items():
                        assert want.terms[t] == QPoly(c)
