"""State-family checks: parity classes, cat basis, recursion, decompositions."""

from __future__ import annotations

import itertools

import numpy as np
import pytest

from bcabe.states import (
    BELL_ORDER,
    BasisString,
    BellLabel,
    FamilyLabel,
    NotBellCorrelated,
    bell_product_state,
    bell_state,
    bell_tuple_decomposition,
    build_family,
    complement,
    enumerate_parity_strings,
    family_support_projector,
    ghz_basis,
    ghz_state,
    pauli_connection_search,
    permutation_invariance_check,
    recursion_blocks,
    verify_recursion,
)
from bcabe.tensor import (
    PureState,
    fidelity_with_pure,
    partial_trace,
    permute_qubits_matrix,
    trace_distance,
)

import oracles

# Frozen expected values (derived by brute-force enumeration, see oracles.py):
P_STRINGS_4 = ["0000", "0011", "0101", "0110"]
Q_STRINGS_4 = ["0001", "0010", "0100", "0111"]

FAMILY_TO_ORACLE = {
    FamilyLabel.RHO_PLUS: ("p", +1),
    FamilyLabel.RHO_MINUS: ("p", -1),
    FamilyLabel.SIGMA_PLUS: ("q", +1),
    FamilyLabel.SIGMA_MINUS: ("q", -1),
}

# base of the recursion: the two_n = 2 "families" are the four Bell projectors
BASE_CASE = {
    FamilyLabel.RHO_PLUS: "phi+",
    FamilyLabel.RHO_MINUS: "phi-",
    FamilyLabel.SIGMA_PLUS: "psi+",
    FamilyLabel.SIGMA_MINUS: "psi-",
}


class TestParityStrings:
    def test_frozen_families_at_four(self):
        assert [s.bits for s in enumerate_parity_strings(4, "p")] == P_STRINGS_4
        assert [s.bits for s in enumerate_parity_strings(4, "q")] == Q_STRINGS_4

    @pytest.mark.parametrize("two_n", [4, 6, 8])
    def test_matches_brute_force_filter(self, two_n):
        for cls in ("p", "q"):
            got = [s.bits for s in enumerate_parity_strings(two_n, cls)]
            assert got == oracles.parity_filter(two_n, cls)

    @pytest.mark.parametrize("two_n", [4, 6, 8])
    def test_cardinality(self, two_n):
        for cls in ("p", "q"):
            assert len(enumerate_parity_strings(two_n, cls)) == 2 ** (two_n - 2)

    @pytest.mark.parametrize("two_n", [4, 6])
    def test_classes_and_complements_partition_all_strings(self, two_n):
        p = {s.bits for s in enumerate_parity_strings(two_n, "p")}
        q = {s.bits for s in enumerate_parity_strings(two_n, "q")}
        pbar = {complement(BasisString(s)).bits for s in p}
        qbar = {complement(BasisString(s)).bits for s in q}
        union = p | q | pbar | qbar
        assert len(p) + len(q) + len(pbar) + len(qbar) == 2 ** two_n
        assert len(union) == 2 ** two_n

    def test_rejects_bad_sizes(self):
        with pytest.raises(ValueError):
            enumerate_parity_strings(3, "p")
        with pytest.raises(ValueError):
            enumerate_parity_strings(2, "p")

    def test_complement(self):
        assert complement(BasisString("0011")).bits == "1100"


class TestGhzBasis:
    def test_amplitudes(self):
        g = ghz_state(BasisString("0011"), -1)
        v = g.state.amplitudes
        np.testing.assert_allclose(v[int("0011", 2)], 1 / np.sqrt(2))
        np.testing.assert_allclose(v[int("1100", 2)], -1 / np.sqrt(2))
        assert np.count_nonzero(v) == 2

    def test_non_canonical_base_rejected(self):
        with pytest.raises(ValueError, match="start with 0"):
            ghz_state(BasisString("10"), +1)

    def test_bad_sign_rejected(self):
        with pytest.raises(ValueError, match="sign"):
            ghz_state(BasisString("00"), 2)

    @pytest.mark.parametrize("two_n", [4, 6])
    def test_orthonormal_basis(self, two_n):
        states = ghz_basis(two_n)
        assert len(states) == 2 ** two_n
        mat = np.array([g.state.amplitudes for g in states])
        gram = mat.conj() @ mat.T
        residual = np.abs(gram - np.eye(2 ** two_n)).max()
        assert residual < 1e-12

    def test_bell_states_match_oracle(self):
        for label in BELL_ORDER:
            np.testing.assert_allclose(
                bell_state(label).amplitudes, oracles.BELL_VECTORS[label.value], atol=1e-15)


class TestBuildFamily:
    @pytest.mark.parametrize("label", list(FamilyLabel))
    def test_base_case_is_bell_projector(self, label):
        got = build_family(2, label)
        want = oracles.proj(oracles.BELL_VECTORS[BASE_CASE[label]])
        assert trace_distance(got.entries, want) < 1e-12

    @pytest.mark.parametrize("two_n", [4, 6])
    @pytest.mark.parametrize("label", list(FamilyLabel))
    def test_matches_direct_mixture_oracle(self, two_n, label):
        cls, sign = FAMILY_TO_ORACLE[label]
        want = oracles.family_reference(two_n, cls, sign)
        assert trace_distance(build_family(two_n, label).entries, want) < 1e-12

    def test_smolin_equivalence(self):
        # rho+ at four qubits is the equal mixture of doubled Bell pairs
        got = build_family(4, FamilyLabel.RHO_PLUS)
        assert trace_distance(got.entries, oracles.smolin_state()) < 1e-12

    def test_rank_and_purity(self):
        rho = build_family(4, FamilyLabel.RHO_PLUS)
        vals = np.linalg.eigvalsh(rho.entries)
        np.testing.assert_allclose(vals[-4:], 0.25, atol=1e-12)
        np.testing.assert_allclose(vals[:-4], 0.0, atol=1e-12)

    def test_fidelity_with_single_cat_state(self):
        rho = build_family(4, FamilyLabel.RHO_PLUS)
        first = ghz_state(BasisString("0000"), +1).state
        assert fidelity_with_pure(rho, first) == pytest.approx(0.25, abs=1e-12)

    def test_single_qubit_marginal_is_maximally_mixed(self):
        rho = build_family(4, FamilyLabel.RHO_PLUS)
        red = partial_trace(rho, [1, 2, 3])
        np.testing.assert_allclose(red.entries, np.eye(2) / 2, atol=1e-12)

    def test_rho_sigma_supports_are_orthogonal(self):
        a = build_family(4, FamilyLabel.RHO_PLUS)
        b = build_family(4, FamilyLabel.SIGMA_PLUS)
        assert trace_distance(a, b) == pytest.approx(1.0, abs=1e-12)
        for x, y in itertools.combinations(FamilyLabel, 2):
            overlap = np.trace(build_family(4, x).entries @ build_family(4, y).entries).real
            assert overlap == pytest.approx(0.0, abs=1e-12)

    def test_support_projector(self):
        p = family_support_projector(4, FamilyLabel.SIGMA_MINUS)
        assert p.rank == 4
        rho = build_family(4, FamilyLabel.SIGMA_MINUS)
        np.testing.assert_allclose(p.entries @ rho.entries, rho.entries, atol=1e-12)

    def test_supports_sum_to_identity(self):
        total = sum(family_support_projector(4, f).entries for f in FamilyLabel)
        np.testing.assert_allclose(total, np.eye(16), atol=1e-12)

    def test_odd_size_rejected(self):
        with pytest.raises(ValueError):
            build_family(3, FamilyLabel.RHO_PLUS)


class TestRecursion:
    @pytest.mark.parametrize("two_n", [4, 6])
    def test_all_eight_checks_pass(self, two_n):
        checks = verify_recursion(two_n)
        assert len(checks) == 8
        assert {c.family for c in checks} == set(FamilyLabel)
        assert {c.block_position for c in checks} == {"leading", "trailing"}
        for c in checks:
            assert c.distance < 1e-12, f"{c.family} {c.block_position}: {c.distance}"

    def test_blocks_table_covers_each_family_once(self):
        for label in FamilyLabel:
            blocks = recursion_blocks(label)
            assert len(blocks) == 4
            assert {b for b, _ in blocks} == set(BellLabel)
            assert {f for _, f in blocks} == set(FamilyLabel)

    def test_rejects_base_size(self):
        with pytest.raises(ValueError):
            verify_recursion(2)


class TestPauliConnections:
    def test_frozen_examples(self):
        assert pauli_connection_search(FamilyLabel.RHO_PLUS, FamilyLabel.RHO_MINUS, 4) == (1, "Z")
        assert pauli_connection_search(FamilyLabel.RHO_PLUS, FamilyLabel.SIGMA_PLUS, 4) == (1, "X")

    def test_identity_pair_finds_nothing(self):
        assert pauli_connection_search(FamilyLabel.RHO_PLUS, FamilyLabel.RHO_PLUS, 4) is None

    @pytest.mark.parametrize("two_n", [4])
    def test_every_distinct_ordered_pair_connected(self, two_n):
        for a, b in itertools.permutations(FamilyLabel, 2):
            hit = pauli_connection_search(a, b, two_n)
            assert hit is not None, f"no single-qubit Pauli relates {a} to {b}"
            assert hit[0] == 1  # symmetry puts the first hit on qubit 1

    def test_phase_flip_toggles_cat_sign(self):
        # Z on qubit 1 sends each + cat state to its - partner
        from bcabe.tensor import PAULI_Z, apply_unitary_on_subset
        for base in enumerate_parity_strings(4, "p"):
            plus = ghz_state(base, +1).state.to_density()
            minus = ghz_state(base, -1).state.to_density()
            moved = apply_unitary_on_subset(plus, PAULI_Z, [1])
            assert trace_distance(moved, minus) < 1e-12


class TestBellTupleDecomposition:
    def test_smolin_tuples(self):
        rho = build_family(4, FamilyLabel.RHO_PLUS)
        got = bell_tuple_decomposition(rho, ((1, 2), (3, 4)))
        want = {(b, b): 0.25 for b in BellLabel}
        assert {t: w for t, w in got}.keys() == want.keys()
        for t, w in got:
            assert w == pytest.approx(0.25, abs=1e-12)

    def test_six_qubit_tuple_count_and_weights(self):
        rho = build_family(6, FamilyLabel.RHO_PLUS)
        got = bell_tuple_decomposition(rho, ((1, 2), (3, 4), (5, 6)))
        assert len(got) == 16
        for _, w in got:
            assert w == pytest.approx(1 / 16, abs=1e-12)

    def test_weights_match_overlap_oracle(self):
        rho = build_family(6, FamilyLabel.SIGMA_PLUS)
        got = dict(bell_tuple_decomposition(rho, ((1, 2), (3, 4), (5, 6))))
        for labels in itertools.product(BELL_ORDER, repeat=3):
            v = np.ones(1, dtype=complex)
            for lbl in labels:
                v = np.kron(v, oracles.BELL_VECTORS[lbl.value])
            w = float(np.real(v.conj() @ rho.entries @ v))
            if labels in got:
                assert got[labels] == pytest.approx(w, abs=1e-12)
            else:
                assert w < 1e-12

    def test_respects_nontrivial_pairing(self):
        # families are permutation invariant, so any disjoint pairing works
        rho = build_family(4, FamilyLabel.RHO_PLUS)
        got = bell_tuple_decomposition(rho, ((1, 3), (2, 4)))
        assert sum(w for _, w in got) == pytest.approx(1.0, abs=1e-12)

    def test_non_bell_correlated_state_raises(self):
        rho = PureState.basis("0000").to_density()
        with pytest.raises(NotBellCorrelated):
            bell_tuple_decomposition(rho, ((1, 2), (3, 4)))

    def test_invalid_pairing_rejected(self):
        rho = build_family(4, FamilyLabel.RHO_PLUS)
        with pytest.raises(ValueError, match="pairing"):
            bell_tuple_decomposition(rho, ((1, 2), (2, 4)))

    def test_bell_product_state_placement(self):
        psi = bell_product_state((BellLabel.PHI_PLUS, BellLabel.PSI_MINUS), ((1, 3), (2, 4)), 4)
        # amplitude of |0 0 0 1>: qubits (1,3) in phi+ contribute |00>, (2,4) psi- gives |01>
        v = psi.amplitudes
        assert v[int("0001", 2)] == pytest.approx(0.5)
        assert v[int("0100", 2)] == pytest.approx(-0.5)
        assert v[int("1011", 2)] == pytest.approx(0.5)
        assert v[int("1110", 2)] == pytest.approx(-0.5)


class TestPermutationInvariance:
    def test_identity_permutation_is_exactly_zero(self):
        rho = build_family(4, FamilyLabel.RHO_PLUS)
        moved = permute_qubits_matrix(rho.entries, [1, 2, 3, 4])
        assert trace_distance(moved, rho.entries) == 0.0

    @pytest.mark.parametrize("label", list(FamilyLabel))
    def test_all_transpositions_at_four(self, label):
        assert permutation_invariance_check(4, label) < 1e-12

    def test_at_six(self):
        assert permutation_invariance_check(6, FamilyLabel.RHO_PLUS) < 1e-12
