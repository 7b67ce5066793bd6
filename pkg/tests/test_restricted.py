import pytest
import sys
import logging
from itertools import permutations
from pathlib import Path
import numpy as np
from numpy.testing import assert_allclose

sys.path.append(str(Path(__file__).resolve().parent.parent))

from quantum.errors import DimensionMismatch, NotPermutation, NotRestricted, RankOutOfRange
from quantum.gates import HADAMARD, sigma
from quantum.restricted import (
    PermutationN,
    build_R,
    build_T,
    cc_u,
    classify,
    compose_check,
    controlled_u,
    enumerate_permutations,
    hpv_operation,
    is_unitary,
    perm_to_rank,
    rank_to_perm,
    restricted_set_count,
)
from quantum.statevec import apply_on, basis_state, dense_expand
from tests.conftest import ATOL


@pytest.mark.unit
class TestRanking:

    @pytest.mark.parametrize("x,expected", [(1, (1, 2, 3, 4)), (2, (1, 2, 4, 3)), (7, (2, 1, 3, 4)), (24, (4, 3, 2, 1))])
    def test_anchor_ranks(self, x, expected):
        assert rank_to_perm(2, x).p == expected

    def test_full_listing(self, p4_listing):
        """Os 24 ranks de N=2 reproduzem P_4 na ordem"""
        assert [rank_to_perm(2, x).p for x in range(1, 25)] == p4_listing

    @pytest.mark.parametrize("x", [0, 25, -3])
    def test_rank_out_of_range(self, x):
        with pytest.raises(RankOutOfRange):
            rank_to_perm(2, x)

    def test_perm_to_rank_examples(self):
        assert perm_to_rank((1, 2, 4, 3)) == 2
        assert perm_to_rank(tuple(range(1, 9))) == 1

    def test_round_trip_n3(self, rng):
        for _ in range(500):
            p = tuple(int(v) for v in rng.permutation(8) + 1)
            assert rank_to_perm(3, perm_to_rank(p)).p == p

    def test_rank_matches_sorted_enumeration(self):
        """Oraculo: posicao na lista ordenada de todas as permutacoes de 1..8 (amostra)"""
        ordered = sorted(permutations(range(1, 9)))
        for x in (1, 2, 100, 5040, 40320):
            assert rank_to_perm(3, x).p == ordered[x - 1]
            assert perm_to_rank(ordered[x - 1]) == x

    def test_large_n_rank(self):
        """Ranks acima de 64 bits em N=5"""
        last = restricted_set_count(5)
        assert last > 2 ** 64
        assert rank_to_perm(5, last).p == tuple(range(32, 0, -1))
        assert perm_to_rank(tuple(range(32, 0, -1))) == last

    def test_not_a_permutation(self):
        with pytest.raises(NotPermutation):
            perm_to_rank((1, 1, 2, 3))
        with pytest.raises(NotPermutation):
            perm_to_rank((1, 2, 3))

    def test_inverse_permutation(self):
        p = PermutationN(2, (2, 4, 1, 3))
        assert p.inverse().p == (3, 1, 4, 2)
        assert str(p) == "2,4,1,3"


@pytest.mark.unit
class TestEnumeration:

    def test_counts(self):
        assert restricted_set_count(1) == 2
        assert restricted_set_count(2) == 24
        assert len(list(enumerate_permutations(1))) == 2
        assert len(list(enumerate_permutations(2))) == 24

    def test_listing_and_limit(self, p4_listing):
        assert [p.p for p in enumerate_permutations(2)] == p4_listing
        assert [p.p for p in enumerate_permutations(2, limit=3)] == p4_listing[:3]


@pytest.mark.unit
class TestBuildOperations:

    def test_controlled_one(self):
        """U_C(1) = T(2, t) com t1 = t2 = 1"""
        t3, t4 = np.exp(0.3j), np.exp(-1.1j)
        expected = np.array([
            [1, 0, 0, 0],
            [0, 1, 0, 0],
            [0, 0, 0, t3],
            [0, 0, t4, 0],
        ])
        assert_allclose(build_T(2, 2, (1, 1, t3, t4)).to_dense(), expected, atol=ATOL)
        assert_allclose(controlled_u(1, (t3, t4)).to_dense(), expected, atol=ATOL)

    def test_controlled_two(self):
        """U_C(2) = T(6, t) com t1 = t3 = 1"""
        t2, t4 = np.exp(0.7j), np.exp(2.1j)
        expected = np.array([
            [1, 0, 0, 0],
            [0, 0, 0, t2],
            [0, 0, 1, 0],
            [0, t4, 0, 0],
        ])
        assert_allclose(build_T(2, 6, (1, t2, 1, t4)).to_dense(), expected, atol=ATOL)
        assert_allclose(controlled_u(2, (t2, t4)).to_dense(), expected, atol=ATOL)

    def test_controlled_three_structure(self):
        """|0><0| (x) antidiagonal + |1><1| (x) I"""
        t1, t2 = np.exp(0.2j), np.exp(0.9j)
        antidiag = np.array([[0, t1], [t2, 0]])
        expected = np.kron(np.diag([1, 0]), antidiag) + np.kron(np.diag([0, 1]), np.eye(2))
        assert_allclose(controlled_u(3, (t1, t2)).to_dense(), expected, atol=ATOL)

    def test_controlled_four_structure(self):
        """Troca do primeiro qubit quando o segundo vale 0"""
        t1, t3 = np.exp(1.2j), np.exp(-0.4j)
        expected = np.array([
            [0, 0, t1, 0],
            [0, 1, 0, 0],
            [t3, 0, 0, 0],
            [0, 0, 0, 1],
        ])
        assert_allclose(controlled_u(4, (t1, t3)).to_dense(), expected, atol=ATOL)

    def test_controlled_u_bad_index(self):
        with pytest.raises(ValueError):
            controlled_u(5, (1, 1))

    def test_one_qubit_identity(self):
        assert_allclose(build_T(1, 1, (1, 1)).to_dense(), np.eye(2), atol=ATOL)

    def test_hpv_operations(self):
        u = (np.exp(0.5j), np.exp(1.5j))
        assert_allclose(hpv_operation(0, u).to_dense(), np.diag(u), atol=ATOL)
        assert_allclose(hpv_operation(1, u).to_dense(), [[0, u[0]], [u[1], 0]], atol=ATOL)

    def test_phase_length_mismatch(self):
        with pytest.raises(DimensionMismatch):
            build_T(2, 1, (1, 1, 1))

    def test_recovery_matrices(self):
        assert_allclose(build_R(2, 1).to_dense(), np.eye(4), atol=ATOL)
        expected = np.eye(4)[[0, 1, 3, 2]]
        assert_allclose(build_R(2, 2).to_dense(), expected, atol=ATOL)

    def test_recovery_is_orthogonal(self):
        for x in range(1, 25):
            r = build_R(2, x).to_dense()
            assert_allclose(r @ r.T, np.eye(4), atol=ATOL)
            assert_allclose(r, build_T(2, x, np.ones(4)).to_dense(), atol=ATOL)

    def test_apply_vector_matches_dense(self, make_phases, rng):
        op = build_T(3, 12345, make_phases(3))
        vec = rng.normal(size=8) + 1j * rng.normal(size=8)
        assert_allclose(op.apply_vector(vec), op.to_dense() @ vec, atol=ATOL)

    def test_apply_on_state_matches_dense(self, make_state, make_phases):
        labels = ["A1", "B1", "A2", "B2", "Y1", "Y2"]
        state = make_state(labels)
        op = build_T(2, 17, make_phases(2))
        out = op.apply(state, ["Y2", "A1"])
        expected = dense_expand(op.to_dense(), ["Y2", "A1"], labels) @ state.amps
        assert_allclose(out.amps, expected, atol=ATOL)

    def test_decimal_labeling(self):
        """|m,D> = binario de m-1: T(2, x) leva |p_m - 1> para |m - 1>"""
        op = build_R(2, 7)
        out = op.apply(basis_state(["A1", "A2"], "00"), ["A1", "A2"])
        # p(7) = (2,1,3,4): a coluna 1 (|00>) aparece na linha 2 (|01>)
        assert out.amplitude("01") == 1


@pytest.mark.unit
class TestUnitarity:

    def test_examples(self):
        phases = np.exp(1j * np.array([0.1, 0.2, 0.3, 0.4]))
        assert is_unitary(build_T(2, 3, phases))
        assert not is_unitary(build_T(1, 1, (1, 0.5)))
        assert is_unitary(build_T(2, 9, (1j, -1j, 1, -1)))

    def test_non_unitary_warns(self, caplog):
        with caplog.at_level(logging.WARNING, logger="quantum.restricted"):
            build_T(1, 2, (1, 0.5))
        assert "nao e unitario" in caplog.text

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_dagger_products(self, n, rng):
        t = rng.normal(size=2 ** n) + 1j * rng.normal(size=2 ** n)
        x = int(rng.integers(1, restricted_set_count(n) + 1))
        op = build_T(n, x, t)
        dense = op.to_dense()
        t_tdag, tdag_t = op.dagger_products()
        assert_allclose(dense @ dense.conj().T, np.diag(t_tdag), atol=ATOL)
        assert_allclose(dense.conj().T @ dense, np.diag(tdag_t), atol=ATOL)


@pytest.mark.unit
class TestClassify:

    def test_controlled_two(self):
        x, t = classify(controlled_u(2, (1j, -1j)).to_dense())
        assert x == 6
        assert_allclose(t, [1, 1j, 1, -1j], atol=ATOL)

    def test_identity(self):
        x, t = classify(np.eye(2))
        assert x == 1
        assert_allclose(t, [1, 1], atol=ATOL)

    def test_hadamard_is_not_restricted(self):
        with pytest.raises(NotRestricted):
            classify(HADAMARD)

    def test_tiny_entries_are_zero(self):
        m = sigma(1) + 1e-13
        x, _ = classify(m)
        assert x == 2

    @pytest.mark.parametrize("n", [1, 2])
    def test_inverts_build_all_ranks(self, n, make_phases):
        for x in range(1, restricted_set_count(n) + 1):
            t = make_phases(n)
            got_x, got_t = classify(build_T(n, x, t).to_dense())
            assert got_x == x
            assert_allclose(got_t, t, atol=ATOL)

    def test_inverts_build_sampled_n3(self, make_phases, rng):
        for _ in range(50):
            x = int(rng.integers(1, 40321))
            t = make_phases(3)
            got_x, got_t = classify(build_T(3, x, t).to_dense())
            assert got_x == x
            assert_allclose(got_t, t, atol=ATOL)


@pytest.mark.unit
class TestComposition:

    def test_one_qubit_antidiagonal(self):
        u01, u10 = np.exp(0.4j), np.exp(1.3j)
        assert compose_check(1, 2, (u01, u10))
        assert_allclose(np.diag([u01, u10]) @ build_R(1, 2).to_dense(), [[0, u01], [u10, 0]], atol=ATOL)

    def test_all_two_qubit_ranks(self, make_phases):
        for x in range(1, 25):
            assert compose_check(2, x, make_phases(2))

    def test_sampled_three_qubit_ranks(self, make_phases, rng):
        for _ in range(100):
            assert compose_check(3, int(rng.integers(1, 40321)), make_phases(3))

    def test_sparse_path_above_dense_cap(self, make_phases):
        assert compose_check(4, 123456789, make_phases(4))


@pytest.mark.unit
class TestControlledControlled:

    def test_identity(self):
        assert_allclose(cc_u(0, (1, 1)).to_dense(), np.eye(8), atol=ATOL)

    def test_toffoli(self):
        toffoli = np.eye(8)
        toffoli[[6, 7]] = toffoli[[7, 6]]
        assert_allclose(cc_u(1, (1, 1)).to_dense(), toffoli, atol=ATOL)

    def test_classify_phases(self):
        x, t = classify(cc_u(0, (np.exp(0.8j), np.exp(2.4j))).to_dense())
        assert x == 1
        assert_allclose(np.abs(t), np.ones(8), atol=ATOL)

    def test_acts_on_third_qubit(self):
        state = basis_state(["c1", "c2", "q"], "110")
        out = apply_on(state, cc_u(1, (1, 1)).to_dense(), ["c1", "c2", "q"])
        assert out.amplitude("111") == 1

    def test_bad_d(self):
        with pytest.raises(ValueError):
            cc_u(2, (1, 1))
