import pytest
import sys
from pathlib import Path
import numpy as np
from numpy.testing import assert_allclose

sys.path.append(str(Path(__file__).resolve().parent.parent))

from quantum.errors import (
    DimensionMismatch,
    ForcedOutcomeImpossible,
    LabelError,
    NotProductState,
)
from quantum.gates import HADAMARD, SWAP, separated_cnot, sigma
from quantum.statevec import (
    DenseOperator,
    StateVector,
    apply_on,
    basis_state,
    dense_expand,
    extract_register,
    fidelity,
    measure,
    tensor,
)
from tests.conftest import ATOL

BELL = StateVector(("A", "B"), np.array([1, 0, 0, 1]) / np.sqrt(2))


def random_unitary(dim, rng):
    raw = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(raw)
    return q * (np.diag(r) / np.abs(np.diag(r)))


@pytest.mark.unit
class TestStateVectorConstruction:

    def test_basis_state_indices(self):
        assert basis_state(["A", "B", "Y"], "000").amps[0] == 1
        assert basis_state(["A"], "1").amps[1] == 1
        state = basis_state(["A1", "B1", "A2", "B2"], "0110")
        assert state.amps[6] == 1
        assert np.count_nonzero(state.amps) == 1

    def test_basis_state_length_mismatch(self):
        with pytest.raises(DimensionMismatch):
            basis_state(["A", "B"], "0")

    def test_duplicate_labels_rejected(self):
        with pytest.raises(LabelError):
            StateVector(("A", "A"), np.zeros(4))

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError):
            StateVector(("A",), np.array([np.nan, 1.0]))

    def test_amps_are_read_only(self):
        state = basis_state(["A"], "0")
        with pytest.raises(ValueError):
            state.amps[0] = 2

    def test_dense_operator_requires_power_of_two(self):
        with pytest.raises(DimensionMismatch):
            DenseOperator(np.eye(3))


@pytest.mark.unit
class TestTensor:

    def test_basis_product(self):
        state = tensor(basis_state(["A"], "0"), basis_state(["B"], "1"))
        assert state.labels == ("A", "B")
        assert state.amplitude("01") == 1

    def test_two_bell_pairs(self):
        """|Phi+>|Phi+> tem amplitude 1/2 em 0000, 0011, 1100, 1111"""
        first = BELL.relabel(["A1", "B1"])
        second = BELL.relabel(["A2", "B2"])
        state = tensor(first, second)
        expected = np.zeros(16)
        expected[[0, 3, 12, 15]] = 0.5
        assert_allclose(state.amps, expected, atol=ATOL)
        assert state.norm() == pytest.approx(1.0, abs=ATOL)

    def test_overlapping_labels(self):
        with pytest.raises(LabelError):
            tensor(basis_state(["A"], "0"), basis_state(["A"], "1"))


@pytest.mark.unit
class TestApplyOn:

    def test_bit_flip(self):
        out = apply_on(basis_state(["A", "B"], "00"), sigma(1), ["B"])
        assert out.amplitude("01") == 1

    def test_hadamard_on_bell(self):
        """H em A de |Phi+> = (|00> + |01> + |10> - |11>) / 2"""
        out = apply_on(BELL, HADAMARD, ["A"])
        assert_allclose(out.amps, [0.5, 0.5, 0.5, -0.5], atol=ATOL)

    def test_target_order_is_respected(self):
        """Operador nos alvos [B, A] corresponde a kron trocado na ordem [A, B]"""
        state = StateVector(("A", "B"), np.array([0.1, 0.2, 0.3, np.sqrt(1 - 0.14)]))
        op = np.kron(sigma(1), np.eye(2))
        out = apply_on(state, op, ["B", "A"])
        assert_allclose(out.amps, np.kron(np.eye(2), sigma(1)) @ state.amps, atol=ATOL)

    def test_identity_is_exact(self, make_state):
        state = make_state(["A", "B", "Y"])
        out = apply_on(state, np.eye(4), ["Y", "A"])
        assert np.array_equal(out.amps, state.amps)

    def test_inverse_restores_state(self, make_state, rng):
        state = make_state(["A1", "B1", "A2", "Y1"])
        u = random_unitary(4, rng)
        there = apply_on(state, u, ["Y1", "B1"])
        back = apply_on(there, u.conj().T, ["Y1", "B1"])
        assert_allclose(back.amps, state.amps, atol=ATOL)
        assert there.norm() == pytest.approx(1.0, abs=ATOL)

    @pytest.mark.parametrize("targets", [["q2"], ["q4", "q1"], ["q3", "q5", "q0"], ["q5", "q4"]])
    def test_matches_dense_expansion(self, make_state, rng, targets):
        """apply_on == operador 2^Q completo (Q = 6) aplicado as amplitudes"""
        labels = [f"q{i}" for i in range(6)]
        state = make_state(labels)
        u = random_unitary(2 ** len(targets), rng)
        out = apply_on(state, u, targets)
        assert_allclose(out.amps, dense_expand(u, targets, labels) @ state.amps, atol=ATOL)

    def test_swap_gate(self):
        out = apply_on(basis_state(["B", "Y"], "10"), SWAP, ["B", "Y"])
        assert out.amplitude("01") == 1

    def test_errors(self):
        state = basis_state(["A", "B"], "00")
        with pytest.raises(LabelError):
            apply_on(state, sigma(1), ["Z"])
        with pytest.raises(DimensionMismatch):
            apply_on(state, separated_cnot(0), ["A"])
        with pytest.raises(LabelError):
            apply_on(state, separated_cnot(0), ["A", "A"])


@pytest.mark.unit
class TestMeasure:

    def test_bell_marginal(self):
        result = measure(BELL, "A", forced=0)
        assert result.outcome == 0
        assert result.prob == pytest.approx(0.5, abs=ATOL)
        assert_allclose(result.post.amps, [1, 0, 0, 0], atol=ATOL)
        assert result.post.labels == ("A", "B")

    def test_deterministic_outcome(self):
        result = measure(basis_state(["A", "B"], "01"), "B", forced=1)
        assert result.prob == pytest.approx(1.0)
        assert result.post.amplitude("01") == pytest.approx(1.0)

    def test_impossible_forced_outcome(self):
        with pytest.raises(ForcedOutcomeImpossible) as exc:
            measure(basis_state(["A", "B"], "01"), "B", forced=0)
        assert exc.value.label == "B"
        assert exc.value.outcome == 0

    def test_probabilities_sum_to_one(self, make_state):
        state = make_state(["A", "B", "Y"])
        p0 = measure(state, "B", forced=0).prob
        p1 = measure(state, "B", forced=1).prob
        assert p0 + p1 == pytest.approx(1.0, abs=ATOL)

    def test_post_state_is_normalized(self, make_state):
        state = make_state(["A", "B", "Y"])
        assert measure(state, "Y", forced=1).post.is_normalized()

    def test_sampling_requires_rng(self):
        with pytest.raises(ValueError):
            measure(BELL, "A")

    def test_sampling_is_reproducible(self):
        first = measure(BELL, "A", rng=np.random.default_rng(3)).outcome
        second = measure(BELL, "A", rng=np.random.default_rng(3)).outcome
        assert first == second


@pytest.mark.unit
class TestFidelityAndRegisters:

    def test_fidelity_values(self, make_state):
        state = make_state(["A", "B"])
        assert fidelity(state, state) == pytest.approx(1.0, abs=ATOL)
        assert fidelity(basis_state(["A"], "0"), basis_state(["A"], "1")) == 0
        plus = StateVector(("A",), np.array([1, 1]) / np.sqrt(2))
        assert fidelity(basis_state(["A"], "0"), plus) == pytest.approx(0.5)

    def test_fidelity_label_mismatch(self):
        with pytest.raises(LabelError):
            fidelity(basis_state(["A"], "0"), basis_state(["B"], "0"))

    def test_extract_register(self, make_state):
        y = make_state(["Y1", "Y2"])
        joint = tensor(basis_state(["A1", "B1"], "10"), y)
        register, fixed = extract_register(joint, ["Y1", "Y2"])
        assert fixed == {"A1": 1, "B1": 0}
        assert_allclose(register.amps, y.amps, atol=ATOL)

    def test_extract_register_entangled(self):
        with pytest.raises(NotProductState):
            extract_register(BELL, ["B"])
