import pytest
import sys
from pathlib import Path
import numpy as np

sys.path.append(str(Path(__file__).resolve().parent.parent))

from quantum.statevec import basis_state
from protocol.resources import (
    ResourceLedger,
    XEncoding,
    audit_transcript,
    bqst_baseline,
    decode_x,
    encode_x,
    ledger,
    resource_report,
    x_message_bits,
)
from protocol.rio import ProtocolConfig, init_state, run_protocol, y_labels


@pytest.mark.unit
class TestXMessage:

    @pytest.mark.parametrize("n,formula,tight", [(1, 2, 1), (2, 5, 5), (3, 16, 16)])
    def test_widths(self, n, formula, tight):
        assert x_message_bits(n, XEncoding.FORMULA) == formula
        assert x_message_bits(n, XEncoding.TIGHT) == tight

    def test_encoding_accepts_strings(self):
        assert x_message_bits(2, "formula") == 5

    def test_encode_bounds(self):
        with pytest.raises(ValueError):
            encode_x(2, 0)
        with pytest.raises(ValueError):
            encode_x(2, 25)

    def test_decode(self):
        assert decode_x("10111") == 24
        assert decode_x(encode_x(1, 1)) == 1

    def test_bad_n(self):
        with pytest.raises(ValueError):
            x_message_bits(0)


@pytest.mark.unit
class TestLedger:

    def test_two_qubits_formula(self):
        """N=2: 2 e-bits e 9 c-bits (2 + 2 + 5)"""
        result = ledger(2, XEncoding.FORMULA)
        assert result.ebits == 2
        assert (result.cbits_b_to_a, result.cbits_a_to_b) == (2, 7)
        assert result.total_cbits == 9

    def test_one_qubit_tight(self):
        result = ledger(1, XEncoding.TIGHT)
        assert result.ebits == 1
        assert result.total_cbits == 3

    def test_one_qubit_formula(self):
        assert ledger(1, XEncoding.FORMULA).total_cbits == 4

    def test_three_qubits_formula(self):
        result = ledger(3, XEncoding.FORMULA)
        assert result.ebits == 3
        assert result.total_cbits == 22

    def test_bob_fixed_b(self):
        result = ledger(2, XEncoding.FORMULA, bob_fixed_b=True)
        assert result.cbits_b_to_a == 0
        assert result.total_cbits == 7

    def test_negative_counts_rejected(self):
        with pytest.raises(ValueError):
            ResourceLedger(1, -1, 0, 0, None, False)

    @pytest.mark.parametrize("b_to_a,fixed", [(0, False), (1, True)])
    def test_fixed_b_iff_no_b_to_a_bits(self, b_to_a, fixed):
        """Sem mensagem B2A exatamente quando Bob fixa b"""
        with pytest.raises(ValueError):
            ResourceLedger(1, 1, b_to_a, 3, XEncoding.TIGHT, fixed)

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_ebits_match_bell_pairs(self, n):
        """Um e-bit por par de Bell que init_state constroi"""
        state = init_state(n, _y(n))
        pairs = sum(label.startswith("A") for label in state.labels)
        assert ledger(n).ebits == pairs == n
        assert ledger(n).ebits / bqst_baseline(n).ebits == pytest.approx(0.5)


def _y(n):
    return basis_state(y_labels(n), "0" * n)


@pytest.mark.unit
class TestBaseline:

    @pytest.mark.parametrize("n,ebits,cbits", [(1, 2, 4), (2, 4, 8)])
    def test_teleportation_counts(self, n, ebits, cbits):
        baseline = bqst_baseline(n)
        assert baseline.ebits == ebits
        assert baseline.total_cbits == cbits

    def test_report(self):
        report = resource_report(2)
        assert report["cbits"]["total"] == 9
        assert report["x_bits"] == 5
        assert report["encoding"] == "formula"
        assert report["bqst"]["ebits"] == 4
        assert report["ebit_ratio"] == pytest.approx(0.5)


@pytest.mark.unit
class TestAudit:

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_transcript_matches_tight_ledger(self, n):
        cfg = ProtocolConfig(n=n, x=1, t=np.ones(2 ** n), seed=3)
        _, transcript = run_protocol(cfg, _y(n))
        audit = audit_transcript(transcript)
        assert audit.ok
        assert audit.observed_b_to_a == n

    def test_fixed_b_transcript(self):
        cfg = ProtocolConfig(n=2, x=3, t=np.ones(4), bob_fixed_b=True)
        _, transcript = run_protocol(cfg, _y(2))
        audit = audit_transcript(transcript)
        assert audit.ok
        assert audit.observed_b_to_a == 0
        assert audit.observed_a_to_b == 2 + 5

    def test_formula_encoding_flags_one_qubit(self):
        """N=1: a mensagem de x tem 1 bit, a formula geral conta 2"""
        cfg = ProtocolConfig(n=1, x=2, t=np.ones(2), seed=3)
        _, transcript = run_protocol(cfg, _y(1))
        assert not audit_transcript(transcript, XEncoding.FORMULA).ok
