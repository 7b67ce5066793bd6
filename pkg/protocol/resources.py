import logging
import sys
from dataclasses import dataclass
from enum import Enum
from math import factorial
from pathlib import Path
from typing import Optional, Protocol, Sequence
sys.path.append(str(Path(__file__).resolve().parent.parent))

logger = logging.getLogger(__name__)


class XEncoding(str, Enum):
    # floor(log2((2^N)!)) + 1
    FORMULA = "formula"
    # ceil(log2((2^N)!))
    TIGHT = "tight"


def x_message_bits(n: int, encoding: XEncoding = XEncoding.TIGHT) -> int:
    if n < 1:
        raise ValueError(f"[Recursos] N deve ser >= 1, recebido {n}")
    count = factorial(2 ** n)
    if XEncoding(encoding) is XEncoding.FORMULA:
        return count.bit_length()
    return (count - 1).bit_length()


def encode_x(n: int, x: int) -> str:
    """Mensagem de x: binario de x - 1 na largura justa."""
    width = x_message_bits(n, XEncoding.TIGHT)
    if not 1 <= x <= factorial(2 ** n):
        raise ValueError(f"[Recursos] x={x} fora do intervalo para N={n}")
    return format(x - 1, f"0{width}b")


def decode_x(bits: str) -> int:
    return int(bits, 2) + 1


@dataclass(frozen=True)
class ResourceLedger:
    n: int
    ebits: int
    cbits_b_to_a: int
    cbits_a_to_b: int
    x_encoding: Optional[XEncoding]
    bob_fixed_b: bool

    def __post_init__(self) -> None:
        if min(self.ebits, self.cbits_b_to_a, self.cbits_a_to_b) < 0:
            raise ValueError(f"[Recursos] Contagem negativa em {self}")
        if (self.cbits_b_to_a == 0) != self.bob_fixed_b:
            raise ValueError(
                f"[Recursos] cbits_b_to_a={self.cbits_b_to_a} incompativel com bob_fixed_b={self.bob_fixed_b}"
            )

    @property
    def total_cbits(self) -> int:
        return self.cbits_b_to_a + self.cbits_a_to_b

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "ebits": self.ebits,
            "cbits": {
                "b_to_a": self.cbits_b_to_a,
                "a_to_b": self.cbits_a_to_b,
                "total": self.total_cbits,
            },
        }


def ledger(
    n: int,
    encoding: XEncoding = XEncoding.FORMULA,
    bob_fixed_b: bool = False,
) -> ResourceLedger:
    encoding = XEncoding(encoding)
    result = ResourceLedger(
        n=n,
        ebits=n,
        cbits_b_to_a=0 if bob_fixed_b else n,
        cbits_a_to_b=n + x_message_bits(n, encoding),
        x_encoding=encoding,
        bob_fixed_b=bob_fixed_b,
    )
    logger.debug(f"[Recursos] N={n} ({encoding.value}): {result.ebits} e-bits, {result.total_cbits} c-bits")
    return result


def bqst_baseline(n: int) -> ResourceLedger:
    """Teletransporte de ida e volta: 1 e-bit e 2 c-bits por qubit em cada sentido."""
    if n < 1:
        raise ValueError(f"[Recursos] N deve ser >= 1, recebido {n}")
    return ResourceLedger(
        n=n,
        ebits=2 * n,
        cbits_b_to_a=2 * n,
        cbits_a_to_b=2 * n,
        x_encoding=None,
        bob_fixed_b=False,
    )


def resource_report(
    n: int,
    encoding: XEncoding = XEncoding.FORMULA,
    bob_fixed_b: bool = False,
) -> dict:
    own = ledger(n, encoding, bob_fixed_b)
    baseline = bqst_baseline(n)
    report = own.to_dict()
    report["encoding"] = own.x_encoding.value
    report["bob_fixed_b"] = bob_fixed_b
    report["x_bits"] = x_message_bits(n, encoding)
    report["bqst"] = baseline.to_dict()
    report["ebit_ratio"] = own.ebits / baseline.ebits
    return report


class _MessageLike(Protocol):
    direction: str
    bits: str


class _TranscriptLike(Protocol):
    n: int
    bob_fixed_b: bool
    messages: Sequence[_MessageLike]


@dataclass(frozen=True)
class TranscriptAudit:
    expected: ResourceLedger
    observed_b_to_a: int
    observed_a_to_b: int

    @property
    def ok(self) -> bool:
        return (
            self.observed_b_to_a == self.expected.cbits_b_to_a
            and self.observed_a_to_b == self.expected.cbits_a_to_b
        )


def audit_transcript(
    transcript: _TranscriptLike,
    encoding: XEncoding = XEncoding.TIGHT,
) -> TranscriptAudit:
    encoding = XEncoding(encoding)
    expected = ledger(transcript.n, encoding, transcript.bob_fixed_b)
    b_to_a = sum(len(m.bits) for m in transcript.messages if m.direction == "B2A")
    a_to_b = sum(len(m.bits) for m in transcript.messages if m.direction == "A2B")
    audit = TranscriptAudit(expected=expected, observed_b_to_a=b_to_a, observed_a_to_b=a_to_b)
    if not audit.ok:
        logger.warning(
            f"[Recursos] Transcricao diverge do ledger ({encoding.value}): "
            f"B2A {b_to_a}/{expected.cbits_b_to_a}, A2B {a_to_b}/{expected.cbits_a_to_b}"
        )
    return audit
