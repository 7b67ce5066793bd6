import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence
import numpy as np
sys.path.append(str(Path(__file__).resolve().parent.parent))
from config import settings
from quantum.errors import DimensionMismatch, QubitCapExceeded
from quantum.gates import HADAMARD, recovery_phase, separated_cnot, sigma
from quantum.restricted import RestrictedOp, build_R, build_T, rank_to_perm
from quantum.statevec import (
    Bits,
    StateVector,
    apply_on,
    extract_register,
    measure,
    parse_bits,
    tensor,
)
from protocol.resources import decode_x, encode_x

logger = logging.getLogger(__name__)

BOB_TO_ALICE = "B2A"
ALICE_TO_BOB = "A2B"

_BELL_PAIR = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)


def a_labels(n: int) -> tuple[str, ...]:
    return tuple(f"A{m}" for m in range(1, n + 1))


def b_labels(n: int) -> tuple[str, ...]:
    return tuple(f"B{m}" for m in range(1, n + 1))


def y_labels(n: int) -> tuple[str, ...]:
    return tuple(f"Y{m}" for m in range(1, n + 1))


def joint_labels(n: int) -> tuple[str, ...]:
    """A1 B1 A2 B2 ... AN BN Y1 ... YN."""
    pairs = tuple(label for m in range(1, n + 1) for label in (f"A{m}", f"B{m}"))
    return pairs + y_labels(n)


def bits_str(bits: Sequence[int]) -> str:
    return "".join(str(b) for b in bits)


def _optional_bits(bits: Optional[Bits], n: int, name: str) -> Optional[tuple[int, ...]]:
    if bits is None:
        return None
    parsed = parse_bits(bits)
    if len(parsed) != n:
        raise DimensionMismatch(f"[Protocolo] {name} com {len(parsed)} bits para N={n}")
    return parsed


@dataclass(frozen=True, eq=False)
class ProtocolConfig:
    n: int
    x: int
    t: np.ndarray
    forced_b: Optional[tuple[int, ...]] = None
    forced_a: Optional[tuple[int, ...]] = None
    seed: int = field(default_factory=lambda: settings.harness.default_seed)
    # b combinado previamente (padrao 0...0): Bob nao envia mensagem
    bob_fixed_b: bool = False

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"[Protocolo] N deve ser >= 1, recebido {self.n}")
        rank_to_perm(self.n, self.x)
        t = np.array(self.t, dtype=complex).reshape(-1)
        if t.shape[0] != 2 ** self.n:
            raise DimensionMismatch(f"[Protocolo] {t.shape[0]} fases para N={self.n}")
        t.flags.writeable = False
        object.__setattr__(self, "t", t)
        forced_b = _optional_bits(self.forced_b, self.n, "forced_b")
        if self.bob_fixed_b and forced_b is None:
            forced_b = (0,) * self.n
        object.__setattr__(self, "forced_b", forced_b)
        object.__setattr__(self, "forced_a", _optional_bits(self.forced_a, self.n, "forced_a"))


@dataclass(frozen=True)
class Message:
    direction: str
    bits: str
    kind: str


@dataclass
class ProtocolTranscript:
    n: int
    x: int
    bob_fixed_b: bool = False
    b_bits: tuple[int, ...] = ()
    a_bits: tuple[int, ...] = ()
    x_message: str = ""
    messages: list[Message] = field(default_factory=list)
    branch_prob: float = 1.0
    step_log: list[str] = field(default_factory=list)

    def send(self, direction: str, bits: str, kind: str) -> None:
        self.messages.append(Message(direction, bits, kind))
        self.step_log.append(f"{direction}: {kind}={bits}")

    def log(self, line: str) -> None:
        self.step_log.append(line)
        logger.debug(f"[Protocolo] {line}")

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "x": str(self.x),
            "b": list(self.b_bits),
            "a": list(self.a_bits),
            "messages": [{"dir": m.direction, "bits": m.bits} for m in self.messages],
            "branch_prob": self.branch_prob,
        }


def init_state(n: int, xi: StateVector, tol: Optional[float] = None) -> StateVector:
    """(|Phi+>_{A1B1} ... |Phi+>_{ANBN}) (x) |xi>_{Y1..YN}."""
    if xi.num_qubits != n:
        raise DimensionMismatch(f"[Protocolo] Estado alvo com {xi.num_qubits} qubits para N={n}")
    if not xi.is_normalized(tol):
        raise ValueError(f"[Protocolo] Estado alvo nao normalizado (norma {xi.norm():.15f})")

    state = StateVector(("A1", "B1"), _BELL_PAIR)
    for m in range(2, n + 1):
        state = tensor(state, StateVector((f"A{m}", f"B{m}"), _BELL_PAIR))
    return tensor(state, xi.relabel(y_labels(n)))


def _measure_all(
    state: StateVector,
    labels: Sequence[str],
    forced: Optional[Sequence[int]],
    rng: Optional[np.random.Generator],
) -> tuple[StateVector, tuple[int, ...], float]:
    outcomes = []
    prob = 1.0
    for m, label in enumerate(labels):
        result = measure(state, label, forced=None if forced is None else forced[m], rng=rng)
        state = result.post
        outcomes.append(result.outcome)
        prob *= result.prob
    return state, tuple(outcomes), prob


def bob_prepare(
    state: StateVector,
    n: int,
    forced_b: Optional[Sequence[int]] = None,
    rng: Optional[np.random.Generator] = None,
) -> tuple[StateVector, tuple[int, ...], float]:
    """CNOT(controle Y_m, alvo B_m) e medida de B_m, m = 1..N."""
    cnot = separated_cnot(0)
    for b_label, y_label in zip(b_labels(n), y_labels(n)):
        state = apply_on(state, cnot, [b_label, y_label])
    return _measure_all(state, b_labels(n), forced_b, rng)


def alice_send(
    state: StateVector,
    n: int,
    b_bits: Sequence[int],
    op: RestrictedOp,
    forced_a: Optional[Sequence[int]] = None,
    rng: Optional[np.random.Generator] = None,
) -> tuple[StateVector, tuple[int, ...], float]:
    """sigma_b em cada A_m, T no bloco A, Hadamards e medida de A_m."""
    if op.n != n:
        raise DimensionMismatch(f"[Protocolo] Operacao de N={op.n} para protocolo de N={n}")
    alice = a_labels(n)
    for label, b in zip(alice, b_bits):
        if b:
            state = apply_on(state, sigma(1), [label])
    state = op.apply(state, alice)
    for label in alice:
        state = apply_on(state, HADAMARD, [label])
    return _measure_all(state, alice, forced_a, rng)


def bob_recover(state: StateVector, n: int, a_bits: Sequence[int], x: int) -> StateVector:
    """R_N(x) no bloco Y e depois r(a_m) em cada Y_m."""
    bob = y_labels(n)
    state = build_R(n, x).apply(state, bob)
    for label, a in zip(bob, a_bits):
        if a:
            state = apply_on(state, recovery_phase(a), [label])
    return state


class BobRole:
    """Bob so conhece x e os bits recebidos; nunca ve t."""

    def __init__(
        self,
        n: int,
        rng: np.random.Generator,
        forced_b: Optional[Sequence[int]] = None,
    ) -> None:
        self.n = n
        self._rng = rng
        self._forced_b = forced_b

    def prepare(self, state: StateVector) -> tuple[StateVector, tuple[int, ...], float]:
        return bob_prepare(state, self.n, self._forced_b, self._rng)

    def recover(self, state: StateVector, a_message: str, x_message: str) -> StateVector:
        a_bits = parse_bits(a_message)
        x = decode_x(x_message)
        return bob_recover(state, self.n, a_bits, x)


class AliceRole:

    def __init__(
        self,
        n: int,
        x: int,
        t: np.ndarray,
        rng: np.random.Generator,
        forced_a: Optional[Sequence[int]] = None,
    ) -> None:
        self.n = n
        self._x = x
        self._op = build_T(n, x, t)
        self._rng = rng
        self._forced_a = forced_a

    @property
    def x_message(self) -> str:
        return encode_x(self.n, self._x)

    def send(self, state: StateVector, b_message: str) -> tuple[StateVector, tuple[int, ...], float]:
        return alice_send(state, self.n, parse_bits(b_message), self._op, self._forced_a, self._rng)


def run_protocol(
    cfg: ProtocolConfig,
    xi: StateVector,
    rng: Optional[np.random.Generator] = None,
    max_qubits: Optional[int] = None,
) -> tuple[StateVector, ProtocolTranscript]:
    max_qubits = settings.limits.max_qubits if max_qubits is None else max_qubits
    if cfg.n > max_qubits:
        raise QubitCapExceeded(f"[Protocolo] N={cfg.n} acima do limite {max_qubits} (RIO_MAX_QUBITS)")
    rng = np.random.default_rng(cfg.seed) if rng is None else rng

    alice = AliceRole(cfg.n, cfg.x, cfg.t, rng, cfg.forced_a)
    bob = BobRole(cfg.n, rng, cfg.forced_b)
    transcript = ProtocolTranscript(n=cfg.n, x=cfg.x, bob_fixed_b=cfg.bob_fixed_b)

    state = init_state(cfg.n, xi)
    transcript.log(f"Estado inicial: {cfg.n} pares de Bell + xi em {''.join(y_labels(cfg.n))}")

    state, b_bits, p_b = bob.prepare(state)
    transcript.b_bits = b_bits
    transcript.branch_prob *= p_b
    transcript.log(f"Bob: CNOT(Y->B) e medida de B = {bits_str(b_bits)} (p={p_b:.6f})")
    if not cfg.bob_fixed_b:
        transcript.send(BOB_TO_ALICE, bits_str(b_bits), "b")

    state, a_bits, p_a = alice.send(state, bits_str(b_bits))
    transcript.a_bits = a_bits
    transcript.branch_prob *= p_a
    transcript.log(f"Alice: sigma_b, T, H e medida de A = {bits_str(a_bits)} (p={p_a:.6f})")

    transcript.x_message = alice.x_message
    transcript.send(ALICE_TO_BOB, bits_str(a_bits), "a")
    transcript.send(ALICE_TO_BOB, alice.x_message, "x")

    state = bob.recover(state, bits_str(a_bits), alice.x_message)
    transcript.log(f"Bob: R_N(x) e r(a) em {''.join(y_labels(cfg.n))}")

    logger.info(
        f"[Protocolo] N={cfg.n} x={cfg.x} b={bits_str(b_bits)} a={bits_str(a_bits)} "
        f"p={transcript.branch_prob:.3e}"
    )
    return state, transcript


def result_register(final: StateVector, n: int) -> tuple[StateVector, dict[str, int]]:
    """Registrador Y e bits de A/B (que devem estar em |a_m b_m>)."""
    return extract_register(final, y_labels(n))
