import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Union
import numpy as np
sys.path.append(str(Path(__file__).resolve().parent.parent))
from config import settings
from quantum.errors import (
    DimensionMismatch,
    ForcedOutcomeImpossible,
    LabelError,
    NotProductState,
)

logger = logging.getLogger(__name__)

Bits = Union[str, Sequence[int]]


def parse_bits(bits: Bits) -> tuple[int, ...]:
    if isinstance(bits, str):
        if any(c not in "01" for c in bits):
            raise ValueError(f"[StateVec] Bit-string invalida: '{bits}'")
        return tuple(int(c) for c in bits)
    out = tuple(int(b) for b in bits)
    if any(b not in (0, 1) for b in out):
        raise ValueError(f"[StateVec] Sequencia de bits invalida: {list(bits)}")
    return out


def bits_to_index(bits: Sequence[int]) -> int:
    idx = 0
    for b in bits:
        idx = (idx << 1) | b
    return idx


def index_to_bits(index: int, width: int) -> tuple[int, ...]:
    return tuple((index >> (width - 1 - j)) & 1 for j in range(width))


@dataclass(frozen=True, eq=False)
class DenseOperator:
    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionMismatch(f"[StateVec] Operador nao quadrado: shape {m.shape}")
        dim = m.shape[0]
        if dim < 1 or dim & (dim - 1):
            raise DimensionMismatch(f"[StateVec] Dimensao {dim} nao eh potencia de dois")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def num_qubits(self) -> int:
        return self.dim.bit_length() - 1

    def dagger(self) -> "DenseOperator":
        return DenseOperator(self.matrix.conj().T)

    def is_unitary(self, tol: Optional[float] = None) -> bool:
        tol = settings.simulator.norm_tolerance if tol is None else tol
        product = self.matrix.conj().T @ self.matrix
        return bool(np.allclose(product, np.eye(self.dim), rtol=0, atol=tol))

    def __matmul__(self, other: "DenseOperator") -> "DenseOperator":
        return DenseOperator(self.matrix @ other.matrix)


@dataclass(frozen=True, eq=False)
class StateVector:
    labels: tuple[str, ...]
    amps: np.ndarray

    def __post_init__(self) -> None:
        labels = tuple(str(label) for label in self.labels)
        amps = np.array(self.amps, dtype=complex).reshape(-1)
        if len(set(labels)) != len(labels):
            raise LabelError(f"[StateVec] Rotulos repetidos: {list(labels)}")
        if amps.shape[0] != 2 ** len(labels):
            raise DimensionMismatch(
                f"[StateVec] {amps.shape[0]} amplitudes para {len(labels)} qubits "
                f"(esperado {2 ** len(labels)})"
            )
        if not np.all(np.isfinite(amps)):
            raise ValueError("[StateVec] Amplitude nao finita (NaN/Inf)")
        amps.flags.writeable = False
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "amps", amps)

    @property
    def num_qubits(self) -> int:
        return len(self.labels)

    @property
    def dim(self) -> int:
        return self.amps.shape[0]

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def is_normalized(self, tol: Optional[float] = None) -> bool:
        tol = settings.simulator.norm_tolerance if tol is None else tol
        return abs(float(np.sum(np.abs(self.amps) ** 2)) - 1.0) <= tol

    def index_of(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise LabelError(f"[StateVec] Rotulo desconhecido '{label}' em {list(self.labels)}")

    def amplitude(self, bits: Bits) -> complex:
        parsed = parse_bits(bits)
        if len(parsed) != self.num_qubits:
            raise DimensionMismatch(
                f"[StateVec] {len(parsed)} bits para {self.num_qubits} qubits"
            )
        return complex(self.amps[bits_to_index(parsed)])

    def with_amps(self, amps: np.ndarray) -> "StateVector":
        return StateVector(self.labels, amps)

    def relabel(self, labels: Sequence[str]) -> "StateVector":
        return StateVector(tuple(labels), self.amps)

    def tensor_view(self) -> np.ndarray:
        return self.amps.reshape([2] * self.num_qubits) if self.num_qubits else self.amps.copy()

    def __repr__(self) -> str:
        return f"<StateVector labels={''.join(self.labels)} norm={self.norm():.12f}>"


@dataclass(frozen=True)
class MeasurementResult:
    outcome: int
    prob: float
    post: StateVector


def _as_matrix(op: Union[DenseOperator, np.ndarray]) -> np.ndarray:
    return op.matrix if isinstance(op, DenseOperator) else DenseOperator(op).matrix


def _target_axes(state: StateVector, targets: Sequence[str]) -> list[int]:
    if len(set(targets)) != len(targets):
        raise LabelError(f"[StateVec] Alvos repetidos: {list(targets)}")
    return [state.index_of(label) for label in targets]


def basis_state(labels: Sequence[str], bits: Bits) -> StateVector:
    parsed = parse_bits(bits)
    if len(parsed) != len(labels):
        raise DimensionMismatch(
            f"[StateVec] {len(parsed)} bits para {len(labels)} rotulos"
        )
    amps = np.zeros(2 ** len(labels), dtype=complex)
    amps[bits_to_index(parsed)] = 1.0
    return StateVector(tuple(labels), amps)


def tensor(s1: StateVector, s2: StateVector) -> StateVector:
    overlap = set(s1.labels) & set(s2.labels)
    if overlap:
        raise LabelError(f"[StateVec] Rotulos sobrepostos no produto tensorial: {sorted(overlap)}")
    return StateVector(s1.labels + s2.labels, np.kron(s1.amps, s2.amps))


def apply_on(
    state: StateVector,
    op: Union[DenseOperator, np.ndarray],
    targets: Sequence[str],
) -> StateVector:
    """Aplica op nos qubits `targets` (na ordem dada) e identidade no resto."""
    matrix = _as_matrix(op)
    k = len(targets)
    if matrix.shape[0] != 2 ** k:
        raise DimensionMismatch(
            f"[StateVec] Operador de dimensao {matrix.shape[0]} para {k} alvos"
        )
    axes = _target_axes(state, targets)
    if k == 0:
        return state.with_amps(matrix[0, 0] * state.amps)

    psi = np.moveaxis(state.tensor_view(), axes, list(range(k)))
    shape = psi.shape
    psi = (matrix @ psi.reshape(2 ** k, -1)).reshape(shape)
    psi = np.moveaxis(psi, list(range(k)), axes)
    return state.with_amps(psi.reshape(-1))


def apply_permutation_phase(
    state: StateVector,
    columns: Sequence[int],
    phases: Sequence[complex],
    targets: Sequence[str],
) -> StateVector:
    """
    Acao esparsa de um operador com um unico elemento por linha:
    a linha m recebe phases[m] * (amplitude da coluna columns[m]).
    Indices 0-based, bit mais significativo = targets[0].
    """
    k = len(targets)
    cols = np.asarray(columns, dtype=int)
    ph = np.asarray(phases, dtype=complex)
    if cols.shape[0] != 2 ** k or ph.shape[0] != 2 ** k:
        raise DimensionMismatch(
            f"[StateVec] Permutacao de tamanho {cols.shape[0]} para {k} alvos"
        )
    axes = _target_axes(state, targets)
    psi = np.moveaxis(state.tensor_view(), axes, list(range(k)))
    shape = psi.shape
    flat = psi.reshape(2 ** k, -1)
    flat = ph[:, None] * flat[cols]
    psi = np.moveaxis(flat.reshape(shape), list(range(k)), axes)
    return state.with_amps(psi.reshape(-1))


def measure(
    state: StateVector,
    target: str,
    forced: Optional[int] = None,
    rng: Optional[np.random.Generator] = None,
    floor: Optional[float] = None,
) -> MeasurementResult:
    floor = settings.simulator.forced_outcome_floor if floor is None else floor
    axis = state.index_of(target)
    psi = np.moveaxis(state.tensor_view(), axis, 0)
    probs = [float(np.sum(np.abs(psi[b]) ** 2)) for b in (0, 1)]

    if forced is not None:
        if forced not in (0, 1):
            raise ValueError(f"[StateVec] Resultado forcado invalido: {forced}")
        outcome = forced
        if probs[outcome] < floor:
            raise ForcedOutcomeImpossible(target, outcome, probs[outcome])
    else:
        if rng is None:
            raise ValueError("[StateVec] Medicao sem resultado forcado exige um gerador (rng)")
        total = probs[0] + probs[1]
        outcome = 1 if rng.random() < probs[1] / total else 0

    prob = probs[outcome]
    collapsed = np.zeros_like(psi)
    collapsed[outcome] = psi[outcome] / np.sqrt(prob)
    collapsed = np.moveaxis(collapsed, 0, axis)

    logger.debug(f"[StateVec] Medida em '{target}': {outcome} (p={prob:.6f})")
    return MeasurementResult(outcome=outcome, prob=prob, post=state.with_amps(collapsed.reshape(-1)))


def fidelity(s1: StateVector, s2: StateVector) -> float:
    if s1.labels != s2.labels:
        raise LabelError(
            f"[StateVec] Estruturas diferentes: {list(s1.labels)} vs {list(s2.labels)}"
        )
    return float(abs(np.vdot(s1.amps, s2.amps)) ** 2)


def extract_register(
    state: StateVector,
    keep: Sequence[str],
    tol: Optional[float] = None,
) -> tuple[StateVector, dict[str, int]]:
    """
    Separa o registrador `keep` quando o complemento esta num estado da base
    computacional. Devolve o registrador (sem renormalizar) e os bits do resto.
    """
    tol = settings.simulator.norm_tolerance if tol is None else tol
    keep_axes = _target_axes(state, keep)
    rest = [label for label in state.labels if label not in keep]
    rest_axes = [state.index_of(label) for label in rest]

    psi = np.transpose(state.tensor_view(), rest_axes + keep_axes)
    flat = psi.reshape(2 ** len(rest), 2 ** len(keep))
    weights = np.sum(np.abs(flat) ** 2, axis=1)
    row = int(np.argmax(weights))
    leftover = float(np.sum(weights) - weights[row])
    if leftover > tol:
        raise NotProductState(
            f"[StateVec] Complemento {rest} nao esta num estado da base (peso residual {leftover:.3e})"
        )

    fixed = dict(zip(rest, index_to_bits(row, len(rest))))
    return StateVector(tuple(keep), flat[row]), fixed


def random_state(labels: Sequence[str], rng: np.random.Generator) -> StateVector:
    dim = 2 ** len(labels)
    raw = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return StateVector(tuple(labels), raw / np.linalg.norm(raw))


def dense_expand(
    op: Union[DenseOperator, np.ndarray],
    targets: Sequence[str],
    labels: Sequence[str],
) -> np.ndarray:
    """Operador completo 2^Q x 2^Q de `op` sobre `targets`, identidade no resto."""
    matrix = _as_matrix(op)
    labels = list(labels)
    rest = [label for label in labels if label not in targets]
    order = list(targets) + rest
    q = len(labels)
    full = np.kron(matrix, np.eye(2 ** len(rest), dtype=complex))

    # reorder[i, j] = 1 quando o indice j (ordem `labels`) vira o indice i (ordem `order`)
    reorder = np.zeros((2 ** q, 2 ** q), dtype=complex)
    positions = [labels.index(label) for label in order]
    for j in range(2 ** q):
        bits = index_to_bits(j, q)
        reorder[bits_to_index([bits[p] for p in positions]), j] = 1
    return reorder.T @ full @ reorder
