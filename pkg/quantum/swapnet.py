import logging
import re
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence, Union
import numpy as np
sys.path.append(str(Path(__file__).resolve().parent.parent))
from quantum.errors import DimensionMismatch, LabelError, RoutingError
from quantum.statevec import StateVector, bits_to_index, index_to_bits

logger = logging.getLogger(__name__)

_LABEL_RE = re.compile(r"[A-Za-z]\d*")

Labels = Union[str, Sequence[str]]


@dataclass(frozen=True)
class QubitRouting:
    """
    Permutacao de posicoes de qubits: dest[i] e a nova posicao (0-based)
    do qubit que estava na posicao i.
    """
    n: int
    dest: tuple[int, ...]

    def __post_init__(self) -> None:
        dest = tuple(int(d) for d in self.dest)
        if len(dest) != self.n or sorted(dest) != list(range(self.n)):
            raise RoutingError(f"[SwapNet] dest nao e uma bijecao em 0..{self.n - 1}: {list(dest)}")
        object.__setattr__(self, "dest", dest)

    @classmethod
    def identity(cls, n: int) -> "QubitRouting":
        return cls(n, tuple(range(n)))

    @property
    def is_identity(self) -> bool:
        return self.dest == tuple(range(self.n))

    def positions(self) -> tuple[int, ...]:
        """dest em posicoes 1-based."""
        return tuple(d + 1 for d in self.dest)

    def inverse(self) -> "QubitRouting":
        inv = [0] * self.n
        for i, d in enumerate(self.dest):
            inv[d] = i
        return QubitRouting(self.n, tuple(inv))

    def __matmul__(self, other: "QubitRouting") -> "QubitRouting":
        # (self @ other) aplica `other` primeiro
        if self.n != other.n:
            raise RoutingError(f"[SwapNet] Composicao com tamanhos diferentes: {self.n} e {other.n}")
        return QubitRouting(self.n, tuple(self.dest[d] for d in other.dest))

    def permute_labels(self, labels: Sequence[str]) -> tuple[str, ...]:
        if len(labels) != self.n:
            raise DimensionMismatch(f"[SwapNet] {len(labels)} rotulos para roteamento de {self.n} qubits")
        out = [""] * self.n
        for i, label in enumerate(labels):
            out[self.dest[i]] = label
        return tuple(out)

    def to_dense(self) -> np.ndarray:
        dim = 2 ** self.n
        matrix = np.zeros((dim, dim), dtype=complex)
        for j in range(dim):
            bits = index_to_bits(j, self.n)
            moved = [0] * self.n
            for i, b in enumerate(bits):
                moved[self.dest[i]] = b
            matrix[bits_to_index(moved), j] = 1
        return matrix


def _check_position(n: int, pos: int, upper: int, name: str) -> None:
    if not 1 <= pos <= upper:
        raise RoutingError(f"[SwapNet] Posicao {name}={pos} fora de 1..{upper} (n={n})")


def s_adjacent(n: int, i: int) -> QubitRouting:
    _check_position(n, i, n - 1, "i")
    dest = list(range(n))
    dest[i - 1], dest[i] = i, i - 1
    return QubitRouting(n, tuple(dest))


def swap_product(n: int, swaps: Sequence[int]) -> QubitRouting:
    """Compoe trocas adjacentes S(i, i+1), aplicadas na ordem da sequencia."""
    routing = QubitRouting.identity(n)
    for i in swaps:
        routing = s_adjacent(n, i) @ routing
    return routing


def f_forward(n: int, i: int, j: int) -> QubitRouting:
    """Leva o qubit da posicao j para i; i..j-1 recuam uma posicao."""
    _check_position(n, j, n, "j")
    if not 1 <= i < j:
        raise RoutingError(f"[SwapNet] F_N exige 1 <= i < j, recebido i={i}, j={j}")
    dest = list(range(n))
    dest[j - 1] = i - 1
    for pos in range(i - 1, j - 1):
        dest[pos] = pos + 1
    return QubitRouting(n, tuple(dest))


def p_backward(n: int, j: int, k: int) -> QubitRouting:
    """Leva o qubit da posicao j para k; j+1..k avancam uma posicao."""
    _check_position(n, k, n, "k")
    if not 1 <= j < k:
        raise RoutingError(f"[SwapNet] P_N exige 1 <= j < k, recebido j={j}, k={k}")
    dest = list(range(n))
    dest[j - 1] = k - 1
    for pos in range(j, k):
        dest[pos] = pos - 1
    return QubitRouting(n, tuple(dest))


def embed(routing: QubitRouting, n_total: int, offset: int = 0) -> QubitRouting:
    """Roteamento atuando nas posicoes offset..offset+r.n-1 e identidade no resto."""
    if offset < 0 or offset + routing.n > n_total:
        raise RoutingError(
            f"[SwapNet] Bloco de {routing.n} qubits nao cabe em {n_total} com offset {offset}"
        )
    dest = list(range(n_total))
    for i, d in enumerate(routing.dest):
        dest[offset + i] = offset + d
    return QubitRouting(n_total, tuple(dest))


def lambda_route(n_pairs: int) -> QubitRouting:
    """(A1 B1)(A2 B2)...(AN BN) -> (A1..AN)(B1..BN)."""
    if n_pairs < 2:
        raise RoutingError(f"[SwapNet] Lambda(2,N) exige N >= 2, recebido {n_pairs}")
    n = 2 * n_pairs
    routing = QubitRouting.identity(n)
    for i in range(1, n_pairs):
        routing = p_backward(n, 2 * (n_pairs - i), n - i) @ routing
    logger.debug(f"[SwapNet] Lambda(2,{n_pairs}) = {routing.positions()}")
    return routing


def omega_route(n_pairs: int) -> QubitRouting:
    """(A1..AN)(B1..BN) -> (B1..BN)(A1..AN)."""
    if n_pairs < 1:
        raise RoutingError(f"[SwapNet] Omega(2,N) exige N >= 1, recebido {n_pairs}")
    n = 2 * n_pairs
    return QubitRouting(n, tuple(i + n_pairs if i < n_pairs else i - n_pairs for i in range(n)))


def upsilon_route(n_pairs: int) -> QubitRouting:
    """(A1 B1)...(AN BN)(Y1..YN) -> (A1 B1 Y1)...(AN BN YN)."""
    if n_pairs < 1:
        raise RoutingError(f"[SwapNet] Upsilon(3,N) exige N >= 1, recebido {n_pairs}")
    n = 3 * n_pairs
    routing = QubitRouting.identity(n)
    for i in range(1, n_pairs):
        routing = f_forward(n, 3 * i, 2 * n_pairs + i) @ routing
    return routing


def gamma_route(n_pairs: int) -> QubitRouting:
    """(A1 B1)...(AN BN)(Y1..YN) -> (A1..AN)(Y1..YN)(B1..BN)."""
    if n_pairs < 1:
        raise RoutingError(f"[SwapNet] Gamma(3,N) exige N >= 1, recebido {n_pairs}")
    n = 3 * n_pairs
    block_swap = embed(omega_route(n_pairs), n, n_pairs)
    if n_pairs == 1:
        return block_swap
    block_sort = embed(lambda_route(n_pairs), n, 0)
    return block_swap @ block_sort


def parse_labels(labels: Labels) -> tuple[str, ...]:
    """'A1B1A2B2' -> ('A1', 'B1', 'A2', 'B2'); sequencias passam direto."""
    if not isinstance(labels, str):
        return tuple(str(label) for label in labels)
    tokens = _LABEL_RE.findall(labels)
    if "".join(tokens) != labels:
        raise LabelError(f"[SwapNet] Sequencia de rotulos invalida: '{labels}'")
    return tuple(tokens)


def w_route(source: Labels, target: Labels) -> QubitRouting:
    src = parse_labels(source)
    dst = parse_labels(target)
    if len(set(src)) != len(src) or sorted(src) != sorted(dst):
        raise RoutingError(f"[SwapNet] '{''.join(dst)}' nao e uma permutacao de '{''.join(src)}'")
    return QubitRouting(len(src), tuple(dst.index(label) for label in src))


def apply_routing(state: StateVector, routing: QubitRouting) -> StateVector:
    if routing.n != state.num_qubits:
        raise DimensionMismatch(
            f"[SwapNet] Roteamento de {routing.n} qubits para estado de {state.num_qubits}"
        )
    if routing.n == 0 or routing.is_identity:
        return state
    # eixo dest[i] da saida recebe o eixo i da entrada
    psi = np.transpose(state.tensor_view(), routing.inverse().dest)
    return StateVector(routing.permute_labels(state.labels), psi.reshape(-1))
