import logging
import sys
from dataclasses import dataclass, field
from itertools import islice, permutations
from math import factorial
from pathlib import Path
from typing import Iterator, Optional, Sequence, Union
import numpy as np
sys.path.append(str(Path(__file__).resolve().parent.parent))
from config import settings
from quantum.errors import DimensionMismatch, NotPermutation, NotRestricted, RankOutOfRange
from quantum.statevec import DenseOperator, StateVector, apply_permutation_phase

logger = logging.getLogger(__name__)

Phases = Union[Sequence[complex], np.ndarray]


@dataclass(frozen=True)
class PermutationN:
    """p(x) = (p_1, ..., p_{2^N}), valores 1-based."""
    n: int
    p: tuple[int, ...]

    def __post_init__(self) -> None:
        p = tuple(int(v) for v in self.p)
        size = 2 ** self.n
        if len(p) != size or sorted(p) != list(range(1, size + 1)):
            raise NotPermutation(f"[Restricted] {list(p)} nao e uma permutacao de 1..{size}")
        object.__setattr__(self, "p", p)

    @classmethod
    def from_sequence(cls, p: Sequence[int]) -> "PermutationN":
        size = len(p)
        if size < 2 or size & (size - 1):
            raise NotPermutation(f"[Restricted] Tamanho {size} nao e 2^N com N >= 1")
        return cls(size.bit_length() - 1, tuple(p))

    @property
    def size(self) -> int:
        return len(self.p)

    def inverse(self) -> "PermutationN":
        inv = [0] * self.size
        for m, pm in enumerate(self.p, start=1):
            inv[pm - 1] = m
        return PermutationN(self.n, tuple(inv))

    def __str__(self) -> str:
        return ",".join(str(v) for v in self.p)


def restricted_set_count(n: int) -> int:
    return factorial(2 ** n)


def _check_rank(n: int, x: int) -> None:
    if n < 1:
        raise RankOutOfRange(f"[Restricted] N deve ser >= 1, recebido {n}")
    total = restricted_set_count(n)
    if not 1 <= x <= total:
        raise RankOutOfRange(f"[Restricted] x={x} fora de 1..{total} para N={n}")


def rank_to_perm(n: int, x: int) -> PermutationN:
    """x-esima permutacao em ordem lexicografica (x 1-based)."""
    _check_rank(n, x)
    items = list(range(1, 2 ** n + 1))
    k = x - 1
    out = []
    for remaining in range(len(items), 0, -1):
        block = factorial(remaining - 1)
        idx, k = divmod(k, block)
        out.append(items.pop(idx))
    return PermutationN(n, tuple(out))


def perm_to_rank(perm: Union[PermutationN, Sequence[int]]) -> int:
    if not isinstance(perm, PermutationN):
        perm = PermutationN.from_sequence(perm)
    p = perm.p
    size = len(p)
    rank = 0
    for i, value in enumerate(p):
        smaller_after = sum(1 for later in p[i + 1:] if later < value)
        rank += smaller_after * factorial(size - 1 - i)
    return rank + 1


def enumerate_permutations(n: int, limit: Optional[int] = None) -> Iterator[PermutationN]:
    size = 2 ** n
    if limit is None and n >= 4:
        logger.warning(f"[Restricted] Enumerando todos os {restricted_set_count(n)} conjuntos de N={n}")
    for p in islice(permutations(range(1, size + 1)), limit):
        yield PermutationN(n, p)


@dataclass(frozen=True, eq=False)
class RestrictedOp:
    """
    T^r_N(x, t) = sum_m t_m |m><p_m(x)|.

    A linha m tem um unico elemento nao nulo t_m, na coluna p_m(x).
    """
    n: int
    rank: int
    t: np.ndarray
    perm: PermutationN = field(init=False)

    def __post_init__(self) -> None:
        t = np.array(self.t, dtype=complex).reshape(-1)
        if t.shape[0] != 2 ** self.n:
            raise DimensionMismatch(f"[Restricted] {t.shape[0]} fases para N={self.n} (esperado {2 ** self.n})")
        if not np.all(np.isfinite(t)):
            raise ValueError("[Restricted] Fase nao finita")
        t.flags.writeable = False
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "perm", rank_to_perm(self.n, self.rank))

    @property
    def dim(self) -> int:
        return 2 ** self.n

    @property
    def columns(self) -> np.ndarray:
        """Coluna (0-based) do elemento nao nulo de cada linha."""
        return np.asarray(self.perm.p, dtype=int) - 1

    def apply_vector(self, vec: np.ndarray) -> np.ndarray:
        vec = np.asarray(vec, dtype=complex)
        if vec.shape != (self.dim,):
            raise DimensionMismatch(f"[Restricted] Vetor de shape {vec.shape} para operador {self.dim}x{self.dim}")
        return self.t * vec[self.columns]

    def apply(self, state: StateVector, targets: Sequence[str]) -> StateVector:
        return apply_permutation_phase(state, self.columns, self.t, targets)

    def to_dense(self) -> np.ndarray:
        matrix = np.zeros((self.dim, self.dim), dtype=complex)
        matrix[np.arange(self.dim), self.columns] = self.t
        return matrix

    def to_operator(self) -> DenseOperator:
        return DenseOperator(self.to_dense())

    def dagger_products(self) -> tuple[np.ndarray, np.ndarray]:
        """Diagonais de T T^dagger e T^dagger T."""
        weights = np.abs(self.t) ** 2
        t_tdag = weights.copy()
        tdag_t = np.zeros(self.dim)
        tdag_t[self.columns] = weights
        return t_tdag, tdag_t

    def is_unitary(self, tol: Optional[float] = None) -> bool:
        tol = settings.simulator.norm_tolerance if tol is None else tol
        return bool(np.all(np.abs(np.abs(self.t) - 1.0) <= tol))

    def __repr__(self) -> str:
        return f"<RestrictedOp N={self.n} x={self.rank} p=({self.perm})>"


def build_T(n: int, x: int, t: Phases) -> RestrictedOp:
    op = RestrictedOp(n, x, t)
    if not op.is_unitary():
        logger.warning(f"[Restricted] T(N={n}, x={x}) nao e unitario: |t| = {np.round(np.abs(op.t), 6).tolist()}")
    return op


def build_R(n: int, x: int) -> RestrictedOp:
    return RestrictedOp(n, x, np.ones(2 ** n, dtype=complex))


def is_unitary(op: RestrictedOp, tol: Optional[float] = None) -> bool:
    return op.is_unitary(tol)


def unit_phases(angles: Sequence[float]) -> np.ndarray:
    """t_m = e^{i phi_m}."""
    return np.exp(1j * np.asarray(angles, dtype=float))


def random_unit_phases(n: int, rng: np.random.Generator) -> np.ndarray:
    return unit_phases(rng.uniform(0.0, 2 * np.pi, size=2 ** n))


def classify(
    matrix: Union[DenseOperator, np.ndarray],
    eps: Optional[float] = None,
) -> tuple[int, np.ndarray]:
    """Recupera (x, t) de uma matriz com um unico elemento nao nulo por linha e coluna."""
    eps = settings.simulator.zero_tolerance if eps is None else eps
    op = matrix if isinstance(matrix, DenseOperator) else DenseOperator(matrix)
    m = op.matrix
    if op.dim < 2:
        raise NotRestricted("[Restricted] Operador 1x1 nao pertence a nenhum conjunto restrito")

    mask = np.abs(m) >= eps
    row_counts = mask.sum(axis=1)
    col_counts = mask.sum(axis=0)
    bad_rows = np.flatnonzero(row_counts != 1)
    bad_cols = np.flatnonzero(col_counts != 1)
    if bad_rows.size or bad_cols.size:
        raise NotRestricted(
            f"[Restricted] Linhas {(bad_rows + 1).tolist()} / colunas {(bad_cols + 1).tolist()} "
            f"sem exatamente um elemento nao nulo"
        )

    columns = np.argmax(np.abs(m), axis=1)
    p = tuple(int(c) + 1 for c in columns)
    t = m[np.arange(op.dim), columns].copy()
    x = perm_to_rank(PermutationN(op.num_qubits, p))
    logger.debug(f"[Restricted] Classificado: N={op.num_qubits}, x={x}")
    return x, t


def compose_check(n: int, x: int, t: Phases, tol: Optional[float] = None) -> bool:
    """diag(t) R_N(x) == T_N(x, t)."""
    tol = settings.simulator.norm_tolerance if tol is None else tol
    t = np.asarray(t, dtype=complex)
    recovery = build_R(n, x)
    target = RestrictedOp(n, x, t)

    if n <= settings.limits.dense_max_qubits:
        lhs = np.diag(t) @ recovery.to_dense()
        return bool(np.allclose(lhs, target.to_dense(), rtol=0, atol=tol))

    sample = np.random.default_rng(0).normal(size=2 ** n).astype(complex)
    return bool(np.allclose(t * recovery.apply_vector(sample), target.apply_vector(sample), rtol=0, atol=tol))


def hpv_operation(d: int, u: Phases) -> RestrictedOp:
    """U(0) diagonal, U(1) antidiagonal."""
    if d not in (0, 1):
        raise ValueError(f"[Restricted] d deve ser 0 ou 1, recebido {d}")
    return build_T(1, d + 1, u)


# U_C(k) -> (rank, posicoes das fases livres, 0-based)
_CONTROLLED = {
    1: (2, (2, 3)),
    2: (6, (1, 3)),
    3: (7, (0, 1)),
    4: (15, (0, 2)),
}


def controlled_u(k: int, phases: Phases) -> RestrictedOp:
    if k not in _CONTROLLED:
        raise ValueError(f"[Restricted] U_C(k) definido para k=1..4, recebido {k}")
    phases = np.asarray(phases, dtype=complex)
    if phases.shape != (2,):
        raise DimensionMismatch(f"[Restricted] U_C({k}) recebe 2 fases, recebido {phases.shape}")
    rank, free = _CONTROLLED[k]
    t = np.ones(4, dtype=complex)
    t[list(free)] = phases
    return build_T(2, rank, t)


def cc_u(d: int, u: Phases) -> RestrictedOp:
    """Identidade nos blocos |00>,|01>,|10> dos controles e U(d) no bloco |11>."""
    if d not in (0, 1):
        raise ValueError(f"[Restricted] d deve ser 0 ou 1, recebido {d}")
    u = np.asarray(u, dtype=complex)
    if u.shape != (2,):
        raise DimensionMismatch(f"[Restricted] CC-U(d) recebe 2 fases, recebido {u.shape}")
    p = tuple(range(1, 7)) + ((7, 8) if d == 0 else (8, 7))
    t = np.concatenate([np.ones(6, dtype=complex), u])
    return build_T(3, perm_to_rank(PermutationN(3, p)), t)
