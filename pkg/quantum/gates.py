import numpy as np
from math import sqrt

_SQRT2_INV = 1 / sqrt(2)

SIGMA_0 = np.array([[1, 0], [0, 1]], dtype=complex)
SIGMA_1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_3 = np.array([[1, 0], [0, -1]], dtype=complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) * _SQRT2_INV

SWAP = np.array(
    [[1, 0, 0, 0],
     [0, 0, 1, 0],
     [0, 1, 0, 0],
     [0, 0, 0, 1]],
    dtype=complex,
)

_PAULIS = (SIGMA_0, SIGMA_1, SIGMA_2, SIGMA_3)


def sigma(k: int) -> np.ndarray:
    if k not in (0, 1, 2, 3):
        raise ValueError(f"[Gates] Indice de Pauli invalido: {k}")
    return _PAULIS[k].copy()


def projector(b: int) -> np.ndarray:
    """|b><b| na base computacional."""
    if b not in (0, 1):
        raise ValueError(f"[Gates] Bit invalido para projetor: {b}")
    out = np.zeros((2, 2), dtype=complex)
    out[b, b] = 1
    return out


def recovery_phase(a: int) -> np.ndarray:
    # r(a) = (1 - a) sigma_0 + a sigma_3
    if a not in (0, 1):
        raise ValueError(f"[Gates] Bit invalido para r(a): {a}")
    return (1 - a) * SIGMA_0 + a * SIGMA_3


def separated_cnot(separation: int = 0) -> np.ndarray:
    """C^not_M(0,1): controle no ultimo qubit, alvo no primeiro, M qubits no meio."""
    if separation < 0:
        raise ValueError(f"[Gates] Separacao negativa: {separation}")
    middle = np.eye(2 ** separation, dtype=complex)
    return (
        np.kron(np.kron(SIGMA_0, middle), projector(0))
        + np.kron(np.kron(SIGMA_1, middle), projector(1))
    )


def kron_all(*matrices: np.ndarray) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for m in matrices:
        out = np.kron(out, m)
    return out
