import logging
import sys
from pathlib import Path
from typing import Optional
import numpy as np
sys.path.append(str(Path(__file__).resolve().parent.parent))
from config import settings
from quantum.errors import QubitCapExceeded
from quantum.gates import HADAMARD, kron_all, projector, recovery_phase, separated_cnot, sigma
from quantum.restricted import build_R, build_T
from quantum.statevec import StateVector
from quantum.swapnet import QubitRouting, embed, lambda_route, upsilon_route
from protocol.rio import ProtocolConfig, init_state, joint_labels

logger = logging.getLogger(__name__)

_I2 = np.eye(2, dtype=complex)


def _conjugate(routing: QubitRouting, block_op: np.ndarray) -> np.ndarray:
    """W^-1 . op . W: op escrito na ordem roteada, devolvido na ordem original."""
    w = routing.to_dense()
    return w.T @ block_op @ w


def _pair_sort(n: int) -> QubitRouting:
    total = 3 * n
    if n == 1:
        return QubitRouting.identity(total)
    return embed(lambda_route(n), total, 0)


def bob_prepare_operator(n: int, b_bits: tuple[int, ...]) -> np.ndarray:
    """P_B(b): CNOT(Y_m -> B_m) seguido de |b_m><b_m| em B_m, na ordem A1 B1 .. Y1 .. YN."""
    cnot = separated_cnot(0)
    blocks = [np.kron(_I2, np.kron(projector(b), _I2) @ cnot) for b in b_bits]
    return _conjugate(upsilon_route(n), kron_all(*blocks))


def alice_operator(cfg: ProtocolConfig, b_bits: tuple[int, ...], a_bits: tuple[int, ...]) -> np.ndarray:
    """S_A(a, b) = |a><a| H^N T sigma_b no bloco A, identidade em B e Y."""
    n = cfg.n
    flip = kron_all(*(sigma(b) for b in b_bits))
    hadamards = kron_all(*([HADAMARD] * n))
    select = kron_all(*(projector(a) for a in a_bits))
    local = select @ hadamards @ build_T(n, cfg.x, cfg.t).to_dense() @ flip
    return _conjugate(_pair_sort(n), np.kron(local, np.eye(4 ** n, dtype=complex)))


def bob_recover_operator(n: int, x: int, a_bits: tuple[int, ...]) -> np.ndarray:
    phases = kron_all(*(recovery_phase(a) for a in a_bits))
    return np.kron(np.eye(4 ** n, dtype=complex), phases @ build_R(n, x).to_dense())


def monolithic_operator(cfg: ProtocolConfig, max_qubits: Optional[int] = None) -> np.ndarray:
    """I_R = R_B . S_A . P_B como uma unica matriz 2^{3N} x 2^{3N}."""
    max_qubits = settings.limits.dense_max_qubits if max_qubits is None else max_qubits
    if cfg.n > max_qubits:
        raise QubitCapExceeded(
            f"[Monolitico] N={cfg.n} acima do limite denso {max_qubits} (RIO_DENSE_MAX_QUBITS)"
        )
    if cfg.forced_b is None or cfg.forced_a is None:
        raise ValueError("[Monolitico] O operador conjunto exige b e a fixados")

    prepare = bob_prepare_operator(cfg.n, cfg.forced_b)
    send = alice_operator(cfg, cfg.forced_b, cfg.forced_a)
    recover = bob_recover_operator(cfg.n, cfg.x, cfg.forced_a)
    return recover @ send @ prepare


def apply_monolithic(
    cfg: ProtocolConfig,
    xi: StateVector,
    max_qubits: Optional[int] = None,
) -> StateVector:
    """Resultado sem renormalizar: (1/2^N) |a1 b1 ... aN bN> (x) T|xi>."""
    operator = monolithic_operator(cfg, max_qubits)
    initial = init_state(cfg.n, xi)
    out = StateVector(joint_labels(cfg.n), operator @ initial.amps)
    logger.debug(f"[Monolitico] N={cfg.n} x={cfg.x}: norma {out.norm():.12f}")
    return out
