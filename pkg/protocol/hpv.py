"""
Protocolo de um qubit para operacoes diagonais (d=0) e antidiagonais (d=1).

A versao simplificada e o protocolo geral com N=1 e x = d + 1. A versao
original inverte o CNOT de Bob (controle B, alvo Y), mede Y e deixa o
resultado em B; uma troca final B <-> Y o devolve ao registrador Y.
"""
import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence
import numpy as np
sys.path.append(str(Path(__file__).resolve().parent.parent))
from config import settings
from quantum.gates import HADAMARD, SWAP, recovery_phase, separated_cnot, sigma
from quantum.restricted import hpv_operation
from quantum.statevec import StateVector, apply_on, measure
from protocol.rio import ProtocolConfig, ProtocolTranscript, init_state, run_protocol

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class HpvOutcome:
    state: StateVector
    b: int
    a: int
    branch_prob: float
    swapped: bool

    @property
    def carrier(self) -> str:
        """Qubit que contem U(d)|xi>."""
        return "Y1" if self.swapped else "B1"


def hpv_simplified(
    d: int,
    u: Sequence[complex],
    xi: StateVector,
    forced_b: Optional[int] = None,
    forced_a: Optional[int] = None,
    rng: Optional[np.random.Generator] = None,
) -> tuple[StateVector, ProtocolTranscript]:
    if d not in (0, 1):
        raise ValueError(f"[HPV] d deve ser 0 ou 1, recebido {d}")
    cfg = ProtocolConfig(
        n=1,
        x=d + 1,
        t=u,
        forced_b=None if forced_b is None else (forced_b,),
        forced_a=None if forced_a is None else (forced_a,),
        seed=settings.harness.default_seed,
    )
    return run_protocol(cfg, xi, rng=rng)


def hpv_original(
    d: int,
    u: Sequence[complex],
    xi: StateVector,
    forced_b: Optional[int] = None,
    forced_a: Optional[int] = None,
    rng: Optional[np.random.Generator] = None,
    final_swap: bool = True,
) -> HpvOutcome:
    op = hpv_operation(d, u)
    if rng is None and (forced_a is None or forced_b is None):
        rng = np.random.default_rng(settings.harness.default_seed)

    state = init_state(1, xi)

    # Bob: CNOT com controle B1 e alvo Y1, mede Y1
    state = apply_on(state, separated_cnot(0), ["Y1", "B1"])
    result_b = measure(state, "Y1", forced=forced_b, rng=rng)
    state, b = result_b.post, result_b.outcome
    state = apply_on(state, sigma(b), ["B1"])
    logger.debug(f"[HPV] Bob mediu Y1 = {b} (p={result_b.prob:.6f})")

    # Alice: sigma_b, U(d), H e medida de A1
    state = apply_on(state, sigma(b), ["A1"])
    state = op.apply(state, ["A1"])
    state = apply_on(state, HADAMARD, ["A1"])
    result_a = measure(state, "A1", forced=forced_a, rng=rng)
    state, a = result_a.post, result_a.outcome
    logger.debug(f"[HPV] Alice mediu A1 = {a} (p={result_a.prob:.6f})")

    # Bob: r(a) sigma_d em B1
    state = apply_on(state, recovery_phase(a) @ sigma(d), ["B1"])

    if final_swap:
        state = apply_on(state, SWAP, ["B1", "Y1"])

    return HpvOutcome(
        state=state,
        b=b,
        a=a,
        branch_prob=result_b.prob * result_a.prob,
        swapped=final_swap,
    )
