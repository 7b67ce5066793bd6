import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from pathlib import Path
from typing import Iterable, Optional
import numpy as np
from scipy import stats as scipy_stats
sys.path.append(str(Path(__file__).resolve().parent.parent))
from config import settings
from quantum.errors import NotProductState, QubitCapExceeded
from quantum.restricted import (
    PermutationN,
    build_T,
    perm_to_rank,
    random_unit_phases,
    restricted_set_count,
)
from quantum.statevec import random_state
from protocol.rio import ProtocolConfig, bits_str, result_register, run_protocol, y_labels

logger = logging.getLogger(__name__)

# varredura exaustiva: (2^N)! * 4^N execucoes
EXHAUSTIVE_MAX_QUBITS = 2


@dataclass(frozen=True)
class TrialSpec:
    index: int
    x: Optional[int] = None
    forced_b: Optional[tuple[int, ...]] = None
    forced_a: Optional[tuple[int, ...]] = None


@dataclass(frozen=True)
class TrialResult:
    index: int
    x: int
    b: str
    a: str
    fidelity: float
    max_deviation: float
    branch_prob: float
    ab_ok: bool

    @property
    def outcome_key(self) -> str:
        return f"{self.b}|{self.a}"


@dataclass
class VerificationReport:
    n: int
    threshold: float
    trials: int = 0
    min_fidelity: float = 1.0
    max_deviation: float = 0.0
    branch_prob_min: float = 1.0
    branch_prob_max: float = 0.0
    histogram: dict[str, int] = field(default_factory=dict)
    failures: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def add(self, result: TrialResult) -> None:
        self.trials += 1
        self.min_fidelity = min(self.min_fidelity, result.fidelity)
        self.max_deviation = max(self.max_deviation, result.max_deviation)
        self.branch_prob_min = min(self.branch_prob_min, result.branch_prob)
        self.branch_prob_max = max(self.branch_prob_max, result.branch_prob)
        self.histogram[result.outcome_key] = self.histogram.get(result.outcome_key, 0) + 1

        expected_prob = 4.0 ** -self.n
        if (
            result.fidelity < 1.0 - self.threshold
            or result.max_deviation > self.threshold
            or abs(result.branch_prob - expected_prob) > self.threshold
            or not result.ab_ok
        ):
            self.failures.append({
                "trial": result.index,
                "x": str(result.x),
                "b": result.b,
                "a": result.a,
                "fidelity": result.fidelity,
                "max_deviation": result.max_deviation,
                "branch_prob": result.branch_prob,
            })

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "trials": self.trials,
            "min_fidelity": self.min_fidelity,
            "max_deviation": self.max_deviation,
            "branch_prob": {"min": self.branch_prob_min, "max": self.branch_prob_max},
            "histogram": dict(sorted(self.histogram.items())),
            "failures": self.failures,
            "passed": self.passed,
        }


def random_rank(n: int, rng: np.random.Generator) -> int:
    """Rank uniforme em 1..(2^N)!, sem depender do limite de int64."""
    p = rng.permutation(2 ** n) + 1
    return perm_to_rank(PermutationN(n, tuple(int(v) for v in p)))


def run_trial(n: int, spec: TrialSpec, seed: int) -> TrialResult:
    rng = np.random.default_rng([seed, spec.index])
    x = random_rank(n, rng) if spec.x is None else spec.x
    t = random_unit_phases(n, rng)
    xi = random_state(y_labels(n), rng)

    cfg = ProtocolConfig(n=n, x=x, t=t, forced_b=spec.forced_b, forced_a=spec.forced_a, seed=seed)
    final, transcript = run_protocol(cfg, xi, rng=rng)

    expected = build_T(n, x, t).apply_vector(xi.amps)
    try:
        register, fixed = result_register(final, n)
        got = register.amps
        ab_ok = all(
            fixed[f"A{m}"] == transcript.a_bits[m - 1] and fixed[f"B{m}"] == transcript.b_bits[m - 1]
            for m in range(1, n + 1)
        )
    except NotProductState as e:
        logger.error(f"[Verify] Tentativa {spec.index}: {e}")
        got = np.zeros_like(expected)
        ab_ok = False

    return TrialResult(
        index=spec.index,
        x=x,
        b=bits_str(transcript.b_bits),
        a=bits_str(transcript.a_bits),
        fidelity=float(abs(np.vdot(expected, got)) ** 2),
        max_deviation=float(np.max(np.abs(got - expected))),
        branch_prob=transcript.branch_prob,
        ab_ok=ab_ok,
    )


def exhaustive_specs(n: int, repeats: int = 1) -> Iterable[TrialSpec]:
    if n > EXHAUSTIVE_MAX_QUBITS:
        raise QubitCapExceeded(
            f"[Verify] Varredura exaustiva so ate N={EXHAUSTIVE_MAX_QUBITS} (recebido {n})"
        )
    outcomes = list(product((0, 1), repeat=n))
    index = 0
    for x in range(1, restricted_set_count(n) + 1):
        for b in outcomes:
            for a in outcomes:
                for _ in range(repeats):
                    yield TrialSpec(index=index, x=x, forced_b=b, forced_a=a)
                    index += 1


def sampled_specs(trials: int, x: Optional[int] = None) -> Iterable[TrialSpec]:
    return (TrialSpec(index=i, x=x) for i in range(trials))


def verify(
    n: int,
    trials: int = 100,
    seed: Optional[int] = None,
    x: Optional[int] = None,
    exhaustive: bool = False,
    workers: Optional[int] = None,
    threshold: Optional[float] = None,
) -> VerificationReport:
    """
    Compara o registrador Y final com T|xi> aplicado diretamente.

    exhaustive=True percorre todos os x e todos os 4^N resultados forcados,
    com `trials` repeticoes (xi, t) por combinacao. Caso contrario, sorteia
    `trials` execucoes com x aleatorio (ou o x dado) e medidas amostradas.
    """
    seed = settings.harness.default_seed if seed is None else seed
    workers = settings.harness.workers if workers is None else workers
    threshold = settings.harness.fidelity_threshold if threshold is None else threshold

    specs = list(exhaustive_specs(n, trials) if exhaustive else sampled_specs(trials, x))
    report = VerificationReport(n=n, threshold=threshold)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda s: run_trial(n, s, seed), specs))
    else:
        results = [run_trial(n, s, seed) for s in specs]

    for result in results:
        report.add(result)

    logger.info(
        f"[Verify] N={n}: {report.trials} execucoes, fidelidade minima {report.min_fidelity:.15f}, "
        f"{len(report.failures)} falhas"
    )
    return report


def chi_square_uniformity(histogram: dict[str, int], n: int) -> tuple[float, float]:
    """Qui-quadrado dos 4^N resultados (b, a) contra a distribuicao uniforme."""
    keys = [
        f"{bits_str(b)}|{bits_str(a)}"
        for b in product((0, 1), repeat=n)
        for a in product((0, 1), repeat=n)
    ]
    observed = np.array([histogram.get(key, 0) for key in keys], dtype=float)
    statistic, pvalue = scipy_stats.chisquare(observed)
    return float(statistic), float(pvalue)
