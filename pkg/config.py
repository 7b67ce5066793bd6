import os
from dataclasses import dataclass
from pathlib import Path
from dotenv import load_dotenv

load_dotenv()

def _optional(var: str, default: str = "") -> str:
    return os.getenv(var, default)

def _optional_int(var: str, default: int) -> int:
    raw = os.getenv(var)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise EnvironmentError(
            f"\n[RIO] Variavel de ambiente '{var}' deveria ser inteira, recebido: '{raw}'\n"
            f"  -> Corrija o valor no arquivo .env ou remova a variavel.\n"
        )

def _optional_float(var: str, default: float) -> float:
    raw = os.getenv(var)
    if raw is None or raw.strip() == "":
        return default
    try:
        return float(raw)
    except ValueError:
        raise EnvironmentError(
            f"\n[RIO] Variavel de ambiente '{var}' deveria ser numerica, recebido: '{raw}'\n"
            f"  -> Corrija o valor no arquivo .env ou remova a variavel.\n"
        )

@dataclass(frozen=True)
class SimulatorConfig:
    # normalizacao e igualdade de amplitudes
    norm_tolerance: float
    # deteccao de zero na classificacao de operadores
    zero_tolerance: float
    # abaixo disso um resultado forcado de medicao e impossivel
    forced_outcome_floor: float

@dataclass(frozen=True)
class ProtocolLimits:
    # 2^(3N) amplitudes por execucao; N=6 -> 262144
    max_qubits: int
    # operadores densos de 2^(3N) x 2^(3N), usados so na verificacao cruzada
    dense_max_qubits: int

@dataclass(frozen=True)
class HarnessConfig:
    default_seed: int
    workers: int
    output_dir: str
    fidelity_threshold: float

    @property
    def resolved_output_dir(self) -> Path:
        p = Path(self.output_dir)
        p.mkdir(parents=True, exist_ok=True)
        return p.resolve()

@dataclass(frozen=True)
class LoggingConfig:
    level: str

@dataclass(frozen=True)
class Settings:
    simulator: SimulatorConfig
    limits: ProtocolLimits
    harness: HarnessConfig
    logging: LoggingConfig

def _load_settings() -> Settings:
    simulator = SimulatorConfig(
        norm_tolerance=_optional_float("RIO_NORM_TOLERANCE", 1e-12),
        zero_tolerance=_optional_float("RIO_ZERO_TOLERANCE", 1e-10),
        forced_outcome_floor=_optional_float("RIO_FORCED_OUTCOME_FLOOR", 1e-14),
    )

    limits = ProtocolLimits(
        max_qubits=_optional_int("RIO_MAX_QUBITS", 6),
        dense_max_qubits=_optional_int("RIO_DENSE_MAX_QUBITS", 3),
    )

    harness = HarnessConfig(
        default_seed=_optional_int("RIO_SEED", 7),
        workers=_optional_int("RIO_WORKERS", 1),
        output_dir=_optional("RIO_OUTPUT_DIR", "./runs"),
        fidelity_threshold=_optional_float("RIO_FIDELITY_THRESHOLD", 1e-9),
    )

    logging_config = LoggingConfig(
        level=_optional("RIO_LOG_LEVEL", "WARNING").upper(),
    )

    return Settings(simulator=simulator, limits=limits, harness=harness, logging=logging_config)

settings = _load_settings()

if __name__ == "__main__":
    print(f"\n{'=' * 50}")
    print(f"  RIO Simulator -- Diagnostico de Configuracoes")
    print(f"{'=' * 50}")

    print(f"\n[Simulador]")
    print(f"  Tolerancia de norma : {settings.simulator.norm_tolerance:g}")
    print(f"  Tolerancia de zero  : {settings.simulator.zero_tolerance:g}")
    print(f"  Piso de medicao     : {settings.simulator.forced_outcome_floor:g}")

    print(f"\n[Limites]")
    print(f"  N maximo (protocolo)      : {settings.limits.max_qubits}")
    print(f"  N maximo (operador denso) : {settings.limits.dense_max_qubits}")

    print(f"\n[Harness]")
    print(f"  Seed padrao   : {settings.harness.default_seed}")
    print(f"  Workers       : {settings.harness.workers}")
    print(f"  Saida         : {settings.harness.output_dir}")
    print(f"  Limiar fidel. : {settings.harness.fidelity_threshold:g}")

    print(f"\n[Logging]")
    print(f"  Nivel    : {settings.logging.level}")

    print(f"\n{'=' * 50}\n")
