import json
import logging
import sys
from pathlib import Path
from typing import Literal, Union
import numpy as np
from pydantic import BaseModel, ConfigDict, ValidationError, field_validator, model_validator
sys.path.append(str(Path(__file__).resolve().parent.parent))
from quantum.errors import FileFormatError
from quantum.statevec import StateVector

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]
ComplexPair = tuple[float, float]


def _pairs(values: np.ndarray) -> list[list[float]]:
    return [[float(z.real), float(z.imag)] for z in np.asarray(values, dtype=complex).reshape(-1)]


def _complex(pairs: list[ComplexPair]) -> np.ndarray:
    return np.array([complex(re, im) for re, im in pairs], dtype=complex)


class StateFile(BaseModel):
    model_config = ConfigDict(extra="forbid")

    labels: list[str]
    amps: list[ComplexPair]

    @model_validator(mode="after")
    def _check_length(self) -> "StateFile":
        if len(self.amps) != 2 ** len(self.labels):
            raise ValueError(f"{len(self.amps)} amplitudes para {len(self.labels)} rotulos")
        return self

    @classmethod
    def from_state(cls, state: StateVector) -> "StateFile":
        return cls(labels=list(state.labels), amps=_pairs(state.amps))

    def to_state(self) -> StateVector:
        return StateVector(tuple(self.labels), _complex(self.amps))


class MatrixFile(BaseModel):
    model_config = ConfigDict(extra="forbid")

    dim: int
    entries: list[list[ComplexPair]]

    @model_validator(mode="after")
    def _check_shape(self) -> "MatrixFile":
        if len(self.entries) != self.dim or any(len(row) != self.dim for row in self.entries):
            raise ValueError(f"entries nao formam uma matriz {self.dim}x{self.dim}")
        return self

    @classmethod
    def from_matrix(cls, matrix: np.ndarray) -> "MatrixFile":
        matrix = np.asarray(matrix, dtype=complex)
        return cls(dim=matrix.shape[0], entries=[_pairs(row) for row in matrix])

    def to_matrix(self) -> np.ndarray:
        return np.array([_complex(row) for row in self.entries], dtype=complex).reshape(self.dim, self.dim)


class MessageEntry(BaseModel):
    model_config = ConfigDict(extra="forbid")

    dir: Literal["B2A", "A2B"]
    bits: str

    @field_validator("bits")
    @classmethod
    def _binary(cls, v: str) -> str:
        if any(c not in "01" for c in v):
            raise ValueError(f"bits nao binarios: '{v}'")
        return v


class TranscriptFile(BaseModel):
    model_config = ConfigDict(extra="forbid")

    n: int
    x: str
    b: list[int]
    a: list[int]
    messages: list[MessageEntry]
    branch_prob: float

    @field_validator("x")
    @classmethod
    def _decimal(cls, v: str) -> str:
        if not v.isdigit():
            raise ValueError(f"x deve ser decimal, recebido '{v}'")
        return v

    @property
    def rank(self) -> int:
        return int(self.x)


def dumps_json(payload: dict) -> str:
    """JSON deterministico: chaves ordenadas, indentacao fixa, newline final."""
    return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _write(path: PathLike, payload: dict) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(dumps_json(payload), encoding="utf-8")
    except OSError as e:
        logger.error(f"[Storage] Falha ao gravar {path}: {e}")
        raise FileFormatError(f"[Storage] Nao foi possivel gravar '{path}': {e}") from e
    logger.debug(f"[Storage] Gravado {path}")
    return path


def _read(path: PathLike, model: type[BaseModel]) -> BaseModel:
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
        return model.model_validate(raw)
    except OSError as e:
        raise FileFormatError(f"[Storage] Nao foi possivel ler '{path}': {e}") from e
    except json.JSONDecodeError as e:
        raise FileFormatError(f"[Storage] JSON invalido em '{path}': {e}") from e
    except ValidationError as e:
        raise FileFormatError(
            f"[Storage] '{path}' nao segue o formato {model.__name__}: {e.error_count()} erro(s)\n{e}"
        ) from e


def save_state(path: PathLike, state: StateVector) -> Path:
    return _write(path, StateFile.from_state(state).model_dump())


def load_state(path: PathLike) -> StateVector:
    data = _read(path, StateFile)
    try:
        return data.to_state()
    except ValueError as e:
        raise FileFormatError(f"[Storage] Estado invalido em '{path}': {e}") from e


def save_matrix(path: PathLike, matrix: np.ndarray) -> Path:
    return _write(path, MatrixFile.from_matrix(matrix).model_dump())


def load_matrix(path: PathLike) -> np.ndarray:
    return _read(path, MatrixFile).to_matrix()


def save_transcript(path: PathLike, transcript) -> Path:
    """Aceita um ProtocolTranscript (via to_dict) ou um dict no mesmo formato."""
    payload = transcript if isinstance(transcript, dict) else transcript.to_dict()
    return _write(path, TranscriptFile.model_validate(payload).model_dump())


def load_transcript(path: PathLike) -> TranscriptFile:
    return _read(path, TranscriptFile)
