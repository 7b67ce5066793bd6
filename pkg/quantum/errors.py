class RIOError(Exception):
    """Raiz de todos os erros do simulador."""


class LabelError(RIOError, ValueError):
    pass


class DimensionMismatch(RIOError, ValueError):
    pass


class ForcedOutcomeImpossible(RIOError):
    def __init__(self, label: str, outcome: int, prob: float) -> None:
        self.label = label
        self.outcome = outcome
        self.prob = prob
        super().__init__(
            f"[StateVec] Resultado forcado {outcome} em '{label}' tem probabilidade {prob:.3e}"
        )


class NotProductState(RIOError):
    pass


class RoutingError(RIOError, ValueError):
    pass


class RankOutOfRange(RIOError, ValueError):
    pass


class NotPermutation(RIOError, ValueError):
    pass


class NotRestricted(RIOError):
    """Operador com linha ou coluna sem exatamente um elemento nao nulo."""


class QubitCapExceeded(RIOError, ValueError):
    pass


class FileFormatError(RIOError):
    pass
