"""
Par query/key e atualização por média móvel exponencial.
"""

from dataclasses import dataclass

from src.core.exceptions import ContractError
from src.encoder.params import ParamSet


@dataclass
class EncoderPair:
    """θ_q treinado por gradiente; θ_k só por momentum."""

    query: ParamSet
    key: ParamSet
    momentum: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.momentum <= 1.0:
            raise ContractError(
                "Momentum deve estar em [0, 1]", details={"momentum": self.momentum}
            )
        self.query.require_same_structure(self.key)
        self.key.set_trainable(False)

    @classmethod
    def from_query(cls, query: ParamSet, momentum: float) -> "EncoderPair":
        """Ramo key começa idêntico ao query."""
        return cls(query=query, key=query.clone(requires_grad=False), momentum=momentum)


def momentum_update(pair: EncoderPair) -> None:
    """
    θ_k ← ε·θ_k + (1 − ε)·θ_q, tensor a tensor; θ_q intocado.

    Raises:
        ContractError: Estruturas diferentes
    """
    pair.query.require_same_structure(pair.key)
    eps = pair.momentum
    for key_tensor, query_tensor in zip(pair.key.values(), pair.query.values()):
        key_tensor.data = eps * key_tensor.data + (1.0 - eps) * query_tensor.data
