"""
Conjunto ordenado de parâmetros nomeados.
"""

from collections.abc import Iterator, Mapping
from typing import Optional

import numpy as np

from src.core.exceptions import ContractError
from src.numerics import Tensor


class ParamSet(Mapping[str, Tensor]):
    """
    Mapa nome -> Tensor com ordem de inserção estável.

    A ordem define a estrutura (nomes e formas) comparada entre os ramos
    query/key e a ordem de serialização no checkpoint.
    """

    def __init__(self, tensors: Optional[Mapping[str, Tensor]] = None):
        self._tensors: dict[str, Tensor] = dict(tensors or {})

    def __getitem__(self, name: str) -> Tensor:
        try:
            return self._tensors[name]
        except KeyError as e:
            raise ContractError(f"Parâmetro ausente: {name}", details={"name": name}) from e

    def __contains__(self, name: object) -> bool:
        return name in self._tensors

    def __iter__(self) -> Iterator[str]:
        return iter(self._tensors)

    def __len__(self) -> int:
        return len(self._tensors)

    def __repr__(self) -> str:
        return f"ParamSet({len(self)} tensores)"

    def add(self, name: str, tensor: Tensor) -> None:
        if name in self._tensors:
            raise ContractError(f"Parâmetro repetido: {name}", details={"name": name})
        tensor.name = name
        self._tensors[name] = tensor

    def structure(self) -> list[tuple[str, tuple[int, ...]]]:
        """Nomes e formas, na ordem."""
        return [(name, t.shape) for name, t in self._tensors.items()]

    def require_same_structure(self, other: "ParamSet") -> None:
        """
        Raises:
            ContractError: Nomes, formas ou ordem diferentes
        """
        if self.structure() != other.structure():
            raise ContractError(
                "Estruturas de parâmetros diferentes",
                details={"left": len(self), "right": len(other)},
            )

    def clone(self, requires_grad: bool = False) -> "ParamSet":
        """Cópia profunda dos dados."""
        return ParamSet(
            {
                name: Tensor(t.data, requires_grad=requires_grad, name=name)
                for name, t in self._tensors.items()
            }
        )

    def subset(self, prefix: str) -> "ParamSet":
        """Parâmetros cujo nome começa com `prefix.` (mesmos objetos)."""
        start = f"{prefix}."
        return ParamSet({name: t for name, t in self._tensors.items() if name.startswith(start)})

    def merged(self, other: "ParamSet") -> "ParamSet":
        merged = ParamSet(self._tensors)
        for name, tensor in other.items():
            merged.add(name, tensor)
        return merged

    def to_arrays(self) -> dict[str, np.ndarray]:
        """Cópias dos arrays, na ordem."""
        return {name: t.data.copy() for name, t in self._tensors.items()}

    @classmethod
    def from_arrays(
        cls, arrays: Mapping[str, np.ndarray], requires_grad: bool = True
    ) -> "ParamSet":
        return cls(
            {
                name: Tensor(value, requires_grad=requires_grad, name=name)
                for name, value in arrays.items()
            }
        )

    def zero_grad(self) -> None:
        for tensor in self._tensors.values():
            tensor.zero_grad()

    def set_trainable(self, trainable: bool) -> None:
        for tensor in self._tensors.values():
            tensor.requires_grad = trainable

    def squared_distance(self, other: "ParamSet") -> float:
        """Σ‖self − other‖² sobre todos os tensores."""
        self.require_same_structure(other)
        return float(
            sum(np.sum((a.data - b.data) ** 2) for a, b in zip(self.values(), other.values()))
        )
