"""
Fila FIFO de chaves normalizadas usadas como negativos.
"""

from collections.abc import Sequence
from typing import Union

import numpy as np

from src.core.constants import QUEUE_UNIT_TOLERANCE
from src.core.exceptions import ContractError, DimensionError


class MemoryQueue:
    """
    Buffer circular de capacidade K com vetores de norma unitária.

    `cursor` aponta a próxima posição de escrita; quando cheia, a
    escrita sobrescreve a entrada mais antiga.
    """

    def __init__(self, capacity: int, dim: int):
        if capacity < 1 or dim < 1:
            raise ContractError(
                "Fila exige K ≥ 1 e d ≥ 1", details={"capacity": capacity, "dim": dim}
            )
        self.capacity = capacity
        self.dim = dim
        self._buffer = np.zeros((capacity, dim))
        self.size = 0
        self.cursor = 0
        self.total_pushed = 0

    def __len__(self) -> int:
        return self.size

    def push(self, batch: Union[np.ndarray, Sequence[Sequence[float]]]) -> None:
        """
        Acrescenta vetores na ordem do lote, descartando os mais antigos.

        Raises:
            DimensionError: Vetores com dimensão diferente de d
            ContractError: Algum vetor sem norma unitária (tolerância 1e-6)
        """
        rows = np.asarray(batch, dtype=np.float64)
        if rows.size == 0:
            return
        rows = rows.reshape(1, -1) if rows.ndim == 1 else rows
        if rows.ndim != 2 or rows.shape[1] != self.dim:
            raise DimensionError(
                "Vetores da fila com dimensão errada", expected=self.dim, got=rows.shape
            )
        norms = np.linalg.norm(rows, axis=1)
        bad = np.flatnonzero(np.abs(norms - 1.0) > QUEUE_UNIT_TOLERANCE)
        if bad.size:
            raise ContractError(
                "Vetor sem norma unitária enviado à fila",
                details={"row": int(bad[0]), "norm": float(norms[bad[0]])},
            )
        for row in rows:
            self._buffer[self.cursor] = row
            self.cursor = (self.cursor + 1) % self.capacity
        self.size = min(self.size + rows.shape[0], self.capacity)
        self.total_pushed += rows.shape[0]

    def contents(self) -> np.ndarray:
        """Entradas da mais antiga para a mais nova (cópia)."""
        if self.size < self.capacity:
            return self._buffer[: self.size].copy()
        return np.concatenate([self._buffer[self.cursor :], self._buffer[: self.cursor]])

    def negatives(self) -> np.ndarray:
        return self.contents()

    @classmethod
    def random(cls, capacity: int, dim: int, rng: np.random.Generator) -> "MemoryQueue":
        """Fila cheia de K vetores unitários aleatórios."""
        queue = cls(capacity, dim)
        vectors = rng.normal(size=(capacity, dim))
        queue.push(vectors / np.linalg.norm(vectors, axis=1, keepdims=True))
        queue.total_pushed = 0
        return queue

    def state_arrays(self) -> dict[str, np.ndarray]:
        """Estado serializável: entradas em ordem FIFO e contadores."""
        return {
            "entries": self.contents(),
            "counters": np.array([self.capacity, self.total_pushed], dtype=np.float64),
        }

    @classmethod
    def from_state(cls, entries: np.ndarray, counters: np.ndarray) -> "MemoryQueue":
        capacity, total_pushed = (int(v) for v in counters.reshape(-1))
        dim = entries.shape[1] if entries.ndim == 2 else 1
        queue = cls(capacity, dim)
        queue.push(entries)
        queue.total_pushed = total_pushed
        return queue


def queue_push(queue: MemoryQueue, batch: Union[np.ndarray, Sequence[Sequence[float]]]) -> None:
    """Acrescenta vetores unitários à fila (FIFO)."""
    queue.push(batch)
