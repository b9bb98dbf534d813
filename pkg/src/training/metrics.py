"""
Entropia cruzada, predições e acurácia top-1.
"""

from collections.abc import Sequence
from typing import Union

import numpy as np

from src.core.exceptions import ContractError, DimensionError
from src.numerics import Tensor, log_softmax, mean, neg, reshape, take_along

Labels = Union[int, Sequence[int], np.ndarray]


def cross_entropy(logits: Tensor, labels: Labels) -> Tensor:
    """
    −log_softmax(logits)[label]; com logits [B, K] é a média do lote.

    Raises:
        ContractError: Rótulo fora de [0, K)
        DimensionError: Número de rótulos diferente do lote
    """
    single = logits.ndim == 1
    rows = reshape(logits, (1, logits.shape[0])) if single else logits
    targets = np.atleast_1d(np.asarray(labels, dtype=np.int64))
    if targets.shape != (rows.shape[0],):
        raise DimensionError(
            "Um rótulo por linha de logits", expected=rows.shape[0], got=targets.shape
        )
    n_classes = rows.shape[1]
    if np.any(targets < 0) or np.any(targets >= n_classes):
        raise ContractError(
            "Rótulo fora do intervalo de classes",
            details={"labels": targets.tolist(), "classes": n_classes},
        )
    return neg(mean(take_along(log_softmax(rows, axis=1), targets)))


def predict(logits: np.ndarray) -> np.ndarray:
    """argmax por linha; empates ficam com o menor índice."""
    logits = np.asarray(logits, dtype=np.float64)
    return np.argmax(np.atleast_2d(logits), axis=1)


def top1_accuracy(predictions: Sequence[int], labels: Sequence[int]) -> float:
    """
    Fração de acertos.

    Raises:
        ContractError: Listas vazias ou de tamanhos diferentes
    """
    predictions = np.asarray(predictions, dtype=np.int64)
    labels = np.asarray(labels, dtype=np.int64)
    if predictions.size == 0:
        raise ContractError("Acurácia de lista vazia")
    if predictions.shape != labels.shape:
        raise ContractError(
            "Predições e rótulos com tamanhos diferentes",
            details={"predictions": predictions.size, "labels": labels.size},
        )
    return float(np.count_nonzero(predictions == labels)) / float(labels.size)
