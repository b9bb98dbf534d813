"""
Fusão ponderada de logits das modalidades joint, bone e motion.
"""

from collections.abc import Sequence
from typing import Union

import numpy as np

from src.core.exceptions import ContractError
from src.numerics import Tensor
from src.training.metrics import predict

Logits = Union[Tensor, np.ndarray, Sequence[float]]


def _as_array(logits: Logits) -> np.ndarray:
    return logits.data if isinstance(logits, Tensor) else np.asarray(logits, dtype=np.float64)


def _weighted_sum(logits_per_stream: Sequence[Logits], weights: Sequence[float]) -> np.ndarray:
    if len(logits_per_stream) != len(weights):
        raise ContractError(
            "Um peso por modalidade",
            details={"streams": len(logits_per_stream), "weights": len(weights)},
        )
    if not logits_per_stream:
        raise ContractError("Fusão sem modalidades")
    arrays = [_as_array(logits) for logits in logits_per_stream]
    shapes = {a.shape for a in arrays}
    if len(shapes) != 1:
        raise ContractError(
            "Modalidades com números de classes diferentes", details={"shapes": sorted(shapes)}
        )
    combined = np.zeros(arrays[0].shape)
    for array, weight in zip(arrays, weights):
        combined = combined + float(weight) * array
    return combined


def fuse_predictions(logits_per_stream: Sequence[Logits], weights: Sequence[float]) -> int:
    """
    argmax de Σ wₛ·logitsₛ, na ordem das modalidades; empate → menor classe.

    Raises:
        ContractError: Pesos e modalidades em quantidades diferentes
    """
    return int(predict(_weighted_sum(logits_per_stream, weights))[0])


def fuse_batch(logits_per_stream: Sequence[np.ndarray], weights: Sequence[float]) -> np.ndarray:
    """Versão em lote: cada modalidade contribui com logits [B, K]."""
    return predict(_weighted_sum(logits_per_stream, weights))
