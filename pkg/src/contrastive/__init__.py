"""
Módulo contrastive: fila de negativos, momentum e perdas.
"""

from src.contrastive.losses import LossBreakdown, infonce_loss, kl_loss, total_loss, vcl_objective
from src.contrastive.momentum import EncoderPair, momentum_update
from src.contrastive.queue import MemoryQueue, queue_push

__all__ = [
    "EncoderPair",
    "LossBreakdown",
    "MemoryQueue",
    "infonce_loss",
    "kl_loss",
    "momentum_update",
    "queue_push",
    "total_loss",
    "vcl_objective",
]
