"""
Geradores aleatórios baseados em contador.

Cada fluxo é identificado por (seed, finalidade, contadores...) e não
depende da ordem em que outros fluxos foram consumidos; augmentações de
amostras distintas podem rodar em paralelo com resultado idêntico.
"""

import numpy as np

from src.core.types import StreamPurpose


def stream(seed: int, purpose: StreamPurpose, *counters: int) -> np.random.Generator:
    """
    Gerador Philox para a chave (seed, purpose, *counters).

    Args:
        seed: Semente global da execução
        purpose: Finalidade do fluxo
        *counters: Época, índice de amostra, índice de vista, etc.
    """
    key = [int(seed), int(purpose), *(int(c) for c in counters)]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(key)))


def augment_stream(seed: int, epoch: int, sample_index: int, view: int) -> np.random.Generator:
    """Fluxo da augmentação de uma vista de uma amostra."""
    return stream(seed, StreamPurpose.AUGMENT, epoch, sample_index, view)


def noise_stream(seed: int, epoch: int, sample_index: int, view: int) -> np.random.Generator:
    """Fluxo do ruído ξ da reparametrização."""
    return stream(seed, StreamPurpose.NOISE, epoch, sample_index, view)


def epoch_permutation(seed: int, epoch: int, n: int, phase: int = 0) -> np.ndarray:
    """Ordem de visita das amostras numa época (fase 0 = pré-treino, 1 = downstream)."""
    return stream(seed, StreamPurpose.SHUFFLE, phase, epoch).permutation(n)
