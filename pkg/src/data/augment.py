"""
Augmentações estocásticas (shear e crop temporal).

São funções puras de (sequência, gerador): o mesmo fluxo produz sempre a
mesma saída, bit a bit.
"""

from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from src.core.exceptions import ContractError
from src.core.models import AugmentationConfig
from src.data.rng import augment_stream
from src.data.skeleton import SkeletonSequence
from src.data.transforms import resample_frames

# Posições (linha, coluna) fora da diagonal, na ordem de sorteio
_OFF_DIAGONAL = ((0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1))


def shear_matrix(amplitude: float, rng: np.random.Generator) -> np.ndarray:
    """Matriz 3×3 com diagonal unitária e seis coeficientes U[−β, β]."""
    if amplitude < 0:
        raise ContractError("Amplitude de shear deve ser ≥ 0", details={"amplitude": amplitude})
    coefficients = rng.uniform(-amplitude, amplitude, size=len(_OFF_DIAGONAL))
    matrix = np.eye(3)
    for (row, col), value in zip(_OFF_DIAGONAL, coefficients):
        matrix[row, col] = value
    return matrix


def shear_coords(coords: np.ndarray, amplitude: float, rng: np.random.Generator) -> np.ndarray:
    matrix = shear_matrix(amplitude, rng)
    return np.einsum("ij,jtn->itn", matrix, coords)


def shear_augment(
    s: SkeletonSequence, amplitude: float, rng: np.random.Generator
) -> SkeletonSequence:
    """x′ = S·x para toda junta em todo quadro, com S única por sequência."""
    return s.with_coords(shear_coords(s.coords, amplitude, rng))


def crop_coords(coords: np.ndarray, ratio: int, rng: np.random.Generator) -> np.ndarray:
    if ratio < 1:
        raise ContractError("Razão de padding deve ser ≥ 1", details={"ratio": ratio})
    frames = coords.shape[1]
    pad = frames // ratio
    padded = np.pad(coords, ((0, 0), (pad, pad), (0, 0)), mode="reflect") if pad else coords
    start = int(rng.integers(0, 2 * pad + 1))
    length = int(rng.integers(frames, frames + 2 * pad - start + 1))
    return resample_frames(padded[:, start : start + length], frames)


def temporal_crop_augment(
    s: SkeletonSequence, ratio: int, rng: np.random.Generator
) -> SkeletonSequence:
    """
    Crop temporal: reflete p = ⌊T/γ⌋ quadros em cada ponta, sorteia início
    em [0, 2p] e comprimento em [T, T + 2p − início], e reinterpola para T.
    """
    return s.with_coords(crop_coords(s.coords, ratio, rng))


def augment_coords(
    coords: np.ndarray, config: AugmentationConfig, rng: np.random.Generator
) -> np.ndarray:
    """Shear seguido de crop, no mesmo fluxo."""
    sheared = shear_coords(coords, config.shear_amplitude, rng)
    return crop_coords(sheared, config.crop_padding_ratio, rng)


def augment_view(
    s: SkeletonSequence, config: AugmentationConfig, rng: np.random.Generator
) -> SkeletonSequence:
    """Uma vista aumentada da sequência."""
    return s.with_coords(augment_coords(s.coords, config, rng))


def augment_batch(
    coords: Sequence[np.ndarray],
    sample_indices: Sequence[int],
    config: AugmentationConfig,
    epoch: int,
    view: int,
    workers: int = 1,
) -> list[np.ndarray]:
    """
    Aumenta um lote; a amostra i usa o fluxo (seed, época, índice, vista).

    Com workers > 1 as amostras são processadas num pool de threads e o
    resultado mantém a ordem do lote.
    """

    def one(item: tuple[np.ndarray, int]) -> np.ndarray:
        array, index = item
        rng = augment_stream(config.rng_seed, epoch, index, view)
        return augment_coords(array, config, rng)

    items = list(zip(coords, sample_indices))
    if workers <= 1 or len(items) <= 1:
        return [one(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, items))
