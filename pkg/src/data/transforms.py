"""
Transformações determinísticas de sequências: reamostragem temporal,
centralização, padronização e derivação das modalidades bone/motion.
"""

import numpy as np

from src.core.exceptions import DegenerateInputError, DimensionError
from src.core.types import Stream
from src.data.skeleton import Dataset, SkeletonSequence, SkeletonTopology


def resample_frames(coords: np.ndarray, frames_out: int, axis: int = 1) -> np.ndarray:
    """
    Interpolação linear ao longo de `axis` numa grade uniforme
    [0, T−1] -> [0, T_out−1].

    Extremos são copiados exatamente e trechos constantes permanecem
    constantes (a + (b − a)·f com b == a).
    """
    frames_in = coords.shape[axis]
    if frames_in < 2 or frames_out < 2:
        raise DegenerateInputError(
            "Interpolação exige T ≥ 2 e T_out ≥ 2",
            details={"frames_in": frames_in, "frames_out": frames_out},
        )
    positions = np.linspace(0.0, frames_in - 1, frames_out)
    lo = np.minimum(np.floor(positions).astype(np.int64), frames_in - 1)
    hi = np.minimum(lo + 1, frames_in - 1)
    frac = positions - lo

    a = np.take(coords, lo, axis=axis)
    b = np.take(coords, hi, axis=axis)
    shape = [1] * coords.ndim
    shape[axis] = frames_out
    return a + (b - a) * frac.reshape(shape)


def interpolate_to_length(s: SkeletonSequence, frames_out: int) -> SkeletonSequence:
    """Reamostra a sequência para exatamente `frames_out` quadros."""
    return s.with_coords(resample_frames(s.coords, frames_out))


def center_on_root(s: SkeletonSequence, topology: SkeletonTopology) -> SkeletonSequence:
    """Subtrai a posição da raiz no quadro 0 de todas as juntas e quadros."""
    _check_topology(s, topology)
    origin = s.coords[:, 0:1, topology.root : topology.root + 1]
    return s.with_coords(s.coords - origin)


def standardize(s: SkeletonSequence) -> SkeletonSequence:
    """Média zero e variância unitária sobre todas as coordenadas."""
    return s.with_coords(standardize_array(s.coords))


def standardize_array(coords: np.ndarray) -> np.ndarray:
    """Versão em array de `standardize`; sequência constante é só centralizada."""
    centered = coords - coords.mean()
    std = centered.std()
    return centered / std if std > 0 else centered


def _check_topology(s: SkeletonSequence, topology: SkeletonTopology) -> None:
    if s.joints != topology.n_joints:
        raise DimensionError(
            "Topologia não casa com o número de juntas",
            expected=topology.n_joints,
            got=s.joints,
        )


def derive_bone_stream(s: SkeletonSequence, topology: SkeletonTopology) -> SkeletonSequence:
    """bone[·, t, filho] = coords[·, t, filho] − coords[·, t, pai]; raiz zerada."""
    _check_topology(s, topology)
    bones = np.zeros_like(s.coords)
    if topology.edges:
        parents = np.array([p for p, _ in topology.edges])
        children = np.array([c for _, c in topology.edges])
        bones[:, :, children] = s.coords[:, :, children] - s.coords[:, :, parents]
    return s.with_coords(bones)


def derive_motion_stream(s: SkeletonSequence) -> SkeletonSequence:
    """motion[·, t] = coords[·, t+1] − coords[·, t]; último quadro zerado."""
    motion = np.zeros_like(s.coords)
    motion[:, :-1] = s.coords[:, 1:] - s.coords[:, :-1]
    return s.with_coords(motion)


def derive_sequence(
    s: SkeletonSequence, stream: Stream, topology: SkeletonTopology
) -> SkeletonSequence:
    """Aplica a derivação de uma modalidade a uma sequência."""
    if stream is Stream.JOINT:
        return s
    if stream is Stream.BONE:
        return derive_bone_stream(s, topology)
    if stream is Stream.MOTION:
        return derive_motion_stream(s)
    raise DimensionError("Modalidade composta não se aplica a uma sequência", got=stream.value)


def derive_stream(dataset: Dataset, stream: Stream) -> Dataset:
    """Deriva a modalidade para todas as amostras do dataset."""
    if stream is Stream.JOINT:
        return dataset
    return dataset.replace_samples(
        [derive_sequence(s, stream, dataset.topology) for s in dataset.samples]
    )


def prepare_dataset(dataset: Dataset, frames: int) -> Dataset:
    """Receita de pré-processamento: reamostra para `frames` e centraliza na raiz."""
    prepared = []
    for s in dataset.samples:
        if s.frames != frames:
            s = interpolate_to_length(s, frames)
        prepared.append(center_on_root(s, dataset.topology))
    return dataset.replace_samples(prepared)


def encoder_batch(coords: list[np.ndarray]) -> np.ndarray:
    """Empilha sequências padronizadas em [B, C, T, N] para o encoder."""
    return np.stack([standardize_array(c) for c in coords])
