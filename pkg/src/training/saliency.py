"""
Mapa de importância junta × frame por ativações ponderadas pelo gradiente.
"""

import numpy as np

from src.core.exceptions import ContractError, DimensionError
from src.data.skeleton import SkeletonSequence
from src.data.transforms import encoder_batch, resample_frames
from src.encoder.stgcn import last_spatial_key
from src.numerics import Tape, backward, reduce_sum, take_along
from src.storage.checkpoint_store import CheckpointBundle
from src.training.checkpoint import classifier_from_bundle, encoder_from_bundle


def grad_cam_map(activation: np.ndarray, gradient: np.ndarray, frames: int) -> np.ndarray:
    """
    ReLU(Σ_c w_c·A_c) com w_c = média do gradiente no canal c, levado a
    T×N e normalizado pelo máximo (ou todo zero).

    Args:
        activation: Ativação [C, T', N]
        gradient: Gradiente da logit alvo na mesma forma
        frames: T de saída
    """
    if activation.shape != gradient.shape or activation.ndim != 3:
        raise DimensionError(
            "Ativação e gradiente devem ser [C, T', N]",
            expected=activation.shape,
            got=gradient.shape,
        )
    weights = gradient.mean(axis=(1, 2))
    cam = np.maximum(np.einsum("c,ctn->tn", weights, activation), 0.0)
    if cam.shape[0] != frames:
        if cam.shape[0] == 1:
            cam = np.repeat(cam, frames, axis=0)
        else:
            cam = resample_frames(cam, frames, axis=0)
    peak = cam.max()
    if peak <= 0.0:
        return np.zeros_like(cam)
    return cam / peak


def joint_saliency(
    checkpoint: CheckpointBundle, sample: SkeletonSequence, target_class: int
) -> np.ndarray:
    """
    Importância [T, N] da amostra para a classe alvo, na última camada
    espacial do encoder.

    Raises:
        ContractError: Checkpoint sem classificador ou classe fora do intervalo
        DimensionError: Amostra com outro número de juntas
    """
    # Parâmetros na fita para que a ativação receba gradiente
    encoder = encoder_from_bundle(checkpoint, requires_grad=True)
    classifier = classifier_from_bundle(checkpoint, requires_grad=True)
    if not 0 <= target_class < classifier.n_classes:
        raise ContractError(
            "Classe alvo fora do intervalo",
            details={"target": target_class, "classes": classifier.n_classes},
        )
    if sample.joints != encoder.adjacency.n_joints:
        raise DimensionError(
            "Amostra com outro número de juntas",
            expected=encoder.adjacency.n_joints,
            got=sample.joints,
        )

    capture: dict = {}
    x = encoder_batch([sample.coords])
    with Tape() as tape:
        mu, _ = encoder.embed(x, capture)
        score = reduce_sum(take_along(classifier.logits(mu), [target_class]))
    activation = capture[last_spatial_key(encoder.config)]
    backward(tape, score)
    gradient = activation.grad if activation.grad is not None else np.zeros(activation.shape)
    return grad_cam_map(activation.data[0], gradient[0], sample.frames)
