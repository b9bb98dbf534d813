"""
Exportação de μ por amostra para projeção externa (UMAP/PCA) e logits
do classificador gravado.
"""

from pathlib import Path

import numpy as np

from src.data.skeleton import Dataset
from src.data.transforms import encoder_batch
from src.numerics import Tensor, no_grad
from src.storage.checkpoint_store import CheckpointBundle
from src.storage.file_storage import TextStore
from src.training.checkpoint import classifier_from_bundle, encoder_from_bundle


def embed_dataset(checkpoint: CheckpointBundle, dataset: Dataset) -> np.ndarray:
    """μ [n, d] de cada amostra com o encoder query do checkpoint."""
    encoder = encoder_from_bundle(checkpoint)
    if len(dataset) == 0:
        return np.zeros((0, encoder.embed_dim))
    return encoder.embed_mean(encoder_batch([s.coords for s in dataset]))


def embedding_dump(checkpoint: CheckpointBundle, dataset: Dataset, path: Path) -> Path:
    """
    Grava "label,dim=<d>" e uma linha "rótulo,μ₁,…,μ_d" por amostra.

    Raises:
        OSError: Falha de escrita
    """
    vectors = embed_dataset(checkpoint, dataset)
    return TextStore().write_embeddings(path, dataset.labels.tolist(), vectors)


def classify_dataset(checkpoint: CheckpointBundle, dataset: Dataset) -> np.ndarray:
    """Logits [n, K] do classificador do checkpoint sobre μ."""
    classifier = classifier_from_bundle(checkpoint)
    with no_grad():
        return classifier.logits(Tensor(embed_dataset(checkpoint, dataset))).data
