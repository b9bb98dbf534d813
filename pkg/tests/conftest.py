"""
Configurações e fixtures compartilhadas para pytest.
"""

from collections.abc import Callable
from pathlib import Path
from typing import Optional

import numpy as np
import pytest

from config.run_config import build_run_config
from src.core.models import AugmentationConfig, RunConfig, STGCNConfig
from src.data.skeleton import Dataset, SkeletonSequence, SkeletonTopology, load_topology
from src.data.synth import synth_generate
from src.encoder import SkeletonEncoder, build_adjacency


# FIXTURES DE DIRETÓRIOS

@pytest.fixture
def temp_data_dir(tmp_path) -> Path:
    """Cria diretório temporário para dados de teste."""
    data_dir = tmp_path / "data"
    data_dir.mkdir()
    return data_dir


@pytest.fixture
def temp_run_dir(tmp_path) -> Path:
    """Cria diretório temporário para saídas de execução."""
    run_dir = tmp_path / "runs"
    run_dir.mkdir()
    return run_dir


# FIXTURES DE ALEATORIEDADE

@pytest.fixture
def rng() -> np.random.Generator:
    """Gerador com seed fixa."""
    return np.random.default_rng(1234)


# FIXTURES DE TOPOLOGIA E SEQUÊNCIAS

@pytest.fixture(scope="session")
def default_topology() -> SkeletonTopology:
    """Topologia padrão de 17 juntas."""
    return load_topology("default17")


@pytest.fixture
def chain_topology() -> SkeletonTopology:
    """Cadeia 0-1-2-3 enraizada em 0."""
    return SkeletonTopology(n_joints=4, edges=((0, 1), (1, 2), (2, 3)), root=0)


@pytest.fixture
def random_sequence(rng, default_topology) -> SkeletonSequence:
    """Sequência aleatória 3×20×17."""
    return SkeletonSequence(
        rng.normal(size=(3, 20, default_topology.n_joints)), label=1, subject_id=3
    )


# FIXTURES DE ENCODER

@pytest.fixture
def toy_config() -> STGCNConfig:
    """Encoder de dois blocos para verificação de gradientes."""
    return STGCNConfig(widths=[3, 4], kernel=3, strides=[1, 2], embed_dim=3)


@pytest.fixture
def toy_encoder(toy_config, chain_topology) -> SkeletonEncoder:
    """Encoder variacional inicializado sobre a cadeia de 4 juntas."""
    return SkeletonEncoder.initialize(toy_config, build_adjacency(chain_topology), seed=0)


@pytest.fixture
def augmentation() -> AugmentationConfig:
    """Augmentação padrão com seed fixa."""
    return AugmentationConfig(shear_amplitude=0.5, crop_padding_ratio=6, rng_seed=42)


# FIXTURES DE DATASETS

@pytest.fixture(scope="session")
def small_dataset(default_topology) -> Dataset:
    """Dataset sintético: 3 classes × 10 amostras × 12 quadros."""
    return synth_generate(n_classes=3, per_class=10, topology=default_topology, frames=12, seed=0)


# FIXTURES DE CONFIGURAÇÃO

TINY_RUN = {
    "data.classes": "3",
    "data.per_class": "10",
    "data.frames": "12",
    "encoder.preset": "desk",
    "encoder.embed_dim": "8",
    "contrastive.queue_size": "16",
    "train.epochs": "1",
    "train.milestone": "none",
    "train.batch_size": "8",
    "eval.epochs": "2",
    "eval.milestone": "none",
    "eval.batch_size": "8",
    "eval.fraction": "0.5",
}


@pytest.fixture
def make_config(temp_run_dir) -> Callable[..., RunConfig]:
    """
    Fábrica de RunConfig de bancada reduzida.
    Chaves pontuadas entram como dicionário: make_config({"seed": "3"}).
    """

    def factory(overrides: Optional[dict[str, str]] = None) -> RunConfig:
        values = {"output_dir": str(temp_run_dir / "tiny"), **(overrides or {})}
        return build_run_config(TINY_RUN, values, require_checkpoint=False)

    return factory


@pytest.fixture
def tiny_run_config(make_config) -> RunConfig:
    """Pré-treino mínimo gravando no diretório temporário."""
    return make_config()
