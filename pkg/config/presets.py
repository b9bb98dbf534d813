"""
Presets de execução e de encoder.

Os presets de execução são dicionários planos no mesmo formato do arquivo
de configuração (chaves pontuadas); o arquivo e as flags sobrescrevem
esses valores. Os presets de encoder fixam a arquitetura do ST-GCN.
"""

from typing import Any, Optional

from src.core.models import STGCNConfig
from src.core.types import EncoderPreset, RunPreset


# =============================================================================
# ENCODERS
# =============================================================================

ENCODER_PRESETS: dict[EncoderPreset, STGCNConfig] = {
    EncoderPreset.DESK: STGCNConfig(
        widths=[8, 8, 16, 16],
        kernel=5,
        strides=[1, 1, 2, 1],
        embed_dim=16,
    ),
    # Um quarto dos canais do ST-GCN original (64…256), 10 blocos
    EncoderPreset.PAPER_QUARTER: STGCNConfig(
        widths=[16, 16, 16, 16, 32, 32, 32, 64, 64, 64],
        kernel=9,
        strides=[1, 1, 1, 1, 2, 1, 1, 2, 1, 1],
        embed_dim=128,
    ),
}


def encoder_config(preset: EncoderPreset, embed_dim: Optional[int] = None) -> STGCNConfig:
    """
    Retorna a arquitetura de um preset, com `embed_dim` opcionalmente trocado.

    Args:
        preset: Nome do preset
        embed_dim: Dimensão latente d (None = a do preset)
    """
    base = ENCODER_PRESETS[preset]
    if embed_dim is None or embed_dim == base.embed_dim:
        return base
    return base.model_copy(update={"embed_dim": embed_dim})


# =============================================================================
# EXECUÇÕES
# =============================================================================

RUN_PRESETS: dict[RunPreset, dict[str, Any]] = {
    # Escala de bancada: roda em minutos na CPU
    RunPreset.DESK: {
        "encoder.preset": EncoderPreset.DESK.value,
        "data.frames": 50,
        "contrastive.queue_size": 512,
        "contrastive.momentum": 0.99,
        "contrastive.temperature": 0.07,
        "augment.shear": 0.5,
        "augment.crop_ratio": 6,
        "train.lr": 0.001,
        "train.epochs": 30,
        "train.milestone": 25,
        "train.batch_size": 32,
        "train.weight_decay": 1e-4,
        "eval.lr": 0.03,
        "eval.epochs": 10,
        "eval.milestone": 8,
        "fusion.weights": "0.6,0.6,0.4",
    },
    # Receita publicada (300 épocas, fila de 30K)
    RunPreset.PAPER: {
        "encoder.preset": EncoderPreset.PAPER_QUARTER.value,
        "data.frames": 50,
        "contrastive.queue_size": 30000,
        "contrastive.momentum": 0.999,
        "contrastive.temperature": 0.07,
        "augment.shear": 0.5,
        "augment.crop_ratio": 6,
        "train.lr": 0.001,
        "train.epochs": 300,
        "train.milestone": 250,
        "train.batch_size": 32,
        "train.weight_decay": 1e-4,
        "eval.lr": 0.03,
        "eval.epochs": 100,
        "eval.milestone": 80,
        "fusion.weights": "0.6,0.6,0.4",
    },
}
