"""
Comparação pareada VCL × variante determinística no protocolo
semi-supervisionado.
"""

from collections.abc import Sequence
from typing import Any, Optional

import pandas as pd

from config.logging_config import get_logger
from src.core.models import RunConfig
from src.core.types import Protocol, Stream
from src.data.sampling import DataSplit
from src.training.datasets import load_run_dataset, run_split, stream_split
from src.training.protocols import DownstreamTrainer, pretrain

ABLATION_COLUMNS = ["seed", "vcl_top1", "baseline_top1", "delta"]

# Piso de não inferioridade (pontos de acurácia)
NON_INFERIORITY_MARGIN = 0.02


def _semi_top1(config: RunConfig, split: DataSplit, stream: Stream, fraction: float) -> float:
    checkpoint = pretrain(split.train, config, stream)
    trainer = DownstreamTrainer(checkpoint, split, config, Protocol.SEMI, fraction)
    top1 = trainer.run().record.top1
    return float(top1 if top1 is not None else 0.0)


def run_ablation(
    config: RunConfig,
    seeds: Sequence[int],
    fraction: float,
    split: Optional[DataSplit] = None,
) -> pd.DataFrame:
    """
    Para cada seed: pré-treina VCL e a variante determinística nos mesmos
    dados, roda o semi-supervisionado em `fraction` e pareia os top-1.

    Args:
        config: Configuração base (protocolo e variante são sobrescritos)
        seeds: Seeds pareadas
        fraction: Fração rotulada
        split: Partição fixa; se None, os dados vêm da configuração de cada seed

    Returns:
        DataFrame com colunas seed, vcl_top1, baseline_top1, delta
    """
    logger = get_logger("ablation", fraction=fraction)
    stream = Stream.JOINT if config.stream is Stream.ALL else config.stream
    rows: list[dict[str, Any]] = []
    for seed in seeds:
        seeded = config.model_copy(update={"seed": int(seed)})
        data = split if split is not None else run_split(seeded, load_run_dataset(seeded))
        data = stream_split(data, stream)

        vcl = _semi_top1(seeded.model_copy(update={"variational": True}), data, stream, fraction)
        baseline = _semi_top1(
            seeded.model_copy(update={"variational": False}), data, stream, fraction
        )
        rows.append(
            {"seed": int(seed), "vcl_top1": vcl, "baseline_top1": baseline, "delta": vcl - baseline}
        )
        logger.info("Seed comparada", seed=seed, vcl=vcl, baseline=baseline)

    return pd.DataFrame(rows, columns=ABLATION_COLUMNS)


def ablation_summary(frame: pd.DataFrame) -> dict[str, Any]:
    """Médias pareadas e o teste de não inferioridade do VCL."""
    vcl_mean = float(frame["vcl_top1"].mean())
    baseline_mean = float(frame["baseline_top1"].mean())
    return {
        "seeds": int(len(frame)),
        "vcl_mean": vcl_mean,
        "baseline_mean": baseline_mean,
        "delta_mean": vcl_mean - baseline_mean,
        "non_inferior": vcl_mean >= baseline_mean - NON_INFERIORITY_MARGIN,
    }
