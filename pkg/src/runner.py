"""
ExperimentRunner: orquestrador de uma execução.
Resolve dados e modalidades, despacha o protocolo e grava métricas,
checkpoints e a configuração resolvida no diretório de saída.
"""

from collections.abc import Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from config.logging_config import LoggerMixin, run_context
from config.settings import Settings, get_settings
from src.core.exceptions import ContractError
from src.core.models import MetricsRecord, RunConfig
from src.core.types import Protocol, Split, Stream
from src.data.sampling import DataSplit
from src.storage import CheckpointBundle, StorageManager, load_checkpoint, resolve_checkpoint
from src.training.checkpoint import bundle_stream
from src.training.datasets import load_run_dataset, run_split, stream_split
from src.training.embeddings import classify_dataset
from src.training.fusion import fuse_batch
from src.training.metrics import predict, top1_accuracy
from src.training.protocols import DownstreamTrainer, pretrain


@dataclass
class RunSummary:
    """Resumo do que uma execução produziu."""

    output_dir: Path
    protocol: Protocol
    records: list[MetricsRecord] = field(default_factory=list)
    checkpoints: list[Path] = field(default_factory=list)
    stream_top1: dict[str, float] = field(default_factory=dict)
    fused_top1: Optional[float] = None


class ExperimentRunner(LoggerMixin):
    """
    Orquestrador de execuções.

    Responsabilidades:
    - Carregar ou sintetizar o dataset e separar treino/teste por sujeito
    - Derivar as modalidades pedidas (todas, com stream = all)
    - Rodar o protocolo por modalidade e fundir as predições
    - Persistir métricas, checkpoints e a configuração resolvida
    """

    def __init__(self, config: RunConfig, settings: Optional[Settings] = None):
        """
        Inicializa o orquestrador.

        Args:
            config: Configuração resolvida
            settings: Configurações de processo (None = get_settings())
        """
        self.config = config
        self.settings = settings or get_settings()
        self.output_dir = self.settings.resolve_output(config.output_dir)
        self.storage = StorageManager(self.output_dir)

        self.logger.info(
            "ExperimentRunner inicializado",
            protocol=config.protocol.value,
            stream=config.stream.value,
            output_dir=str(self.output_dir),
        )

    # Dados e modalidades

    @property
    def multi_stream(self) -> bool:
        return self.config.stream is Stream.ALL

    def streams(self) -> list[Stream]:
        return Stream.singles() if self.multi_stream else [self.config.stream]

    def storage_for(self, stream: Stream) -> StorageManager:
        return self.storage.for_stream(stream) if self.multi_stream else self.storage

    def load_split(self) -> DataSplit:
        split = run_split(self.config, load_run_dataset(self.config))
        self.logger.info("Dados carregados", train=len(split.train), test=len(split.test))
        return split

    # Execução

    def run(self) -> RunSummary:
        """
        Executa o protocolo configurado.

        Returns:
            RunSummary com registros e caminhos gravados
        """
        self.storage.write_resolved_config(self.config)
        summary = RunSummary(output_dir=self.output_dir, protocol=self.config.protocol)

        with run_context(seed=self.config.seed, protocol=self.config.protocol.value):
            split = self.load_split()
            if self.config.protocol is Protocol.PRETRAIN:
                self._run_pretrain(split, summary)
            else:
                self._run_downstream(split, summary)

        self.logger.info(
            "Execução concluída",
            protocol=self.config.protocol.value,
            records=len(summary.records),
            checkpoints=len(summary.checkpoints),
        )
        return summary

    def _recorder(self, storage: StorageManager, summary: RunSummary):
        def record(entry: MetricsRecord) -> None:
            storage.append_metric(entry)
            summary.records.append(entry)

        return record

    def _resume_bundle(self, stream: Stream) -> Optional[CheckpointBundle]:
        if self.config.train.resume is None:
            return None
        return load_checkpoint(resolve_checkpoint(self.config.train.resume, stream))

    def _run_pretrain(self, split: DataSplit, summary: RunSummary) -> None:
        for stream in self.streams():
            storage = self.storage_for(stream)
            data = stream_split(split, stream)
            with run_context(stream=stream.value):
                bundle = pretrain(
                    data.train,
                    self.config,
                    stream,
                    on_record=self._recorder(storage, summary),
                    resume=self._resume_bundle(stream),
                )
            summary.checkpoints.append(storage.save_checkpoint(bundle, Protocol.PRETRAIN))

    def _pretrained_bundle(self, stream: Stream) -> CheckpointBundle:
        """
        Raises:
            ContractError: Checkpoint de outra modalidade
        """
        reference = self.config.eval.checkpoint
        if reference is None:
            raise ContractError("Protocolo downstream sem checkpoint")
        bundle = load_checkpoint(resolve_checkpoint(reference, stream))
        if bundle_stream(bundle) is not stream:
            raise ContractError(
                "Checkpoint treinado em outra modalidade",
                details={"expected": stream.value, "found": bundle_stream(bundle).value},
            )
        return bundle

    def _run_downstream(self, split: DataSplit, summary: RunSummary) -> None:
        logits: list[np.ndarray] = []
        test_labels = split.test.labels
        for stream in self.streams():
            storage = self.storage_for(stream)
            trainer = DownstreamTrainer(
                self._pretrained_bundle(stream),
                stream_split(split, stream),
                self.config,
                self.config.protocol,
                on_record=self._recorder(storage, summary),
            )
            with run_context(stream=stream.value):
                result = trainer.run()
            summary.checkpoints.append(storage.save_checkpoint(result.bundle, self.config.protocol))
            summary.stream_top1[stream.value] = float(result.record.top1 or 0.0)
            logits.append(result.test_logits)

        if self.multi_stream:
            summary.fused_top1 = self._record_fusion(logits, test_labels, summary)

    def _record_fusion(
        self,
        logits: Sequence[np.ndarray],
        labels: np.ndarray,
        summary: RunSummary,
        weights: Optional[Sequence[float]] = None,
    ) -> float:
        weights = list(weights if weights is not None else self.config.fusion.weights)
        top1 = top1_accuracy(fuse_batch(logits, weights), labels)
        record = MetricsRecord(
            epoch=max(self.config.eval.epochs - 1, 0),
            split=Split.FUSION.value,
            protocol=self.config.protocol.value,
            top1=top1,
        )
        self.storage.append_metric(record)
        summary.records.append(record)
        self.logger.info("Fusão concluída", weights=weights, top1=top1)
        return top1

    def fuse(self, weights: Optional[Sequence[float]] = None) -> RunSummary:
        """
        Refaz a fusão a partir dos checkpoints downstream já gravados em
        `<output_dir>/<stream>/<protocolo>.vclc`.

        Raises:
            ContractError: Protocolo de pré-treino (sem classificador)
        """
        protocol = self.config.protocol
        if not protocol.is_downstream:
            raise ContractError(
                "Fusão exige um protocolo downstream", details={"protocol": protocol.value}
            )
        split = self.load_split()
        summary = RunSummary(output_dir=self.output_dir, protocol=protocol)
        logits: list[np.ndarray] = []
        for stream in Stream.singles():
            storage = self.storage.for_stream(stream)
            bundle = storage.load_checkpoint(protocol)
            stream_logits = classify_dataset(bundle, stream_split(split, stream).test)
            summary.stream_top1[stream.value] = top1_accuracy(
                predict(stream_logits), split.test.labels
            )
            logits.append(stream_logits)
        summary.fused_top1 = self._record_fusion(logits, split.test.labels, summary, weights)
        return summary
