"""
Gerenciador de storage.
Unifica o acesso aos artefatos de uma execução sob um diretório de saída.
"""

from pathlib import Path
from typing import Optional

import pandas as pd

from config.logging_config import LoggerMixin
from config.run_config import dump_resolved
from src.core.constants import CHECKPOINT_SUFFIX, METRICS_FILENAME
from src.core.models import MetricsRecord, RunConfig
from src.core.types import Protocol, Stream
from src.storage.checkpoint_store import CheckpointBundle, CheckpointStore
from src.storage.file_storage import MetricsStore, TextStore

RESOLVED_CONFIG_FILENAME = "resolved.cfg"


class StorageManager(LoggerMixin):
    """
    Gerenciador dos artefatos de uma execução.

    Layout do diretório:
        resolved.cfg          configuração resolvida
        metrics.jsonl         métricas (acrescentadas)
        <protocolo>.vclc      checkpoints
        <stream>/...          o mesmo layout por modalidade (stream = all)
    """

    def __init__(self, output_dir: Path):
        """
        Inicializa o gerenciador.

        Args:
            output_dir: Diretório de saída da execução
        """
        self.output_dir = Path(output_dir)
        self.checkpoints = CheckpointStore()
        self.metrics = MetricsStore()
        self.text = TextStore()

    def for_stream(self, stream: Stream) -> "StorageManager":
        """Gerenciador do subdiretório de uma modalidade."""
        return StorageManager(self.output_dir / stream.value)

    # Caminhos

    @property
    def metrics_path(self) -> Path:
        return self.output_dir / METRICS_FILENAME

    @property
    def resolved_config_path(self) -> Path:
        return self.output_dir / RESOLVED_CONFIG_FILENAME

    def checkpoint_path(self, protocol: Protocol) -> Path:
        return self.output_dir / f"{protocol.value}{CHECKPOINT_SUFFIX}"

    # Escrita

    def write_resolved_config(self, config: RunConfig) -> Path:
        return self.text.write_text(self.resolved_config_path, dump_resolved(config))

    def append_metrics(self, records: list[MetricsRecord]) -> int:
        return self.metrics.append(self.metrics_path, records)

    def append_metric(self, record: MetricsRecord) -> None:
        self.metrics.append(self.metrics_path, [record])

    def save_checkpoint(self, bundle: CheckpointBundle, protocol: Protocol) -> Path:
        return self.checkpoints.save(bundle, self.checkpoint_path(protocol))

    def write_table(self, name: str, frame: pd.DataFrame) -> Path:
        return self.text.write_table(self.output_dir / name, frame)

    # Leitura

    def load_checkpoint(self, protocol: Protocol) -> CheckpointBundle:
        return self.checkpoints.load(self.checkpoint_path(protocol))

    def read_metrics(self) -> list[MetricsRecord]:
        if not self.metrics_path.exists():
            return []
        return self.metrics.read(self.metrics_path)


def resolve_checkpoint(reference: Path, stream: Optional[Stream] = None) -> Path:
    """
    Resolve eval.checkpoint: arquivo usado como está; diretório aponta para
    `pretrain.vclc` dentro dele (ou do subdiretório da modalidade).
    """
    reference = Path(reference)
    if reference.is_dir():
        base = reference
        if stream is not None and (reference / stream.value).is_dir():
            base = reference / stream.value
        return base / f"{Protocol.PRETRAIN.value}{CHECKPOINT_SUFFIX}"
    return reference
