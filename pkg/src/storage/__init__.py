"""
Módulo de storage: persistência dos artefatos de execução.
Suporta dataset SKL1, checkpoint VCLC, métricas JSONL e dumps em texto.
"""

from src.storage.base import BaseStore, StorageType
from src.storage.checkpoint_store import (
    CheckpointBundle,
    CheckpointStore,
    load_checkpoint,
    save_checkpoint,
)
from src.storage.dataset_store import (
    DatasetStore,
    export_manifest,
    load_dataset,
    read_manifest,
    save_dataset,
)
from src.storage.file_storage import MetricsStore, TextStore
from src.storage.manager import StorageManager, resolve_checkpoint

__all__ = [
    "BaseStore",
    "StorageType",
    "CheckpointBundle",
    "CheckpointStore",
    "DatasetStore",
    "MetricsStore",
    "TextStore",
    "StorageManager",
    "export_manifest",
    "load_checkpoint",
    "load_dataset",
    "read_manifest",
    "resolve_checkpoint",
    "save_checkpoint",
    "save_dataset",
]
