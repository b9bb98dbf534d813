"""
Classe base abstrata para storage.
Define a interface comum dos formatos persistidos de uma execução.
"""

from abc import ABC, abstractmethod
from enum import Enum
from pathlib import Path

from config.logging_config import LoggerMixin
from src.core.exceptions import DataFormatError


class StorageType(str, Enum):
    """Tipos de artefato persistido."""
    DATASET = "dataset"
    CHECKPOINT = "checkpoint"
    METRICS = "metrics"
    TEXT = "text"


class BaseStore(ABC, LoggerMixin):
    """
    Classe base abstrata para os formatos de arquivo.
    Subclasses implementam apenas a (de)serialização.
    """

    @property
    @abstractmethod
    def storage_type(self) -> StorageType:
        """Retorna o tipo de storage."""
        pass

    @staticmethod
    def _ensure_parent(path: Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        return path

    def _unreadable(self, path: Path, error: OSError) -> DataFormatError:
        return DataFormatError(
            "Arquivo ilegível",
            path=str(path),
            details={"type": self.storage_type.value},
            cause=error,
        )

    def _read_bytes(self, path: Path) -> bytes:
        """Lê o arquivo inteiro; falhas de E/S viram DataFormatError com o caminho."""
        try:
            return Path(path).read_bytes()
        except OSError as e:
            raise self._unreadable(path, e) from e

    def _read_text(self, path: Path) -> str:
        try:
            return Path(path).read_text(encoding="utf-8")
        except OSError as e:
            raise self._unreadable(path, e) from e

    def _write_bytes(self, path: Path, data: bytes) -> Path:
        """Grava o arquivo inteiro de uma vez."""
        path = self._ensure_parent(path)
        path.write_bytes(data)
        self.logger.debug(
            "Arquivo gravado", path=str(path), bytes=len(data), type=self.storage_type.value
        )
        return path

    def _write_text(self, path: Path, text: str) -> Path:
        path = self._ensure_parent(path)
        path.write_text(text, encoding="utf-8")
        self.logger.debug("Arquivo gravado", path=str(path), type=self.storage_type.value)
        return path
