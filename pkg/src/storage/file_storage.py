"""
Storage em arquivos de texto: métricas JSONL, dump de embeddings,
mapas de saliência e tabelas CSV (pandas).
"""

from collections.abc import Iterable, Sequence
from pathlib import Path

import numpy as np
import pandas as pd

from src.core.exceptions import ContractError, DataFormatError
from src.core.models import MetricsRecord
from src.storage.base import BaseStore, StorageType


class MetricsStore(BaseStore):
    """
    Métricas como JSON lines, um MetricsRecord por linha.
    Componentes ausentes são gravados como null.
    """

    @property
    def storage_type(self) -> StorageType:
        return StorageType.METRICS

    def append(self, path: Path, records: Iterable[MetricsRecord]) -> int:
        """
        Acrescenta registros ao arquivo.

        Returns:
            Número de registros gravados
        """
        path = self._ensure_parent(path)
        lines = [record.model_dump_json() for record in records]
        if lines:
            with path.open("a", encoding="utf-8") as handle:
                handle.write("\n".join(lines) + "\n")
        self.logger.debug("Métricas gravadas", path=str(path), records=len(lines))
        return len(lines)

    def read(self, path: Path) -> list[MetricsRecord]:
        """
        Raises:
            DataFormatError: Linha que não é um MetricsRecord válido
        """
        records = []
        for number, line in enumerate(self._read_text(path).splitlines(), start=1):
            if not line.strip():
                continue
            try:
                records.append(MetricsRecord.model_validate_json(line))
            except ValueError as e:
                raise DataFormatError(f"Linha {number} inválida", path=str(path), cause=e) from e
        return records

    def to_dataframe(self, path: Path) -> pd.DataFrame:
        """Registros como DataFrame (uma coluna por campo)."""
        return pd.DataFrame([record.model_dump() for record in self.read(path)])


class TextStore(BaseStore):
    """Matrizes numéricas em CSV via pandas."""

    @property
    def storage_type(self) -> StorageType:
        return StorageType.TEXT

    @staticmethod
    def _csv(frame: pd.DataFrame) -> str:
        # float_format=None grava repr(float), que relê o mesmo float64
        return frame.to_csv(header=False, index=False, lineterminator="\n")

    @staticmethod
    def _read_csv(path: Path, skiprows: int = 0) -> pd.DataFrame:
        """
        Raises:
            DataFormatError: Linhas com números de campos diferentes ou arquivo ilegível
        """
        try:
            frame = pd.read_csv(
                path, header=None, skiprows=skiprows, float_precision="round_trip"
            )
        except pd.errors.EmptyDataError:
            return pd.DataFrame()
        except pd.errors.ParserError as e:
            raise DataFormatError(
                "CSV com linhas de tamanhos diferentes", path=str(path), cause=e
            ) from e
        except OSError as e:
            raise DataFormatError("Arquivo ilegível", path=str(path), cause=e) from e
        # Linhas curtas viram NaN no pandas
        if frame.isna().to_numpy().any():
            raise DataFormatError("CSV com campos ausentes", path=str(path))
        return frame

    def write_embeddings(self, path: Path, labels: Sequence[int], vectors: np.ndarray) -> Path:
        """
        Cabeçalho "label,dim=<d>" e uma linha "rótulo,v1,…,vd" por amostra.

        Raises:
            ContractError: Rótulos e vetores em quantidades diferentes
        """
        vectors = np.asarray(vectors, dtype=np.float64)
        if vectors.ndim != 2 or vectors.shape[0] != len(labels):
            raise ContractError(
                "Embeddings exigem uma linha por rótulo",
                details={"labels": len(labels), "shape": vectors.shape},
            )
        frame = pd.DataFrame(vectors)
        frame.insert(0, "label", np.asarray(labels, dtype=np.int64))
        header = f"label,dim={vectors.shape[1]}\n"
        return self._write_text(path, header + self._csv(frame))

    def read_embeddings(self, path: Path) -> tuple[list[int], np.ndarray]:
        """Inverso de write_embeddings."""
        header = self._read_text(path).partition("\n")[0].strip()
        if not header.startswith("label,dim="):
            raise DataFormatError("Cabeçalho de embeddings ausente", path=str(path))
        try:
            dim = int(header.split("=", 1)[1])
        except ValueError as e:
            raise DataFormatError("Dimensão inválida no cabeçalho", path=str(path), cause=e) from e
        frame = self._read_csv(path, skiprows=1)
        if frame.empty:
            return [], np.zeros((0, dim))
        if frame.shape[1] != dim + 1:
            raise DataFormatError(
                "Linha de embedding com dimensão errada",
                path=str(path),
                details={"dim": dim, "columns": frame.shape[1]},
            )
        labels = frame.iloc[:, 0].astype(np.int64).tolist()
        return labels, frame.iloc[:, 1:].to_numpy(dtype=np.float64)

    def write_matrix(self, path: Path, matrix: np.ndarray) -> Path:
        """Uma linha por linha da matriz (ex.: mapa de saliência T×N)."""
        frame = pd.DataFrame(np.asarray(matrix, dtype=np.float64))
        return self._write_text(path, self._csv(frame))

    def read_matrix(self, path: Path) -> np.ndarray:
        return self._read_csv(path).to_numpy(dtype=np.float64)

    def write_table(self, path: Path, frame: pd.DataFrame) -> Path:
        """Tabela CSV via pandas."""
        path = self._ensure_parent(path)
        frame.to_csv(path, index=False, encoding="utf-8")
        self.logger.debug("Tabela gravada", path=str(path), rows=len(frame))
        return path

    def write_text(self, path: Path, text: str) -> Path:
        return self._write_text(path, text)
