"""
Arquivo de checkpoint VCLC.

Layout: magic "VCLC", u32 versão, u64 hash da configuração, u32 número
de tensores; por tensor: u32 tamanho do nome, nome UTF-8, u32 rank,
extents u64 e payload float64. Parâmetros, estado do otimizador, fila
e estado do RNG usam o mesmo envelope, na ordem de inserção.
"""

from collections.abc import Iterator, Mapping
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

import numpy as np

from src.core.constants import CHECKPOINT_MAGIC, CHECKPOINT_VERSION
from src.core.exceptions import ContractError
from src.storage.base import BaseStore, StorageType
from src.storage.binary import BinaryReader, BinaryWriter


@dataclass
class CheckpointBundle:
    """Tensores nomeados de uma execução mais o hash da configuração."""

    config_hash: int
    tensors: dict[str, np.ndarray] = field(default_factory=dict)

    def __contains__(self, name: str) -> bool:
        return name in self.tensors

    def __iter__(self) -> Iterator[str]:
        return iter(self.tensors)

    def put(self, name: str, value: Any) -> None:
        self.tensors[name] = np.array(value, dtype=np.float64)

    def get(self, name: str) -> np.ndarray:
        """
        Raises:
            ContractError: Tensor ausente
        """
        if name not in self.tensors:
            raise ContractError(f"Checkpoint sem o tensor {name}", details={"name": name})
        return self.tensors[name]

    def scalar(self, name: str) -> float:
        return float(self.get(name).reshape(()))

    def integers(self, name: str) -> list[int]:
        return [int(v) for v in self.get(name).reshape(-1)]

    def group(self, prefix: str) -> dict[str, np.ndarray]:
        """Tensores sob `prefix.`, com o prefixo removido, na ordem original."""
        start = f"{prefix}."
        return {
            name[len(start) :]: value
            for name, value in self.tensors.items()
            if name.startswith(start)
        }

    def put_group(self, prefix: str, values: Mapping[str, np.ndarray]) -> None:
        for name, value in values.items():
            self.put(f"{prefix}.{name}", value)

    def has_group(self, prefix: str) -> bool:
        return any(name.startswith(f"{prefix}.") for name in self.tensors)


class CheckpointStore(BaseStore):
    """Serialização de CheckpointBundle no formato VCLC."""

    @property
    def storage_type(self) -> StorageType:
        return StorageType.CHECKPOINT

    def encode(self, bundle: CheckpointBundle) -> bytes:
        writer = BinaryWriter()
        writer.raw(CHECKPOINT_MAGIC)
        writer.u32(CHECKPOINT_VERSION)
        writer.u64(bundle.config_hash)
        writer.u32(len(bundle.tensors))
        for name, value in bundle.tensors.items():
            encoded = name.encode("utf-8")
            writer.u32(len(encoded))
            writer.raw(encoded)
            writer.u32(value.ndim)
            for extent in value.shape:
                writer.u64(extent)
            writer.f64_array(value)
        return writer.getvalue()

    def decode(self, data: bytes, path: Optional[str] = None) -> CheckpointBundle:
        """
        Raises:
            DataFormatError: Magic, versão ou payload inválidos
        """
        reader = BinaryReader(data, path)
        if reader.take(len(CHECKPOINT_MAGIC), "magic") != CHECKPOINT_MAGIC:
            raise reader.error("Magic inválido (esperado VCLC)", offset=0)
        version_at = reader.offset
        if reader.u32("versão") != CHECKPOINT_VERSION:
            raise reader.error("Versão de checkpoint não suportada", offset=version_at)

        bundle = CheckpointBundle(config_hash=reader.u64("hash"))
        count = reader.u32("número de tensores")
        for _ in range(count):
            name_at = reader.offset
            raw_name = reader.take(reader.u32("tamanho do nome"), "nome")
            try:
                name = raw_name.decode("utf-8")
            except UnicodeDecodeError as e:
                raise reader.error("Nome de tensor não é UTF-8", offset=name_at) from e
            if name in bundle.tensors:
                raise reader.error(f"Tensor repetido: {name}", offset=name_at)
            rank = reader.u32(f"rank de {name}")
            shape = tuple(reader.u64(f"extent de {name}") for _ in range(rank))
            bundle.tensors[name] = reader.f64_array(shape, f"payload de {name}")
        reader.expect_end()
        return bundle

    def save(self, bundle: CheckpointBundle, path: Path) -> Path:
        written = self._write_bytes(path, self.encode(bundle))
        self.logger.info("Checkpoint salvo", path=str(written), tensors=len(bundle.tensors))
        return written

    def load(self, path: Path) -> CheckpointBundle:
        path = Path(path)
        bundle = self.decode(self._read_bytes(path), str(path))
        self.logger.info("Checkpoint carregado", path=str(path), tensors=len(bundle.tensors))
        return bundle


def save_checkpoint(bundle: CheckpointBundle, path: Path) -> Path:
    return CheckpointStore().save(bundle, path)


def load_checkpoint(path: Path) -> CheckpointBundle:
    return CheckpointStore().load(path)
