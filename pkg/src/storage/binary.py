"""
Leitura e escrita de campos binários little-endian com rastreio de offset.
"""

import struct
from typing import Optional

import numpy as np

from src.core.exceptions import DataFormatError

_U32 = struct.Struct("<I")
_U64 = struct.Struct("<Q")
_F64 = np.dtype("<f8")


class BinaryWriter:
    """Acumula campos num buffer em memória."""

    def __init__(self) -> None:
        self._buffer = bytearray()

    def raw(self, data: bytes) -> None:
        self._buffer += data

    def u32(self, value: int) -> None:
        self._buffer += _U32.pack(value)

    def u64(self, value: int) -> None:
        self._buffer += _U64.pack(value)

    def f64_array(self, array: np.ndarray) -> None:
        """Payload float64 em ordem row-major."""
        self._buffer += np.ascontiguousarray(array, dtype=_F64).tobytes()

    def getvalue(self) -> bytes:
        return bytes(self._buffer)


class BinaryReader:
    """
    Cursor sobre bytes; toda falha vira DataFormatError com o offset
    do campo que não pôde ser lido.
    """

    def __init__(self, data: bytes, path: Optional[str] = None):
        self._data = data
        self.offset = 0
        self.path = path

    def error(self, message: str, offset: Optional[int] = None) -> DataFormatError:
        return DataFormatError(
            message, offset=self.offset if offset is None else offset, path=self.path
        )

    def take(self, size: int, what: str) -> bytes:
        if self.offset + size > len(self._data):
            raise self.error(f"Arquivo truncado ao ler {what}")
        chunk = self._data[self.offset : self.offset + size]
        self.offset += size
        return chunk

    def u32(self, what: str) -> int:
        return _U32.unpack(self.take(_U32.size, what))[0]

    def u64(self, what: str) -> int:
        return _U64.unpack(self.take(_U64.size, what))[0]

    def f64_array(self, shape: tuple[int, ...], what: str) -> np.ndarray:
        count = int(np.prod(shape)) if shape else 1
        chunk = self.take(count * _F64.itemsize, what)
        return np.frombuffer(chunk, dtype=_F64).astype(np.float64).reshape(shape)

    def expect_end(self) -> None:
        if self.offset != len(self._data):
            raise self.error(f"{len(self._data) - self.offset} bytes excedentes no fim do arquivo")
