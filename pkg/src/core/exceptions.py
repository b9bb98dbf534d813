"""
Hierarquia de exceções do sistema.
Todas as exceções herdam de VCLError para facilitar tratamento.
"""

from typing import Any, Optional


class VCLError(Exception):
    """
    Exceção base do sistema.
    Todas as exceções customizadas herdam desta classe.
    """

    def __init__(
        self,
        message: str,
        *,
        details: Optional[dict[str, Any]] = None,
        cause: Optional[Exception] = None,
    ):
        super().__init__(message)
        self.message = message
        self.details = details or {}
        self.cause = cause

    def __str__(self) -> str:
        base = self.message
        if self.details:
            base += f" | Details: {self.details}"
        if self.cause:
            base += f" | Caused by: {self.cause}"
        return base

    def to_dict(self) -> dict[str, Any]:
        """Serializa exceção para dicionário."""
        return {
            "error_type": self.__class__.__name__,
            "message": self.message,
            "details": self.details,
            "cause": str(self.cause) if self.cause else None,
        }


# EXCEÇÕES NUMÉRICAS

class DimensionError(VCLError):
    """Formas de tensores incompatíveis."""

    def __init__(
        self,
        message: str,
        *,
        expected: Optional[Any] = None,
        got: Optional[Any] = None,
        **kwargs,
    ):
        details = kwargs.pop("details", {})
        if expected is not None:
            details["expected"] = str(expected)
        if got is not None:
            details["got"] = str(got)
        super().__init__(message, details=details, **kwargs)
        self.expected = expected
        self.got = got


class DegenerateInputError(VCLError):
    """Entrada degenerada (vetor nulo, sequência curta demais, etc)."""
    pass


class ContractError(VCLError):
    """Pré-condição de uma operação violada."""
    pass


class NonFiniteError(VCLError):
    """NaN ou Inf produzido por uma operação ou presente num gradiente."""

    def __init__(
        self,
        message: str = "Valor não finito detectado",
        *,
        operation: Optional[str] = None,
        **kwargs,
    ):
        details = kwargs.pop("details", {})
        if operation:
            details["operation"] = operation
        super().__init__(message, details=details, **kwargs)
        self.operation = operation


# EXCEÇÕES DE DADOS

class DataFormatError(VCLError):
    """Arquivo binário com formato inválido."""

    def __init__(
        self,
        message: str,
        *,
        offset: Optional[int] = None,
        path: Optional[str] = None,
        **kwargs,
    ):
        details = kwargs.pop("details", {})
        if offset is not None:
            details["offset"] = offset
        if path:
            details["path"] = path
        super().__init__(message, details=details, **kwargs)
        self.offset = offset
        self.path = path


class InsufficientLabelsError(VCLError):
    """Subconjunto rotulado ficaria sem amostras em alguma classe."""

    def __init__(
        self,
        message: str = "Rótulos insuficientes por classe",
        *,
        class_index: Optional[int] = None,
        **kwargs,
    ):
        details = kwargs.pop("details", {})
        if class_index is not None:
            details["class_index"] = class_index
        super().__init__(message, details=details, **kwargs)
        self.class_index = class_index


# EXCEÇÕES DE CONFIGURAÇÃO E PERSISTÊNCIA

class ConfigError(VCLError):
    """Configuração de execução inválida."""

    def __init__(
        self,
        message: str,
        *,
        key: Optional[str] = None,
        **kwargs,
    ):
        details = kwargs.pop("details", {})
        if key:
            details["key"] = key
        super().__init__(message, details=details, **kwargs)
        self.key = key


class CheckpointMismatchError(VCLError):
    """Checkpoint produzido por outra configuração."""

    def __init__(
        self,
        message: str = "Hash de configuração diverge do checkpoint",
        *,
        expected_hash: Optional[int] = None,
        found_hash: Optional[int] = None,
        **kwargs,
    ):
        details = kwargs.pop("details", {})
        if expected_hash is not None:
            details["expected_hash"] = f"{expected_hash:016x}"
        if found_hash is not None:
            details["found_hash"] = f"{found_hash:016x}"
        super().__init__(message, details=details, **kwargs)
