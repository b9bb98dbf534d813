"""
Logging estruturado do treino usando structlog.

Console colorido em desenvolvimento; JSON (uma linha por evento) com
`VCL_LOG_JSON` ou quando `VCL_LOG_PATH` aponta um diretório. Escalares e
vetores pequenos do NumPy são convertidos antes de renderizar, e o
contexto da execução (seed, protocolo, stream) acompanha cada evento.
"""

import logging
import sys
from collections.abc import Iterator
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Optional, TextIO

import numpy as np
import structlog
from structlog.typing import EventDict, Processor, WrappedLogger

LOG_FILENAME = "skeleton_vcl.log"

# Vetores maiores que isso viram um resumo de forma
_MAX_INLINE_ELEMENTS = 8

# Casas decimais das métricas no console
_CONSOLE_DIGITS = 6

# Arquivo aberto pela última configuração com log_path
_file_sink: Optional[TextIO] = None


def _to_builtin(value: Any) -> Any:
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        if value.size <= _MAX_INLINE_ELEMENTS:
            return value.tolist()
        return f"ndarray{list(value.shape)}"
    if isinstance(value, Path):
        return str(value)
    return value


def numpy_values(_: WrappedLogger, __: str, event_dict: EventDict) -> EventDict:
    """Converte valores NumPy e Path do evento em tipos nativos."""
    return {key: _to_builtin(value) for key, value in event_dict.items()}


def round_floats(_: WrappedLogger, __: str, event_dict: EventDict) -> EventDict:
    """Arredonda floats para leitura no console; o JSON mantém a precisão."""
    for key, value in event_dict.items():
        if isinstance(value, float):
            event_dict[key] = round(value, _CONSOLE_DIGITS)
    return event_dict


def close_file_sink() -> None:
    """Fecha o arquivo de log aberto por setup_logging, se houver."""
    global _file_sink
    if _file_sink is not None:
        _file_sink.close()
        _file_sink = None


def setup_logging(
    level: str = "INFO",
    log_path: Optional[Path] = None,
    json_format: bool = False,
) -> structlog.BoundLogger:
    """
    Configura o sistema de logging. Uma nova chamada fecha o arquivo
    aberto pela anterior.

    Args:
        level: Nível de log (DEBUG, INFO, WARNING, ERROR)
        log_path: Diretório do arquivo de log; quando definido, os eventos
            vão em JSON para `skeleton_vcl.log` em vez do stderr
        json_format: Se True, usa JSON também no stderr

    Returns:
        Logger configurado
    """
    global _file_sink
    numeric_level = getattr(logging, level.upper())

    shared_processors: list[Processor] = [
        structlog.contextvars.merge_contextvars,
        structlog.processors.add_log_level,
        structlog.processors.TimeStamper(fmt="iso"),
        numpy_values,
        structlog.processors.StackInfoRenderer(),
        structlog.processors.UnicodeDecoder(),
    ]

    close_file_sink()
    if log_path:
        log_path.mkdir(parents=True, exist_ok=True)
        sink = (log_path / LOG_FILENAME).open("a", encoding="utf-8")
        _file_sink = sink
        json_format = True
    else:
        # stderr para não misturar com a saída dos comandos
        sink = sys.stderr

    if json_format:
        processors: list[Processor] = [
            *shared_processors,
            structlog.processors.format_exc_info,
            structlog.processors.JSONRenderer(sort_keys=True),
        ]
    else:
        processors = [
            *shared_processors,
            round_floats,
            structlog.dev.ConsoleRenderer(
                colors=sink.isatty(),
                exception_formatter=structlog.dev.plain_traceback,
            ),
        ]

    structlog.configure(
        processors=processors,
        wrapper_class=structlog.make_filtering_bound_logger(numeric_level),
        context_class=dict,
        logger_factory=structlog.PrintLoggerFactory(file=sink),
        cache_logger_on_first_use=False,
    )
    logging.basicConfig(format="%(message)s", stream=sys.stderr, level=numeric_level)
    return structlog.get_logger()


@contextmanager
def run_context(**context: Any) -> Iterator[None]:
    """
    Anexa o contexto da execução (seed, protocolo, stream...) a todos os
    eventos emitidos dentro do bloco, inclusive por funções livres.
    """
    tokens = structlog.contextvars.bind_contextvars(
        **{key: _to_builtin(value) for key, value in context.items()}
    )
    try:
        yield
    finally:
        structlog.contextvars.reset_contextvars(**tokens)


def get_logger(name: str = "skeleton_vcl", **context: Any) -> structlog.BoundLogger:
    """
    Retorna um logger com contexto.

    Args:
        name: Nome do logger
        **context: Contexto adicional para bind
    """
    logger = structlog.get_logger(name)
    if context:
        logger = logger.bind(**context)
    return logger


class LoggerMixin:
    """Mixin para adicionar logging a classes."""

    @property
    def logger(self) -> structlog.BoundLogger:
        """Retorna logger com nome da classe."""
        if not hasattr(self, "_logger"):
            self._logger = get_logger(self.__class__.__name__)
        return self._logger

    def log_operation(self, operation: str, **kwargs: Any) -> structlog.BoundLogger:
        """Retorna logger com a operação (protocolo, comando) bindada."""
        return self.logger.bind(operation=operation, **kwargs)
