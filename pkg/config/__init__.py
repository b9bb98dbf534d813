"""
Módulo de configuração do sistema.
Exporta as configurações principais para uso em todo o projeto.
"""

from config.settings import Settings, get_settings
from config.logging_config import LoggerMixin, get_logger, run_context, setup_logging
from config.presets import ENCODER_PRESETS, RUN_PRESETS, encoder_config
from config.run_config import (
    build_run_config,
    config_hash,
    dump_resolved,
    load_run_config,
    parse_config_text,
)

__all__ = [
    "Settings",
    "get_settings",
    "LoggerMixin",
    "get_logger",
    "run_context",
    "setup_logging",
    "ENCODER_PRESETS",
    "RUN_PRESETS",
    "encoder_config",
    "build_run_config",
    "config_hash",
    "dump_resolved",
    "load_run_config",
    "parse_config_text",
]
