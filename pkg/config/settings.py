"""
Configurações de processo usando Pydantic Settings.
Carrega variáveis de ambiente (prefixo VCL_) e define valores padrão.
"""

from functools import lru_cache
from pathlib import Path
from typing import Literal, Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Configurações principais do processo."""

    model_config = SettingsConfigDict(
        env_prefix="VCL_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # Ambiente
    env: Literal["development", "production", "testing"] = "development"
    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = "INFO"
    log_json: bool = False
    log_path: Optional[Path] = None

    # Raiz para output_dir relativos das execuções
    output_root: Path = Field(default=Path("."))

    # Paralelismo de augmentação (1 = modo serial canônico)
    workers: int = Field(default=1, ge=1, le=64)

    def resolve_output(self, output_dir: Path) -> Path:
        """Resolve um diretório de saída relativo contra output_root."""
        if output_dir.is_absolute():
            return output_dir
        return self.output_root / output_dir


@lru_cache
def get_settings() -> Settings:
    """
    Retorna instância singleton das configurações.
    Usa cache para evitar recarregar .env múltiplas vezes.
    """
    return Settings()
