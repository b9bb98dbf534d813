"""
Leitura, resolução e serialização da configuração de execução.

Formato: linhas UTF-8 `chave = valor`, comentários com `#`, seções
expressas por chaves pontuadas (ex.: `encoder.preset = desk`).
Precedência: preset < arquivo < flags da linha de comando.
"""

import hashlib
from collections.abc import Mapping
from pathlib import Path
from typing import Any, Optional

from pydantic import ValidationError

from config.presets import RUN_PRESETS
from src.core.exceptions import ConfigError
from src.core.models import RunConfig
from src.core.types import RunPreset

# Chaves que não alteram a trajetória numérica de um pré-treino
HASH_EXCLUDED_KEYS: frozenset[str] = frozenset(
    {"output_dir", "workers", "eval.checkpoint", "train.resume", "train.epochs"}
)

_NULL_LITERALS = {"", "none", "null"}


def parse_config_text(text: str) -> dict[str, Optional[str]]:
    """
    Converte o texto do arquivo em um dicionário plano.

    Raises:
        ConfigError: Linha sem `=` ou chave repetida
    """
    values: dict[str, Optional[str]] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(
                f"Linha {number} não segue o formato 'chave = valor'",
                key=line,
                details={"line": number},
            )
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigError(f"Linha {number} sem chave", key="", details={"line": number})
        if key in values:
            raise ConfigError(f"Chave repetida: {key}", key=key, details={"line": number})
        values[key] = None if value.lower() in _NULL_LITERALS else value
    return values


def _nest(flat: Mapping[str, Any]) -> dict[str, Any]:
    """{"a.b": 1} -> {"a": {"b": 1}}."""
    nested: dict[str, Any] = {}
    for key, value in flat.items():
        *sections, leaf = key.split(".")
        node = nested
        for section in sections:
            child = node.setdefault(section, {})
            if not isinstance(child, dict):
                raise ConfigError(f"Chave {key} conflita com valor escalar", key=key)
            node = child
        if isinstance(node.get(leaf), dict):
            raise ConfigError(f"Seção {key} não aceita valor escalar", key=key)
        node[leaf] = value
    return nested


def _error_key(error: ValidationError) -> str:
    first = error.errors()[0]
    return ".".join(str(part) for part in first["loc"])


def build_run_config(
    file_values: Optional[Mapping[str, Optional[str]]] = None,
    overrides: Optional[Mapping[str, Optional[str]]] = None,
    require_checkpoint: bool = True,
    defaults: Optional[Mapping[str, Any]] = None,
) -> RunConfig:
    """
    Resolve preset, valores do arquivo e flags em um RunConfig validado.

    Args:
        file_values: Valores lidos do arquivo
        overrides: Valores vindos da linha de comando
        require_checkpoint: Exige eval.checkpoint para protocolos downstream
        defaults: Valores do ambiente, entre o preset e o arquivo

    Raises:
        ConfigError: Chave desconhecida, valor inválido ou checkpoint ausente
    """
    file_values = dict(file_values or {})
    overrides = dict(overrides or {})

    preset_name = overrides.get("preset") or file_values.get("preset") or RunPreset.DESK.value
    try:
        preset = RunPreset(preset_name)
    except ValueError as e:
        raise ConfigError(f"Preset desconhecido: {preset_name}", key="preset", cause=e) from e

    flat: dict[str, Any] = {
        **RUN_PRESETS[preset],
        **dict(defaults or {}),
        **file_values,
        **overrides,
    }
    flat["preset"] = preset.value

    try:
        config = RunConfig.model_validate(_nest(flat))
    except ValidationError as e:
        key = _error_key(e)
        message = e.errors()[0]["msg"]
        raise ConfigError(f"Configuração inválida em '{key}': {message}", key=key, cause=e) from e

    if require_checkpoint and config.protocol.is_downstream and config.eval.checkpoint is None:
        raise ConfigError(
            f"Protocolo {config.protocol.value} exige um checkpoint pré-treinado",
            key="eval.checkpoint",
        )
    return config


def load_run_config(
    path: Optional[Path] = None,
    overrides: Optional[Mapping[str, Optional[str]]] = None,
    require_checkpoint: bool = True,
    defaults: Optional[Mapping[str, Any]] = None,
) -> RunConfig:
    """
    Carrega um arquivo de configuração (opcional) e aplica as flags.

    Raises:
        ConfigError: Arquivo ilegível ou configuração inválida
    """
    file_values: dict[str, Optional[str]] = {}
    if path is not None:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as e:
            raise ConfigError(f"Não foi possível ler {path}", key="<arquivo>", cause=e) from e
        file_values = parse_config_text(text)
    return build_run_config(file_values, overrides, require_checkpoint, defaults)


# =============================================================================
# SERIALIZAÇÃO CANÔNICA
# =============================================================================

def _format_value(value: Any) -> str:
    if value is None:
        return "none"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (list, tuple)):
        return ",".join(_format_value(item) for item in value)
    return str(value)


def flatten_config(config: RunConfig) -> dict[str, str]:
    """Todas as chaves folha, já formatadas, em ordem alfabética."""
    flat: dict[str, str] = {}

    def walk(prefix: str, node: Mapping[str, Any]) -> None:
        for key, value in node.items():
            name = f"{prefix}{key}"
            if isinstance(value, Mapping):
                walk(f"{name}.", value)
            else:
                flat[name] = _format_value(value)

    walk("", config.model_dump(mode="json"))
    return dict(sorted(flat.items()))


def dump_resolved(config: RunConfig) -> str:
    """Texto canônico da configuração resolvida (relido por load_run_config)."""
    lines = [f"{key} = {value}" for key, value in flatten_config(config).items()]
    return "\n".join(lines) + "\n"


def config_hash(config: RunConfig) -> int:
    """
    Hash de 64 bits gravado nos checkpoints: primeiros 8 bytes
    (little-endian) do SHA-256 do texto canônico das chaves relevantes.
    """
    canonical = "\n".join(
        f"{key} = {value}"
        for key, value in flatten_config(config).items()
        if key not in HASH_EXCLUDED_KEYS
    )
    digest = hashlib.sha256(canonical.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little")
