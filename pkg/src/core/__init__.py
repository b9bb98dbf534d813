"""
Módulo core: modelos de dados, exceções, tipos e constantes.
"""

from src.core.models import (
    AugmentationConfig,
    MetricsRecord,
    RunConfig,
    Schedule,
    STGCNConfig,
)
from src.core.exceptions import (
    VCLError,
    CheckpointMismatchError,
    ConfigError,
    ContractError,
    DataFormatError,
    DegenerateInputError,
    DimensionError,
    InsufficientLabelsError,
    NonFiniteError,
)
from src.core.types import (
    EncoderPreset,
    Protocol,
    RunPreset,
    Split,
    Stream,
    StreamPurpose,
)
from src.core.constants import (
    CHECKPOINT_MAGIC,
    DATASET_MAGIC,
    FUSION_WEIGHTS,
)

__all__ = [
    # Models
    "AugmentationConfig",
    "MetricsRecord",
    "RunConfig",
    "Schedule",
    "STGCNConfig",
    # Exceptions
    "VCLError",
    "CheckpointMismatchError",
    "ConfigError",
    "ContractError",
    "DataFormatError",
    "DegenerateInputError",
    "DimensionError",
    "InsufficientLabelsError",
    "NonFiniteError",
    # Types
    "EncoderPreset",
    "Protocol",
    "RunPreset",
    "Split",
    "Stream",
    "StreamPurpose",
    # Constants
    "CHECKPOINT_MAGIC",
    "DATASET_MAGIC",
    "FUSION_WEIGHTS",
]
