"""
Constantes do sistema: formatos binários, limites numéricos e padrões de fusão.
"""

from typing import Final

# =============================================================================
# FORMATOS BINÁRIOS
# =============================================================================

DATASET_MAGIC: Final[bytes] = b"SKL1"
DATASET_VERSION: Final[int] = 1

CHECKPOINT_MAGIC: Final[bytes] = b"VCLC"
CHECKPOINT_VERSION: Final[int] = 1

CHECKPOINT_SUFFIX: Final[str] = ".vclc"
METRICS_FILENAME: Final[str] = "metrics.jsonl"


# =============================================================================
# LIMITES NUMÉRICOS
# =============================================================================

# Intervalo de clamp de log σ² na cabeça gaussiana
LOGVAR_MIN: Final[float] = -10.0
LOGVAR_MAX: Final[float] = 10.0

# Tolerância de norma unitária aceita pela fila
QUEUE_UNIT_TOLERANCE: Final[float] = 1e-6

# Tolerância abaixo da qual o InfoNCE considera um vetor já normalizado
UNIT_NORM_TOLERANCE: Final[float] = 1e-9

# Constantes do AdamW
ADAM_BETA1: Final[float] = 0.9
ADAM_BETA2: Final[float] = 0.999
ADAM_EPS: Final[float] = 1e-8


# =============================================================================
# DADOS
# =============================================================================

CHANNELS: Final[int] = 3
DEFAULT_FRAMES: Final[int] = 50
DEFAULT_TOPOLOGY: Final[str] = "default17"

# Sujeitos sintéticos atribuídos em rodízio dentro de cada classe
SYNTH_SUBJECTS: Final[int] = 10

# Sujeitos com id % módulo == módulo - 1 vão para o teste
TEST_SUBJECT_MODULUS: Final[int] = 5

# Juntas animadas pela classe sintética 0 (verificação de saliência)
SALIENCY_TARGET_JOINTS: Final[tuple[int, ...]] = (2, 3)


# =============================================================================
# FUSÃO
# =============================================================================

# Pesos na ordem joint, bone, motion
FUSION_WEIGHTS: Final[tuple[float, float, float]] = (0.6, 0.6, 0.4)
