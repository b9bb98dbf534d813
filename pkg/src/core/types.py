"""
Tipos customizados e enumerações do sistema.
"""

from enum import Enum, IntEnum
from typing import Annotated

from pydantic import Field


# ENUMERAÇÕES

class Protocol(str, Enum):
    """Protocolos de treino e avaliação."""

    PRETRAIN = "pretrain"
    LINEAR = "linear"
    SEMI = "semi"
    FINETUNE = "finetune"

    @property
    def is_downstream(self) -> bool:
        """Indica se o protocolo parte de um checkpoint pré-treinado."""
        return self is not Protocol.PRETRAIN


class Stream(str, Enum):
    """Modalidades de entrada do esqueleto."""

    JOINT = "joint"
    BONE = "bone"
    MOTION = "motion"
    ALL = "all"

    @classmethod
    def singles(cls) -> list["Stream"]:
        """Retorna as modalidades individuais, na ordem de fusão."""
        return [cls.JOINT, cls.BONE, cls.MOTION]

    @property
    def code(self) -> int:
        """Código numérico gravado nos checkpoints."""
        return Stream.singles().index(self)

    @classmethod
    def from_code(cls, code: int) -> "Stream":
        """Inverso de `code`."""
        return cls.singles()[code]


class EncoderPreset(str, Enum):
    """Configurações nomeadas do encoder."""

    DESK = "desk"
    PAPER_QUARTER = "paper-quarter"


class RunPreset(str, Enum):
    """Pacotes de hiperparâmetros."""

    DESK = "desk"
    PAPER = "paper"


class Split(str, Enum):
    """Partição à qual um registro de métricas se refere."""

    TRAIN = "train"
    TEST = "test"
    FUSION = "fusion"


class StreamPurpose(IntEnum):
    """
    Finalidade de um fluxo aleatório.
    Compõe a chave (seed, finalidade, ...) dos geradores contador.
    """

    AUGMENT = 1
    NOISE = 2
    SHUFFLE = 3
    INIT = 4
    QUEUE = 5
    SUBSET = 6
    SYNTH = 7


# TIPOS ANOTADOS

# Fração rotulada (0, 1]
LabelFraction = Annotated[float, Field(gt=0.0, le=1.0)]

# Temperatura do InfoNCE
Temperature = Annotated[float, Field(gt=0.0)]

# Coeficiente de momentum
Momentum = Annotated[float, Field(ge=0.0, le=1.0)]

# Taxa de aprendizado
LearningRate = Annotated[float, Field(gt=0.0)]
