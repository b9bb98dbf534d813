"""
Modelos de dados Pydantic para o sistema.
Define configurações de execução, do encoder, da augmentação e os
registros de métricas.
"""

from pathlib import Path
from typing import Any, Optional

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    computed_field,
    field_validator,
    model_validator,
)

from src.core.constants import (
    DEFAULT_FRAMES,
    DEFAULT_TOPOLOGY,
    FUSION_WEIGHTS,
    TEST_SUBJECT_MODULUS,
)
from src.core.types import (
    EncoderPreset,
    LabelFraction,
    LearningRate,
    Momentum,
    Protocol,
    RunPreset,
    Stream,
    Temperature,
)


def _split_csv(value: Any) -> Any:
    """Aceita listas escritas como "a,b,c" no arquivo de configuração."""
    if isinstance(value, str):
        return [item.strip() for item in value.split(",") if item.strip()]
    return value


class AugmentationConfig(BaseModel):
    """Parâmetros das augmentações estocásticas."""

    model_config = ConfigDict(frozen=True)

    shear_amplitude: float = Field(default=0.5, ge=0.0)
    crop_padding_ratio: int = Field(default=6, ge=1)
    rng_seed: int = Field(default=0, ge=0, lt=2**64)


class STGCNConfig(BaseModel):
    """Arquitetura do encoder ST-GCN reduzido."""

    model_config = ConfigDict(frozen=True)

    widths: list[int] = Field(..., min_length=1)
    kernel: int = Field(default=5, ge=1)
    strides: list[int]
    embed_dim: int = Field(default=16, ge=2)
    in_channels: int = Field(default=3, ge=1)

    @field_validator("widths", "strides", mode="before")
    @classmethod
    def parse_lists(cls, v: Any) -> Any:
        return _split_csv(v)

    @field_validator("kernel")
    @classmethod
    def kernel_odd(cls, v: int) -> int:
        """Kernel temporal precisa ser ímpar para padding "same"."""
        if v % 2 == 0:
            raise ValueError("kernel temporal deve ser ímpar")
        return v

    @model_validator(mode="after")
    def strides_match_widths(self) -> "STGCNConfig":
        if len(self.strides) != len(self.widths):
            raise ValueError("strides e widths devem ter o mesmo comprimento")
        if any(s < 1 for s in self.strides) or any(w < 1 for w in self.widths):
            raise ValueError("strides e widths devem ser positivos")
        return self

    @computed_field
    @property
    def feature_dim(self) -> int:
        """Dimensão do vetor após o pooling global."""
        return self.widths[-1]


class Schedule(BaseModel):
    """Taxa de aprendizado base com marcos multiplicativos."""

    model_config = ConfigDict(frozen=True)

    base_lr: float = Field(..., gt=0.0)
    milestones: list[tuple[int, float]] = Field(default_factory=list)

    @field_validator("milestones")
    @classmethod
    def validate_milestones(cls, v: list[tuple[int, float]]) -> list[tuple[int, float]]:
        epochs = [epoch for epoch, _ in v]
        if any(b <= a for a, b in zip(epochs, epochs[1:])):
            raise ValueError("marcos devem ser estritamente crescentes")
        if any(factor <= 0 for _, factor in v):
            raise ValueError("fatores devem ser positivos")
        return v

    def lr_at(self, epoch: int) -> float:
        """Taxa vigente na época (base 0); marcos valem a partir da própria época."""
        lr = self.base_lr
        for milestone, factor in self.milestones:
            if epoch >= milestone:
                lr *= factor
        return lr

    @classmethod
    def step_decay(
        cls, base_lr: float, milestone: Optional[int], factor: float = 0.1
    ) -> "Schedule":
        """Decaimento único por `factor` na época `milestone`."""
        return cls(
            base_lr=base_lr, milestones=[(milestone, factor)] if milestone is not None else []
        )


class MetricsRecord(BaseModel):
    """Uma linha do arquivo de métricas."""

    epoch: int = Field(..., ge=0)
    split: str
    protocol: str
    loss_total: Optional[float] = None
    loss_infonce: Optional[float] = None
    loss_kl_q: Optional[float] = None
    loss_kl_k: Optional[float] = None
    ce_loss: Optional[float] = None
    top1: Optional[float] = Field(default=None, ge=0.0, le=1.0)
    seconds: float = Field(default=0.0, ge=0.0)

    @model_validator(mode="after")
    def validate_total(self) -> "MetricsRecord":
        """Total deve ser a soma das componentes presentes."""
        parts = [p for p in (self.loss_infonce, self.loss_kl_q, self.loss_kl_k) if p is not None]
        if self.loss_total is not None and parts:
            if abs(self.loss_total - sum(parts)) > 1e-9 * max(1.0, abs(self.loss_total)):
                raise ValueError("loss_total difere da soma das componentes")
        return self

    def without_timing(self) -> dict[str, Any]:
        """Campos determinísticos (exclui o tempo de relógio)."""
        return self.model_dump(exclude={"seconds"})


# =============================================================================
# CONFIGURAÇÃO DE EXECUÇÃO
# =============================================================================

class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid")


class DataSection(_Section):
    """Origem dos dados: arquivo SKL1 ou especificação sintética."""

    path: Optional[Path] = None
    classes: int = Field(default=8, ge=2)
    per_class: int = Field(default=40, ge=2)
    frames: int = Field(default=DEFAULT_FRAMES, ge=2)
    topology: str = DEFAULT_TOPOLOGY
    jitter: float = Field(default=0.02, ge=0.0)
    test_subject_modulus: int = Field(default=TEST_SUBJECT_MODULUS, ge=2)


class EncoderSection(_Section):
    preset: EncoderPreset = EncoderPreset.DESK
    embed_dim: Optional[int] = Field(default=None, ge=2)


class ContrastiveSection(_Section):
    temperature: Temperature = 0.07
    momentum: Momentum = 0.99
    queue_size: int = Field(default=512, ge=1)


class AugmentSection(_Section):
    shear: float = Field(default=0.5, ge=0.0)
    crop_ratio: int = Field(default=6, ge=1)

    def to_config(self, seed: int) -> AugmentationConfig:
        return AugmentationConfig(
            shear_amplitude=self.shear,
            crop_padding_ratio=self.crop_ratio,
            rng_seed=seed,
        )


class TrainSection(_Section):
    lr: LearningRate = 0.001
    epochs: int = Field(default=30, ge=0)
    batch_size: int = Field(default=32, ge=1)
    weight_decay: float = Field(default=1e-4, ge=0.0)
    milestone: Optional[int] = Field(default=25, ge=0)
    resume: Optional[Path] = None

    def schedule(self) -> Schedule:
        return Schedule.step_decay(self.lr, self.milestone)


class EvalSection(_Section):
    checkpoint: Optional[Path] = None
    lr: LearningRate = 0.03
    epochs: int = Field(default=10, ge=0)
    milestone: Optional[int] = Field(default=8, ge=0)
    batch_size: int = Field(default=32, ge=1)
    fraction: LabelFraction = 0.1

    def schedule(self) -> Schedule:
        return Schedule.step_decay(self.lr, self.milestone)


class FusionSection(_Section):
    weights: list[float] = Field(default_factory=lambda: list(FUSION_WEIGHTS))

    @field_validator("weights", mode="before")
    @classmethod
    def parse_weights(cls, v: Any) -> Any:
        return _split_csv(v)

    @field_validator("weights")
    @classmethod
    def validate_weights(cls, v: list[float]) -> list[float]:
        if len(v) != len(Stream.singles()) or any(w < 0 for w in v):
            raise ValueError("fusion.weights exige três pesos não negativos (joint, bone, motion)")
        return v


class RunConfig(_Section):
    """
    Configuração completa de uma execução.
    Chaves desconhecidas são rejeitadas em todos os níveis.
    """

    protocol: Protocol = Protocol.PRETRAIN
    preset: RunPreset = RunPreset.DESK
    stream: Stream = Stream.JOINT
    variational: bool = True
    seed: int = Field(default=0, ge=0, lt=2**32)
    workers: int = Field(default=1, ge=1, le=64)
    output_dir: Path = Path("runs/default")

    data: DataSection = Field(default_factory=DataSection)
    encoder: EncoderSection = Field(default_factory=EncoderSection)
    contrastive: ContrastiveSection = Field(default_factory=ContrastiveSection)
    augment: AugmentSection = Field(default_factory=AugmentSection)
    train: TrainSection = Field(default_factory=TrainSection)
    eval: EvalSection = Field(default_factory=EvalSection)
    fusion: FusionSection = Field(default_factory=FusionSection)
